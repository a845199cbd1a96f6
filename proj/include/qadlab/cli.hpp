// Copyright 2026 The qadlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

// Command-line front end: `qadlab <command> [flags]`. Kept in a header so the
// tests can drive run() in-process.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qadlab/experiments.hpp"

namespace qadlab::cli {

inline const std::vector<std::string>& commands() {
  static const std::vector<std::string> names{"qubit-example", "qudit-sweep",
                                              "capacity-scan", "adaptive-demo",
                                              "sic-search",    "mub-check"};
  return names;
}

struct CliConfig {
  std::string command;
  std::uint64_t seed = 20261019;
  std::optional<std::vector<int>> dims;  // command-specific default when unset
  int trials = 200;
  double purity = 0.7;
  std::string out_dir;
  std::string format = "both";  // csv | json | both
  unsigned threads = 1;
  std::size_t n_coarse = 10000;
  std::string state = "diagonal";
  bool exact = false;
  int restarts = 64;
  std::string tag;

  std::vector<int> dims_or_default() const {
    if (dims) return *dims;
    if (command == "capacity-scan") return {2, 4, 8, 13};
    if (command == "adaptive-demo") return {3};
    if (command == "sic-search") return {2, 3, 4, 5};
    if (command == "mub-check") return {2, 3, 5, 7, 11, 13};
    return {2, 3, 4, 5, 7, 8, 11, 13};
  }

  bool want_csv() const { return format == "csv" || format == "both"; }
  bool want_json() const { return format == "json" || format == "both"; }

  void validate() const {
    if (trials < 1) throw ValidationError("--trials must be >= 1");
    if (!(purity > 0.0) || purity > 1.0) throw ValidationError("--purity must lie in (0, 1]");
    for (int d : dims_or_default()) {
      if (d < 2) throw ValidationError("--dims entries must be >= 2");
    }
    if (dims && dims->empty()) throw ValidationError("--dims must be non-empty");
    if (format != "csv" && format != "json" && format != "both") {
      throw ValidationError("--format must be csv, json or both");
    }
    if (threads < 1) throw ValidationError("--threads must be >= 1");
    if (restarts < 1) throw ValidationError("--restarts must be >= 1");
  }
};

namespace detail {

inline std::string join_dims(const std::vector<int>& dims) {
  std::string s;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    s += (i ? "-" : "") + std::to_string(dims[i]);
  }
  return s;
}

inline std::string with_tag(std::string stem, const CliConfig& c) {
  if (!c.tag.empty()) stem += "_" + c.tag;
  return stem;
}

class Outputs {
 public:
  Outputs(std::filesystem::path dir, std::ostream& log) : dir_(std::move(dir)), log_(log) {
    std::filesystem::create_directories(dir_);
  }

  void csv(const std::string& name, const Table& t) {
    write(name, [&](std::ostream& os) { write_csv(os, t); });
  }

  void json(const std::string& name, const Json& j) {
    write(name, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
  }

 private:
  template <typename Fn>
  void write(const std::string& name, Fn&& fn) {
    const auto path = dir_ / name;
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    fn(os);
    if (!os) throw std::runtime_error("failed writing " + path.string());
    log_ << "wrote " << path.string() << '\n';
  }

  std::filesystem::path dir_;
  std::ostream& log_;
};

/// Column-aligned rendering for the terminal summary.
inline void print_table(std::ostream& os, const Table& t, int precision = 4,
                        bool scientific = false) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back(t.columns);
  for (const auto& row : t.rows) {
    std::vector<std::string> r;
    for (const auto& c : row) {
      if (const double* x = std::get_if<double>(&c)) {
        std::ostringstream s;
        if (scientific) {
          s << std::scientific;
        } else {
          s << std::fixed;
        }
        s << std::setprecision(precision) << *x;
        r.push_back(s.str());
      } else {
        r.push_back(format_cell(c));
      }
    }
    cells.push_back(std::move(r));
  }
  std::vector<std::size_t> width(t.columns.size(), 0);
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
  }
  for (const auto& r : cells) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << (i ? "  " : "") << std::setw(static_cast<int>(width[i])) << r[i];
    }
    os << '\n';
  }
}

inline void apply_json_config(const Json& j, CliConfig& c) {
  if (j.contains("command")) c.command = j["command"].get<std::string>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("dims")) c.dims = j["dims"].get<std::vector<int>>();
  if (j.contains("trials")) c.trials = j["trials"].get<int>();
  if (j.contains("purity")) c.purity = j["purity"].get<double>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("format")) c.format = j["format"].get<std::string>();
  if (j.contains("threads")) c.threads = j["threads"].get<unsigned>();
  if (j.contains("n_coarse")) c.n_coarse = j["n_coarse"].get<std::size_t>();
  if (j.contains("state")) c.state = j["state"].get<std::string>();
  if (j.contains("exact")) c.exact = j["exact"].get<bool>();
  if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
  if (j.contains("tag")) c.tag = j["tag"].get<std::string>();
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Commands

inline void qubit_example(const CliConfig& c, detail::Outputs& files, std::ostream& out) {
  const QubitExampleReport r = run_qubit_example();
  const Table t = qubit_example_table(r);
  out << "Bloch (0.3, 0, 0.6), outcome |0>, p0 = " << format_double(r.p0) << "\n\n";
  detail::print_table(out, t);
  out << "\n{I, H} estimate eigenvalues: " << format_double(r.hadamard_eigenvalues(0))
      << ", " << format_double(r.hadamard_eigenvalues(1))
      << "\nqubit closed form Tr(rs) + 2 sqrt(det r det s): "
      << format_double(r.hadamard_closed_form) << " (published value 0.91)\n";
  const std::string stem = detail::with_tag("qubit_example", c);
  if (c.want_csv()) files.csv(stem + ".csv", t);
  if (c.want_json()) files.json(stem + ".json", to_json(r));
}

inline void qudit_sweep(const CliConfig& c, detail::Outputs& files, std::ostream& out) {
  SweepConfig cfg;
  cfg.dims = c.dims_or_default();
  cfg.trials = c.trials;
  cfg.target_purity = c.purity;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  const SweepResult r = run_qudit_sweep(cfg);
  const auto comparison = compare_with_published(r.summaries);

  Table summary{{"d", "n", "standard", "se", "hw", "matched", "ratio_hw", "spec_err_hw",
                 "spec_err_matched"},
                {}};
  for (const auto& s : r.summaries) {
    summary.rows.push_back({std::int64_t{s.d}, static_cast<std::uint64_t>(s.n),
                            s.at("fidelity_standard").mean,
                            s.at("fidelity_standard").std_error, s.at("fidelity_hw").mean,
                            s.at("fidelity_matched").mean, s.ratio_hw_over_standard,
                            s.at("spectral_error_hw").mean,
                            s.at("spectral_error_matched").mean});
  }
  detail::print_table(out, summary);
  if (!comparison.empty()) {
    out << "\nagainst published values (discrepancy = measured - published):\n";
    Table short_cmp{{"d", "std", "published", "disc", "hw", "published", "disc", "matched",
                     "published", "disc"},
                    {}};
    for (const auto& row : comparison) {
      short_cmp.rows.push_back({std::int64_t{row.d}, row.standard, row.published.standard,
                                row.standard_discrepancy, row.hw, row.published.hw,
                                row.hw_discrepancy, row.matched, row.published.matched,
                                row.matched_discrepancy});
    }
    detail::print_table(out, short_cmp, 3);
  }

  std::ostringstream stem_os;
  stem_os << "qudit_sweep_d" << detail::join_dims(cfg.dims) << "_t" << cfg.trials << "_p"
          << format_double(cfg.target_purity) << "_s" << cfg.seed;
  const std::string stem = detail::with_tag(stem_os.str(), c);
  const Table records = records_table(r.records);
  if (c.want_csv()) {
    files.csv(stem + "_records.csv", records);
    files.csv(stem + "_comparison.csv", comparison_table(comparison));
  }
  if (c.want_json()) {
    files.json(stem + "_records.json", table_to_json(records));
    files.json(stem + "_comparison.json", table_to_json(comparison_table(comparison)));
  }
  files.json(stem + "_summary.json", to_json(r.summaries));
}

inline void capacity_scan(const CliConfig& c, detail::Outputs& files, std::ostream& out) {
  CapacityConfig cfg;
  cfg.dims = c.dims_or_default();
  cfg.trials = c.trials;
  cfg.seed = c.seed;
  cfg.threads = c.threads;
  const auto records = run_capacity_scan(cfg);
  Table brief{{"d", "states", "min_purity", "max_purity", "min_kappa", "max_kappa",
               "max_kappa_residual"},
              {}};
  for (int d : cfg.dims) {
    double pmin = 1.0, pmax = 0.0, kmin = 1e300, kmax = 0.0, resid = 0.0;
    std::uint64_t n = 0;
    for (const auto& r : records) {
      if (r.d != d) continue;
      ++n;
      pmin = std::min(pmin, r.purity);
      pmax = std::max(pmax, r.purity);
      kmin = std::min(kmin, r.kappa);
      kmax = std::max(kmax, r.kappa);
      resid = std::max(resid, std::abs(r.kappa - (1.0 + 1.0 / r.purity)));
    }
    brief.rows.push_back({std::int64_t{d}, n, pmin, pmax, kmin, kmax, resid});
  }
  detail::print_table(out, brief);
  std::ostringstream stem_os;
  stem_os << "capacity_scan_d" << detail::join_dims(cfg.dims) << "_t" << cfg.trials << "_s"
          << cfg.seed;
  const std::string stem = detail::with_tag(stem_os.str(), c);
  const Table t = capacity_table(records);
  if (c.want_csv()) files.csv(stem + "_records.csv", t);
  if (c.want_json()) files.json(stem + "_records.json", table_to_json(t));
}

inline void adaptive_demo(const CliConfig& c, detail::Outputs& files, std::ostream& out) {
  Table brief{{"d", "state", "delta_q_before", "delta_q_after", "lambda_min", "lambda_max",
               "F_gevp", "F_baseline", "order"},
              {}};
  for (int d : c.dims_or_default()) {
    AdaptiveDemoConfig cfg;
    cfg.d = d;
    cfg.n_coarse = c.n_coarse;
    cfg.seed = c.seed;
    cfg.state = c.state;
    cfg.purity = c.purity;
    cfg.exact_probabilities = c.exact;
    const AdaptiveDemoReport r = run_adaptive_demo(cfg);
    const AdaptiveReport& p = r.pipeline;
    brief.rows.push_back({std::int64_t{d}, r.state, p.delta_q_before, p.delta_q_after,
                          p.lambda_spectrum.front(), p.lambda_spectrum.back(),
                          p.fidelity_gevp_group, p.fidelity_baseline_group,
                          static_cast<std::uint64_t>(p.gevp_group_order)});
    std::ostringstream stem_os;
    stem_os << "adaptive_demo_d" << d << "_" << cfg.state << "_n"
            << (cfg.exact_probabilities ? std::string("exact") : std::to_string(cfg.n_coarse))
            << "_s" << cfg.seed;
    const std::string stem = detail::with_tag(stem_os.str(), c);
    if (c.want_json()) files.json(stem + ".json", to_json(r));
  }
  detail::print_table(out, brief, 6);
  if (c.want_csv()) {
    std::ostringstream stem_os;
    stem_os << "adaptive_demo_d" << detail::join_dims(c.dims_or_default()) << "_" << c.state
            << "_n" << (c.exact ? std::string("exact") : std::to_string(c.n_coarse)) << "_s"
            << c.seed << "_summary";
    files.csv(detail::with_tag(stem_os.str(), c) + ".csv", brief);
  }
}

inline void sic_search(const CliConfig& c, detail::Outputs& files, std::ostream& out) {
  Table brief{{"d", "zauner_residual", "restart", "converged", "completeness",
               "max_overlap_error"},
              {}};
  const std::vector<int> dims = c.dims_or_default();
  for (int d : dims) {
    if (d > 13) throw ValidationError("sic-search supports d <= 13");
    SicSearchConfig cfg;
    cfg.restarts = c.restarts;
    cfg.seed = c.seed;
    const SicSearchResult r = run_sic_search(d, cfg);
    brief.rows.push_back({std::int64_t{d}, r.fiducial.zauner_residual,
                          std::int64_t{r.fiducial.restart},
                          std::string(r.fiducial.converged ? "yes" : "no"), r.completeness,
                          r.max_overlap_error});
    if (c.want_json()) {
      Json j{{"fiducial", to_json(r.fiducial)}};
      if (r.povm) j["povm"] = to_json(*r.povm, &r.fiducial);
      std::ostringstream stem_os;
      stem_os << "sic_fiducial_d" << d << "_r" << c.restarts << "_s" << c.seed;
      files.json(detail::with_tag(stem_os.str(), c) + ".json", j);
    }
  }
  detail::print_table(out, brief, 3, true);
  if (c.want_csv()) {
    std::ostringstream stem_os;
    stem_os << "sic_search_d" << detail::join_dims(dims) << "_r" << c.restarts << "_s"
            << c.seed << "_summary";
    files.csv(detail::with_tag(stem_os.str(), c) + ".csv", brief);
  }
}

inline void mub_check(const CliConfig& c, detail::Outputs& files, std::ostream& out) {
  Table brief{{"d", "bases", "max_overlap_defect", "completeness"}, {}};
  const std::vector<int> dims = c.dims_or_default();
  for (int d : dims) {
    if (!is_prime(d) || d > 13) {
      throw ValidationError("mub-check needs prime d <= 13, got " + std::to_string(d));
    }
    const MubCheckResult r = run_mub_check(d);
    brief.rows.push_back({std::int64_t{d}, static_cast<std::uint64_t>(r.bases),
                          r.max_overlap_defect, r.completeness});
  }
  detail::print_table(out, brief, 3, true);
  std::ostringstream stem_os;
  stem_os << "mub_check_d" << detail::join_dims(dims);
  const std::string stem = detail::with_tag(stem_os.str(), c);
  if (c.want_csv()) files.csv(stem + ".csv", brief);
  if (c.want_json()) files.json(stem + ".json", table_to_json(brief));
}

// ---------------------------------------------------------------------------

/// Exit status: 0 success, 2 usage or validation error, 1 runtime failure.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Group-averaged single-copy state estimation experiments", "qadlab"};
  CliConfig c;
  std::string command;
  std::string config_path;
  std::vector<int> dims;
  std::string commands_help;
  for (const auto& name : commands()) commands_help += (commands_help.empty() ? "" : "|") + name;
  app.add_option("command", command, commands_help)
      ->required()
      ->check(CLI::IsMember(commands()));
  auto* o_seed = app.add_option("--seed", c.seed, "master RNG seed")->capture_default_str();
  auto* o_dims = app.add_option("--dims", dims, "comma-separated dimensions")->delimiter(',');
  auto* o_trials = app.add_option("--trials", c.trials, "trials per dimension")
                       ->capture_default_str();
  auto* o_purity = app.add_option("--purity", c.purity, "target purity")->capture_default_str();
  auto* o_out = app.add_option("--out-dir", c.out_dir, "output directory (else $QADLAB_OUT, else .)");
  auto* o_format = app.add_option("--format", c.format, "csv|json|both")->capture_default_str();
  auto* o_threads = app.add_option("--threads", c.threads, "worker threads")->capture_default_str();
  auto* o_ncoarse = app.add_option("--n-coarse", c.n_coarse, "stage-1 SIC shots (adaptive-demo)")
                        ->capture_default_str();
  auto* o_state = app.add_option("--state", c.state,
                                 "diagonal|maximally_mixed|ginibre (adaptive-demo)")
                      ->capture_default_str();
  auto* o_exact = app.add_flag("--exact", c.exact,
                               "use exact stage-1 probabilities (adaptive-demo)");
  auto* o_restarts = app.add_option("--restarts", c.restarts, "SIC search restarts")
                         ->capture_default_str();
  auto* o_tag = app.add_option("--tag", c.tag, "suffix for output file names");
  app.add_option("--config", config_path, "JSON file with the same fields; flags win");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    CliConfig merged;
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw ValidationError("cannot read --config " + config_path);
      Json j;
      try {
        j = Json::parse(is);
        detail::apply_json_config(j, merged);
      } catch (const Json::exception& e) {
        throw ValidationError(std::string("bad --config: ") + e.what());
      }
    }
    merged.command = command;
    if (o_seed->count()) merged.seed = c.seed;
    if (o_dims->count()) merged.dims = dims;
    if (o_trials->count()) merged.trials = c.trials;
    if (o_purity->count()) merged.purity = c.purity;
    if (o_out->count()) merged.out_dir = c.out_dir;
    if (o_format->count()) merged.format = c.format;
    if (o_threads->count()) merged.threads = c.threads;
    if (o_ncoarse->count()) merged.n_coarse = c.n_coarse;
    if (o_state->count()) merged.state = c.state;
    if (o_exact->count()) merged.exact = c.exact;
    if (o_restarts->count()) merged.restarts = c.restarts;
    if (o_tag->count()) merged.tag = c.tag;
    if (merged.out_dir.empty()) {
      const char* env = std::getenv("QADLAB_OUT");
      merged.out_dir = (env != nullptr && *env != '\0') ? env : ".";
    }
    merged.validate();

    detail::Outputs files(merged.out_dir, out);
    if (command == "qubit-example") {
      qubit_example(merged, files, out);
    } else if (command == "qudit-sweep") {
      qudit_sweep(merged, files, out);
    } else if (command == "capacity-scan") {
      capacity_scan(merged, files, out);
    } else if (command == "adaptive-demo") {
      adaptive_demo(merged, files, out);
    } else if (command == "sic-search") {
      sic_search(merged, files, out);
    } else if (command == "mub-check") {
      mub_check(merged, files, out);
    }
    return 0;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  } catch (const std::exception& e) {
    err << "failure: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace qadlab::cli
