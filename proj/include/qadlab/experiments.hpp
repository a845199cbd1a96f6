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

// Numerical studies: the qubit worked example, the qudit fidelity sweep,
// capacity scans, the adaptive GEVP demo, SIC search and MUB checks, plus
// the CSV/JSON writers used by the command-line tool.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "qadlab/ensembles.hpp"
#include "qadlab/estimators.hpp"
#include "qadlab/gevp.hpp"
#include "qadlab/groups.hpp"
#include "qadlab/io.hpp"
#include "qadlab/metrics.hpp"
#include "qadlab/povm.hpp"
#include "qadlab/rng.hpp"

namespace qadlab {

// ---------------------------------------------------------------------------
// Tabular output

using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

inline std::string format_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", x);
  return buf;
}

inline std::string format_cell(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, double>) {
          return format_double(v);
        } else if constexpr (std::is_same_v<T, std::string>) {
          return v;
        } else {
          return std::to_string(v);
        }
      },
      c);
}

inline void write_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) {
    os << (i ? "," : "") << t.columns[i];
  }
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << (i ? "," : "") << format_cell(row[i]);
    }
    os << '\n';
  }
}

/// Array of objects keyed by column name.
inline Json table_to_json(const Table& t) {
  Json out = Json::array();
  for (const auto& row : t.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::visit([&](const auto& v) { obj[t.columns[i]] = v; }, row[i]);
    }
    out.push_back(std::move(obj));
  }
  return out;
}

/// Runs fn(0..n-1) on up to `threads` workers. Results must be written to
/// pre-sized per-index slots so the outcome is independent of scheduling.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  const auto workers = static_cast<unsigned>(
      std::min<std::size_t>(std::max(1u, threads), std::max<std::size_t>(n, 1)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          next.store(n);
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// Qubit worked example

struct QubitExampleRow {
  std::string method;
  Matrix estimate;
  Eigen::Index rank = 0;
  double uhlmann = 0.0;
  double linear = 0.0;
  Eigen::Index published_rank = 0;
  double published_fidelity = 0.0;
  std::string note;
  bool uhlmann_matches_published = false;  // within the published 2-decimal rounding
  bool linear_matches_published = false;
};

struct QubitExampleReport {
  std::array<double, 3> bloch{0.3, 0.0, 0.6};
  Matrix rho;
  RealVector true_eigenvalues;
  double p0 = 0.0;
  RealVector hadamard_eigenvalues;
  double hadamard_closed_form = 0.0;  // Tr(rho s) + 2 sqrt(det rho det s)
  std::vector<QubitExampleRow> rows;
};

inline double qubit_closed_form_fidelity(const Matrix& a, const Matrix& b) {
  const double det_a = (a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)).real();
  const double det_b = (b(0, 0) * b(1, 1) - b(0, 1) * b(1, 0)).real();
  return (a * b).trace().real() + 2.0 * std::sqrt(std::max(det_a * det_b, 0.0));
}

inline QubitExampleReport run_qubit_example() {
  QubitExampleReport rep;
  const DensityMatrix rho = qubit_from_bloch(rep.bloch);
  rep.rho = rho.matrix();
  rep.true_eigenvalues = rho.eigenvalues();
  const Povm comp = computational_povm(2);
  rep.p0 = born_probabilities(rho, comp).probabilities[0];
  const Outcome zero = outcome_of(comp, 0);

  const GroupRep hadamard = build_involution_pair(UnitaryMatrix(pauli::hadamard()), "H");
  const GroupRep sigma_z = build_involution_pair(UnitaryMatrix(pauli::z()), "Z");
  struct MethodRow {
    std::string method;
    DensityMatrix estimate;
    Eigen::Index published_rank;
    double published_fidelity;
    std::string note;
  };
  const std::vector<MethodRow> methods{
      {"Standard", standard_estimator(zero), 1, 0.80, "-"},
      {"Pauli {I,X,Y,Z}", qad_estimator(build_pauli_qubit(), zero), 2, 0.50, "too large"},
      {"{I, sigma_z}", qad_estimator(sigma_z, zero), 1, 0.80, "non-spanning"},
      {"{I, H}", qad_estimator(hadamard, zero), 2, 0.91, "matched"},
      {"True rho", rho, 2, 1.00, "-"},
  };
  for (const auto& s : methods) {
    QubitExampleRow row;
    row.method = s.method;
    row.estimate = s.estimate.matrix();
    row.rank = numerical_rank(row.estimate);
    row.uhlmann = uhlmann_fidelity(s.estimate, rho);
    row.linear = linear_fidelity(s.estimate, rho);
    row.published_rank = s.published_rank;
    row.published_fidelity = s.published_fidelity;
    row.note = s.note;
    row.uhlmann_matches_published = std::abs(row.uhlmann - s.published_fidelity) <= 0.005;
    row.linear_matches_published = std::abs(row.linear - s.published_fidelity) <= 0.005;
    rep.rows.push_back(std::move(row));
  }
  const Matrix& h = rep.rows[3].estimate;
  rep.hadamard_eigenvalues = hermitian_eigenvalues(h);
  rep.hadamard_closed_form = qubit_closed_form_fidelity(h, rep.rho);
  return rep;
}

inline Json to_json(const QubitExampleReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    rows.push_back({{"method", row.method},
                    {"estimate", matrix_to_json(row.estimate)},
                    {"rank", row.rank},
                    {"uhlmann_fidelity", row.uhlmann},
                    {"linear_fidelity", row.linear},
                    {"published_rank", row.published_rank},
                    {"published_fidelity", row.published_fidelity},
                    {"note", row.note},
                    {"uhlmann_matches_published", row.uhlmann_matches_published},
                    {"linear_matches_published", row.linear_matches_published}});
  }
  return {{"bloch", r.bloch},
          {"rho", matrix_to_json(r.rho)},
          {"true_eigenvalues", std::vector<double>(r.true_eigenvalues.begin(),
                                                   r.true_eigenvalues.end())},
          {"p0", r.p0},
          {"hadamard_eigenvalues",
           std::vector<double>(r.hadamard_eigenvalues.begin(),
                               r.hadamard_eigenvalues.end())},
          {"hadamard_closed_form_fidelity", r.hadamard_closed_form},
          {"rows", rows}};
}

inline Table qubit_example_table(const QubitExampleReport& r) {
  Table t{{"method", "rank", "published_rank", "uhlmann_fidelity", "linear_fidelity",
           "published_fidelity", "discrepancy", "note"},
          {}};
  for (const auto& row : r.rows) {
    t.rows.push_back({row.method, static_cast<std::int64_t>(row.rank),
                      static_cast<std::int64_t>(row.published_rank), row.uhlmann, row.linear,
                      row.published_fidelity,
                      std::string(row.uhlmann_matches_published
                                      ? "-"
                                      : (row.linear_matches_published ? "linear only" : "yes")),
                      row.note});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Qudit sweep

struct SweepRecord {
  int d = 0;
  int trial = 0;
  std::uint64_t seed = 0;
  double purity = 0.0;
  double kappa = 0.0;
  int outcome = 0;
  double fidelity_standard = 0.0;
  double fidelity_hw = 0.0;
  double fidelity_matched = 0.0;
  double linear_fidelity_hw = 0.0;
  double spectral_error_hw = 0.0;
  double spectral_error_matched = 0.0;
  double analytic_hw_fidelity = 0.0;  // F(I/d, rho)
  int ginibre_rank = 0;
  double expected_standard_fidelity = 0.0;  // sum_m p_m^2

  static const std::vector<std::string>& columns() {
    static const std::vector<std::string> cols{
        "d", "trial", "seed", "purity", "kappa", "outcome", "fidelity_standard",
        "fidelity_hw", "fidelity_matched", "linear_fidelity_hw", "spectral_error_hw",
        "spectral_error_matched", "analytic_hw_fidelity", "ginibre_rank",
        "expected_standard_fidelity"};
    return cols;
  }

  std::vector<Cell> cells() const {
    return {std::int64_t{d}, std::int64_t{trial}, seed, purity, kappa,
            std::int64_t{outcome}, fidelity_standard, fidelity_hw, fidelity_matched,
            linear_fidelity_hw, spectral_error_hw, spectral_error_matched,
            analytic_hw_fidelity, std::int64_t{ginibre_rank},
            expected_standard_fidelity};
  }
};

struct SweepConfig {
  std::vector<int> dims{2, 3, 4, 5, 7, 8, 11, 13};
  int trials = 200;
  double target_purity = 0.7;
  double purity_tolerance = 0.01;
  std::uint64_t seed = 20261019;
  unsigned threads = 1;

  void validate() const {
    if (dims.empty()) throw ValidationError("sweep: dims must be non-empty");
    for (int d : dims) {
      if (d < 2) throw ValidationError("sweep: every dimension must be >= 2");
    }
    if (trials < 1) throw ValidationError("sweep: trials must be >= 1");
    if (!(target_purity > 0.0) || target_purity > 1.0) {
      throw ValidationError("sweep: purity must lie in (0, 1]");
    }
  }
};

/// (sum_i sqrt(lambda_i / d))^2, the fidelity of I/d with rho.
inline double maximally_mixed_fidelity(const DensityMatrix& rho) {
  const double d = static_cast<double>(rho.dim());
  double s = 0.0;
  for (double x : rho.eigenvalues()) s += std::sqrt(std::max(x, 0.0) / d);
  return s * s;
}

/// One trial; the RNG stream depends only on (master seed, d, trial).
inline SweepRecord run_sweep_trial(int d, int trial, const SweepConfig& cfg,
                                   const GroupRep& hw) {
  SweepRecord r;
  r.d = d;
  r.trial = trial;
  r.seed = derive_seed(cfg.seed, {static_cast<std::uint64_t>(d),
                                  static_cast<std::uint64_t>(trial)});
  Rng rng(r.seed);
  const EnsembleConfig ens{d, cfg.target_purity, cfg.purity_tolerance, r.seed};
  const PurityControlledState state = ginibre_with_purity(ens, rng);
  const DensityMatrix& rho = state.state;

  const StateMetrics m = state_metrics(rho);
  r.purity = m.purity;
  r.kappa = m.kappa;
  r.ginibre_rank = static_cast<int>(state.ginibre_rank);

  const Povm comp = computational_povm(d);
  const BornDistribution dist = born_probabilities(rho, comp);
  for (double p : dist.probabilities) r.expected_standard_fidelity += p * p;
  const Outcome o = sample_outcome(dist, comp, rng);
  r.outcome = static_cast<int>(o.index);

  const DensityMatrix est_std = standard_estimator(o);
  const DensityMatrix est_hw = qad_estimator(hw, o);
  const DensityMatrix est_matched = qad_estimator(build_matched_cyclic(rho), o);
  r.fidelity_standard = uhlmann_fidelity(est_std, rho);
  r.fidelity_hw = uhlmann_fidelity(est_hw, rho);
  r.fidelity_matched = uhlmann_fidelity(est_matched, rho);
  r.linear_fidelity_hw = linear_fidelity(est_hw, rho);
  r.spectral_error_hw = spectral_error(est_hw, rho);
  r.spectral_error_matched = spectral_error(est_matched, rho);
  r.analytic_hw_fidelity = maximally_mixed_fidelity(rho);
  return r;
}

struct MetricStats {
  double mean = 0.0;
  double std_error = 0.0;
  double min = 0.0;
  double max = 0.0;
};

/// Sums sorted values so the result does not depend on record order.
inline MetricStats metric_stats(std::vector<double> values) {
  MetricStats s;
  if (values.empty()) return s;
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / n;
  s.min = values.front();
  s.max = values.back();
  if (values.size() > 1) {
    std::vector<double> sq;
    sq.reserve(values.size());
    for (double v : values) sq.push_back((v - s.mean) * (v - s.mean));
    std::sort(sq.begin(), sq.end());
    double ss = 0.0;
    for (double v : sq) ss += v;
    s.std_error = std::sqrt(ss / (n - 1.0) / n);
  }
  // Keep the mean inside [min, max] against last-bit rounding.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

struct SweepSummary {
  int d = 0;
  std::size_t n = 0;
  std::vector<std::pair<std::string, MetricStats>> metrics;
  double ratio_hw_over_standard = 0.0;
  double ratio_matched_over_standard = 0.0;

  const MetricStats& at(const std::string& name) const {
    for (const auto& [k, v] : metrics) {
      if (k == name) return v;
    }
    throw ValidationError("SweepSummary: unknown metric " + name);
  }
};

inline const std::vector<std::string>& summarized_metrics() {
  static const std::vector<std::string> names{
      "purity", "kappa", "fidelity_standard", "fidelity_hw", "fidelity_matched",
      "linear_fidelity_hw", "spectral_error_hw", "spectral_error_matched",
      "analytic_hw_fidelity", "ginibre_rank", "expected_standard_fidelity"};
  return names;
}

inline double record_metric(const SweepRecord& r, const std::string& name) {
  if (name == "purity") return r.purity;
  if (name == "kappa") return r.kappa;
  if (name == "fidelity_standard") return r.fidelity_standard;
  if (name == "fidelity_hw") return r.fidelity_hw;
  if (name == "fidelity_matched") return r.fidelity_matched;
  if (name == "linear_fidelity_hw") return r.linear_fidelity_hw;
  if (name == "spectral_error_hw") return r.spectral_error_hw;
  if (name == "spectral_error_matched") return r.spectral_error_matched;
  if (name == "analytic_hw_fidelity") return r.analytic_hw_fidelity;
  if (name == "ginibre_rank") return r.ginibre_rank;
  if (name == "expected_standard_fidelity") return r.expected_standard_fidelity;
  throw ValidationError("unknown sweep metric " + name);
}

/// Per-d summaries in ascending d.
inline std::vector<SweepSummary> summarize(const std::vector<SweepRecord>& records) {
  std::map<int, std::vector<const SweepRecord*>> by_d;
  for (const auto& r : records) by_d[r.d].push_back(&r);
  std::vector<SweepSummary> out;
  for (const auto& [d, group] : by_d) {
    SweepSummary s;
    s.d = d;
    s.n = group.size();
    for (const auto& name : summarized_metrics()) {
      std::vector<double> values;
      values.reserve(group.size());
      for (const auto* r : group) values.push_back(record_metric(*r, name));
      s.metrics.emplace_back(name, metric_stats(std::move(values)));
    }
    const double std_mean = s.at("fidelity_standard").mean;
    s.ratio_hw_over_standard = s.at("fidelity_hw").mean / std_mean;
    s.ratio_matched_over_standard = s.at("fidelity_matched").mean / std_mean;
    out.push_back(std::move(s));
  }
  return out;
}

struct SweepResult {
  std::vector<SweepRecord> records;  // ordered by (position of d in dims, trial)
  std::vector<SweepSummary> summaries;
};

inline SweepResult run_qudit_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<GroupRep> hw;
  hw.reserve(cfg.dims.size());
  for (int d : cfg.dims) hw.push_back(build_heisenberg_weyl(d));
  const auto trials = static_cast<std::size_t>(cfg.trials);
  SweepResult result;
  result.records.resize(cfg.dims.size() * trials);
  parallel_for(result.records.size(), cfg.threads, [&](std::size_t task) {
    const std::size_t k = task / trials;
    const int trial = static_cast<int>(task % trials);
    result.records[task] = run_sweep_trial(cfg.dims[k], trial, cfg, hw[k]);
  });
  result.summaries = summarize(result.records);
  return result;
}

inline Table records_table(const std::vector<SweepRecord>& records) {
  Table t{SweepRecord::columns(), {}};
  t.rows.reserve(records.size());
  for (const auto& r : records) t.rows.push_back(r.cells());
  return t;
}

inline Json to_json(const SweepSummary& s) {
  Json metrics = Json::object();
  for (const auto& [name, st] : s.metrics) {
    metrics[name] = {{"mean", st.mean},
                     {"std_error", st.std_error},
                     {"min", st.min},
                     {"max", st.max}};
  }
  return {{"d", s.d},
          {"n", s.n},
          {"metrics", metrics},
          {"ratio_hw_over_standard", s.ratio_hw_over_standard},
          {"ratio_matched_over_standard", s.ratio_matched_over_standard}};
}

inline Json to_json(const std::vector<SweepSummary>& summaries) {
  Json out = Json::array();
  for (const auto& s : summaries) out.push_back(to_json(s));
  return out;
}

// Published single-copy fidelities for d = 2, 3, 4, 5, 7, 8, 11, 13.
struct PublishedFidelity {
  int d;
  double standard;
  double hw;
  double matched;
};

inline const std::vector<PublishedFidelity>& published_fidelities() {
  static const std::vector<PublishedFidelity> table{
      {2, 0.514, 0.975, 0.741},  {3, 0.354, 0.940, 0.806},  {4, 0.259, 0.923, 0.751},
      {5, 0.213, 0.915, 0.764},  {7, 0.149, 0.907, 0.755},  {8, 0.133, 0.904, 0.741},
      {11, 0.096, 0.899, 0.736}, {13, 0.079, 0.898, 0.728}};
  return table;
}

struct ComparisonRow {
  int d = 0;
  PublishedFidelity published{};
  double standard = 0.0;
  double standard_se = 0.0;
  double hw = 0.0;
  double matched = 0.0;
  double expected_standard = 0.0;  // mean of sum_m p_m^2
  double standard_discrepancy = 0.0;
  double hw_discrepancy = 0.0;
  double matched_discrepancy = 0.0;
  bool standard_within_tolerance = false;  // |discrepancy| <= 0.05
  bool analytic_check = false;  // |standard - expected| <= 2 SE
};

inline std::vector<ComparisonRow> compare_with_published(
    const std::vector<SweepSummary>& summaries) {
  std::vector<ComparisonRow> out;
  for (const auto& s : summaries) {
    const auto& pub = published_fidelities();
    const auto it = std::find_if(pub.begin(), pub.end(),
                                 [&](const PublishedFidelity& p) { return p.d == s.d; });
    if (it == pub.end()) continue;
    ComparisonRow row;
    row.d = s.d;
    row.published = *it;
    row.standard = s.at("fidelity_standard").mean;
    row.standard_se = s.at("fidelity_standard").std_error;
    row.hw = s.at("fidelity_hw").mean;
    row.matched = s.at("fidelity_matched").mean;
    row.expected_standard = s.at("expected_standard_fidelity").mean;
    row.standard_discrepancy = row.standard - it->standard;
    row.hw_discrepancy = row.hw - it->hw;
    row.matched_discrepancy = row.matched - it->matched;
    row.standard_within_tolerance = std::abs(row.standard_discrepancy) <= 0.05;
    row.analytic_check =
        std::abs(row.standard - row.expected_standard) <= 2.0 * row.standard_se;
    out.push_back(row);
  }
  return out;
}

inline Table comparison_table(const std::vector<ComparisonRow>& rows) {
  Table t{{"d", "standard", "published_standard", "discrepancy_standard",
           "expected_standard", "hw", "published_hw", "discrepancy_hw", "matched",
           "published_matched", "discrepancy_matched", "standard_within_0.05",
           "analytic_check_2se"},
          {}};
  for (const auto& r : rows) {
    t.rows.push_back({std::int64_t{r.d}, r.standard, r.published.standard,
                      r.standard_discrepancy, r.expected_standard, r.hw, r.published.hw,
                      r.hw_discrepancy, r.matched, r.published.matched,
                      r.matched_discrepancy,
                      std::string(r.standard_within_tolerance ? "yes" : "no"),
                      std::string(r.analytic_check ? "yes" : "no")});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Capacity scan

struct CapacityRecord {
  int d = 0;
  int index = 0;
  std::string kind;  // ginibre | pure | mixed
  int ginibre_rank = 0;
  double purity = 0.0;
  double kappa = 0.0;
  double von_neumann_entropy = 0.0;
  double renyi2_entropy = 0.0;

  static const std::vector<std::string>& columns() {
    static const std::vector<std::string> cols{
        "d", "index", "kind", "ginibre_rank", "purity", "kappa",
        "von_neumann_entropy", "renyi2_entropy"};
    return cols;
  }

  std::vector<Cell> cells() const {
    return {std::int64_t{d}, std::int64_t{index}, kind, std::int64_t{ginibre_rank},
            purity, kappa, von_neumann_entropy, renyi2_entropy};
  }
};

struct CapacityConfig {
  std::vector<int> dims{2, 4, 8, 13};
  int trials = 200;
  std::uint64_t seed = 20261019;
  unsigned threads = 1;

  void validate() const {
    if (dims.empty()) throw ValidationError("capacity scan: dims must be non-empty");
    for (int d : dims) {
      if (d < 2) throw ValidationError("capacity scan: every dimension must be >= 2");
    }
    if (trials < 1) throw ValidationError("capacity scan: trials must be >= 1");
  }
};

inline CapacityRecord capacity_record(int d, int index, std::string kind, int rank,
                                      const DensityMatrix& rho) {
  const StateMetrics m = state_metrics(rho);
  return {d, index, std::move(kind), rank, m.purity, m.kappa, m.von_neumann_entropy,
          m.renyi2_entropy};
}

/// Per d: `trials` Ginibre states with rank cycling 1..d, then one pure and
/// one maximally mixed anchor.
inline std::vector<CapacityRecord> run_capacity_scan(const CapacityConfig& cfg) {
  cfg.validate();
  constexpr std::uint64_t kStream = 0xCA9AC17ULL;
  const auto per_d = static_cast<std::size_t>(cfg.trials) + 2;
  std::vector<CapacityRecord> out(cfg.dims.size() * per_d);
  parallel_for(out.size(), cfg.threads, [&](std::size_t task) {
    const int d = cfg.dims[task / per_d];
    const int index = static_cast<int>(task % per_d);
    Rng rng = make_rng(cfg.seed, {kStream, static_cast<std::uint64_t>(d),
                                  static_cast<std::uint64_t>(index)});
    if (index < cfg.trials) {
      const int rank = 1 + index % d;
      out[task] = capacity_record(d, index, "ginibre", rank, ginibre_density(d, rank, rng));
    } else if (index == cfg.trials) {
      out[task] = capacity_record(d, index, "pure", 1, DensityMatrix::pure(haar_vector(d, rng)));
    } else {
      out[task] = capacity_record(d, index, "mixed", d, DensityMatrix::maximally_mixed(d));
    }
  });
  return out;
}

inline Table capacity_table(const std::vector<CapacityRecord>& records) {
  Table t{CapacityRecord::columns(), {}};
  for (const auto& r : records) t.rows.push_back(r.cells());
  return t;
}

// ---------------------------------------------------------------------------
// Adaptive demo

struct AdaptiveDemoConfig {
  int d = 3;
  std::size_t n_coarse = 10000;
  std::uint64_t seed = 20261019;
  std::string state = "diagonal";  // diagonal | maximally_mixed | ginibre
  double purity = 0.7;             // ginibre only
  bool exact_probabilities = false;

  void validate() const {
    if (d < 2 || d > 13) throw ValidationError("adaptive demo: d must lie in 2..13");
    if (state != "diagonal" && state != "maximally_mixed" && state != "ginibre") {
      throw ValidationError("adaptive demo: unknown state kind '" + state + "'");
    }
  }
};

struct AdaptiveDemoReport {
  std::string state;
  bool exact_probabilities = false;
  Matrix rho_true;
  AdaptiveReport pipeline;
};

inline DensityMatrix adaptive_demo_state(const AdaptiveDemoConfig& cfg, Rng& rng) {
  const Eigen::Index d = cfg.d;
  if (cfg.state == "maximally_mixed") return DensityMatrix::maximally_mixed(d);
  if (cfg.state == "ginibre") {
    return ginibre_with_purity({d, cfg.purity, 0.01, cfg.seed}, rng).state;
  }
  std::uniform_real_distribution<double> uni(0.05, 1.0);
  RealVector p(d);
  for (Eigen::Index i = 0; i < d; ++i) p(i) = uni(rng);
  std::sort(p.begin(), p.end(), std::greater<>());
  p /= p.sum();
  return DensityMatrix(Matrix(p.cast<Complex>().asDiagonal()));
}

inline AdaptiveDemoReport run_adaptive_demo(const AdaptiveDemoConfig& cfg) {
  cfg.validate();
  const auto d = static_cast<std::uint64_t>(cfg.d);
  Rng state_rng = make_rng(cfg.seed, {d, 0});
  Rng run_rng = make_rng(cfg.seed, {d, 1});
  AdaptiveDemoReport out;
  out.state = cfg.state;
  out.exact_probabilities = cfg.exact_probabilities;
  const DensityMatrix rho = adaptive_demo_state(cfg, state_rng);
  out.rho_true = rho.matrix();
  AdaptiveOptions opts;
  opts.exact_probabilities = cfg.exact_probabilities;
  out.pipeline = adaptive_pipeline(rho, cfg.n_coarse, run_rng, opts);
  out.pipeline.seed = cfg.seed;
  return out;
}

inline Json to_json(const AdaptiveDemoReport& r) {
  const AdaptiveReport& p = r.pipeline;
  return {{"d", p.d},
          {"seed", p.seed},
          {"n_coarse", p.n_coarse},
          {"state", r.state},
          {"exact_probabilities", r.exact_probabilities},
          {"rho_true", matrix_to_json(r.rho_true)},
          {"lambda_spectrum", p.lambda_spectrum},
          {"delta_q_before", p.delta_q_before},
          {"delta_q_after", p.delta_q_after},
          {"fidelities",
           {{"gevp_group", p.fidelity_gevp_group},
            {"baseline_group", p.fidelity_baseline_group}}},
          {"coarse_trace_distance", p.coarse_trace_distance},
          {"generator_commutator", p.generator_commutator},
          {"gevp_group_order", p.gevp_group_order},
          {"baseline_group", p.baseline_group}};
}

inline AdaptiveDemoReport adaptive_demo_from_json(const Json& j) {
  AdaptiveDemoReport r;
  r.state = j.at("state").get<std::string>();
  r.exact_probabilities = j.at("exact_probabilities").get<bool>();
  r.rho_true = matrix_from_json(j.at("rho_true"));
  AdaptiveReport& p = r.pipeline;
  p.d = j.at("d").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.n_coarse = j.at("n_coarse").get<std::size_t>();
  p.lambda_spectrum = j.at("lambda_spectrum").get<std::vector<double>>();
  p.delta_q_before = j.at("delta_q_before").get<double>();
  p.delta_q_after = j.at("delta_q_after").get<double>();
  p.fidelity_gevp_group = j.at("fidelities").at("gevp_group").get<double>();
  p.fidelity_baseline_group = j.at("fidelities").at("baseline_group").get<double>();
  p.coarse_trace_distance = j.at("coarse_trace_distance").get<double>();
  p.generator_commutator = j.at("generator_commutator").get<double>();
  p.gevp_group_order = j.at("gevp_group_order").get<std::size_t>();
  p.baseline_group = j.at("baseline_group").get<std::string>();
  return r;
}

// ---------------------------------------------------------------------------
// SIC search and MUB checks

struct SicSearchResult {
  int d = 0;
  FiducialVector fiducial;
  std::optional<Povm> povm;       // only when the fiducial converged
  double completeness = 0.0;      // |sum E - I|_F
  double max_overlap_error = 0.0;  // max |Tr(Pi_m Pi_n) - 1/(d+1)|, m != n
};

inline double sic_overlap_error(const Povm& sic) {
  const auto d = static_cast<double>(sic.dim());
  double worst = 0.0;
  for (std::size_t m = 0; m < sic.size(); ++m) {
    for (std::size_t n = m + 1; n < sic.size(); ++n) {
      const double ov = (d * d) * (sic.effect(m) * sic.effect(n)).trace().real();
      worst = std::max(worst, std::abs(ov - 1.0 / (d + 1.0)));
    }
  }
  return worst;
}

inline SicSearchResult run_sic_search(int d, const SicSearchConfig& cfg) {
  SicSearchResult r;
  r.d = d;
  r.fiducial = find_sic_fiducial(d, cfg);
  if (r.fiducial.converged) {
    r.povm = build_sic_povm(d, r.fiducial);
    r.completeness = r.povm->completeness_defect();
    r.max_overlap_error = sic_overlap_error(*r.povm);
  } else {
    r.completeness = std::numeric_limits<double>::quiet_NaN();
    r.max_overlap_error = std::numeric_limits<double>::quiet_NaN();
  }
  return r;
}

struct MubCheckResult {
  int d = 0;
  std::size_t bases = 0;
  double max_overlap_defect = 0.0;  // max | |<a|b>|^2 - 1/d |
  double completeness = 0.0;
};

inline MubCheckResult run_mub_check(int d) {
  const auto bases = build_mub(d);
  MubCheckResult r;
  r.d = d;
  r.bases = bases.size();
  r.max_overlap_defect = mub_overlap_defect(bases);
  r.completeness = mub_povm(bases).completeness_defect();
  return r;
}

}  // namespace qadlab
