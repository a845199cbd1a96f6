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

// JSON encoding of vectors, matrices, fiducials and POVMs. Complex numbers
// are [re, im] pairs; matrices are arrays of rows.

#include <string>
#include <vector>

#include "json.hpp"
#include "qadlab/linalg.hpp"
#include "qadlab/povm.hpp"

namespace qadlab {

using Json = nlohmann::json;

inline Json complex_to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

inline Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2) {
    throw ValidationError("expected a [re, im] pair");
  }
  return {j.at(0).get<double>(), j.at(1).get<double>()};
}

inline Json vector_to_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(complex_to_json(v(i)));
  return out;
}

inline Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j.at(i));
  }
  return v;
}

inline Json matrix_to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    rows.push_back(vector_to_json(m.row(r).transpose()));
  }
  return rows;
}

inline Matrix matrix_from_json(const Json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows == 0 ? 0 : static_cast<Eigen::Index>(j.at(0).size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const Json& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) {
      throw ValidationError("matrix_from_json: ragged rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = complex_from_json(row.at(static_cast<std::size_t>(c)));
    }
  }
  return m;
}

inline Json to_json(const FiducialVector& f) {
  return Json{{"dim", f.dim},
              {"labels", Json::array({"phi0"})},
              {"amplitudes", vector_to_json(f.amplitudes)},
              {"zauner_residual", f.zauner_residual},
              {"objective", f.objective},
              {"restart", f.restart},
              {"converged", f.converged}};
}

inline FiducialVector fiducial_from_json(const Json& j) {
  FiducialVector f;
  f.dim = j.at("dim").get<Eigen::Index>();
  f.amplitudes = vector_from_json(j.at("amplitudes"));
  if (f.amplitudes.size() != f.dim) {
    throw ValidationError("fiducial_from_json: amplitude count != dim");
  }
  f.zauner_residual = j.at("zauner_residual").get<double>();
  f.objective = j.value("objective", frame_potential(f.amplitudes));
  f.restart = j.value("restart", -1);
  f.converged = j.value("converged", f.zauner_residual <= kSicResidualThreshold);
  return f;
}

/// {dim, labels, effects, zauner_residual?, provenance?}
inline Json to_json(const Povm& povm, const FiducialVector* fiducial = nullptr) {
  Json effects = Json::array();
  for (const auto& e : povm.effects()) effects.push_back(matrix_to_json(e));
  Json out{{"dim", povm.dim()}, {"labels", povm.labels()}, {"effects", effects}};
  if (povm.provenance()) {
    out["provenance"] = {{"group", povm.provenance()->group},
                         {"seed", povm.provenance()->seed}};
  }
  if (fiducial != nullptr) {
    out["zauner_residual"] = fiducial->zauner_residual;
  }
  return out;
}

inline Povm povm_from_json(const Json& j) {
  std::vector<Matrix> effects;
  for (const auto& e : j.at("effects")) effects.push_back(matrix_from_json(e));
  std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
  std::optional<PovmProvenance> prov;
  if (j.contains("provenance")) {
    prov = PovmProvenance{j["provenance"].at("group").get<std::string>(),
                          j["provenance"].at("seed").get<std::string>()};
  }
  Povm p(std::move(effects), std::move(labels), std::move(prov));
  if (p.dim() != j.at("dim").get<Eigen::Index>()) {
    throw ValidationError("povm_from_json: dim does not match effects");
  }
  return p;
}

}  // namespace qadlab
