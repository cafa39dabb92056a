// Copyright 2026 The cstomo Authors
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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cstomo/linalg.hpp"
#include "cstomo/operators.hpp"
#include "cstomo/states.hpp"

namespace cstomo {

enum class Method { kPhaseLift, kL1 };

Method parse_method(std::string_view text);
std::string_view to_string(Method m);

struct RecoveryConfig {
  Method method = Method::kPhaseLift;
  double penalty = 1.0;            // ADMM penalty mu
  std::optional<double> tol_abs;   // defaults to 1e-7 * d
  double tol_rel = 1e-5;
  int max_iter = 20000;
  double equality_epsilon = 0.0;   // l1 only: |Tr(M_i rho) - b_i| <= epsilon
  bool residual_balancing = true;
  double relaxation = 1.0;         // ADMM over-relaxation, in (0, 2)
  double tie_break = 0.0;          // weight of tie_break/2 |rho - I/d|_F^2 added to the objective
  std::uint64_t seed = 0;          // reserved; the solver is deterministic

  /// Throws InvalidArgument on mu <= 0, nonpositive tolerances, max_iter < 1 or epsilon < 0.
  void check() const;
  double tol_abs_for(Eigen::Index d) const { return tol_abs.value_or(1e-7 * static_cast<double>(d)); }
};

struct RecoveryResult {
  DensityMatrix rho;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;
  std::string diagnostic;
};

/// min sum_i |Tr(M_i rho) - b_i|  over density matrices rho.
RecoveryResult recover_phaselift(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                                 const RecoveryConfig& cfg);

/// min sum_{j,k} |rho_jk|  s.t. |Tr(M_i rho) - b_i| <= epsilon, rho a density matrix.
RecoveryResult recover_l1(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                          const RecoveryConfig& cfg);

/// Dispatches on cfg.method.
RecoveryResult recover(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                       const RecoveryConfig& cfg);

double phaselift_objective(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                           const Matrix& rho);

/// sum of |rho_jk| over all entries.
double l1_objective(const Matrix& rho);

/// Uniformly random m-subset of `set`, deterministic per seed. The subset
/// keeps the original relative order, gets dense ids, and records the
/// parent ids in `source_ids`. Throws InvalidArgument for m == 0 or m > |set|.
OperatorSet sample_without_replacement(const OperatorSet& set, std::size_t m, std::uint64_t seed);

/// Records of `pool_records` (ids into the parent set) that belong to
/// `subset`, re-indexed to the subset's ids.
std::vector<MeasurementRecord> restrict_records(const OperatorSet& subset,
                                                const std::vector<MeasurementRecord>& pool_records);

}  // namespace cstomo
