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

namespace cstomo {

/// (|0...0> + |1...1>)/sqrt(2); qubit 1 is the most significant index bit.
Vector sc_state(int n);

/// |SC><SC|: 1/2 at the four corners, zero elsewhere.
DensityMatrix ideal_density(int n);

struct NoiseModel {
  enum class Kind { kNone, kWhite, kGaussian };
  Kind kind = Kind::kNone;
  double param = 0.0;  // mixing weight p for white, per-entry sigma for gaussian

  static NoiseModel none() { return {}; }
  static NoiseModel white(double p);
  static NoiseModel gaussian(double sigma);

  /// Parses "none", "white:<p>" or "gaussian:<sigma>".
  static NoiseModel parse(std::string_view text);
  std::string to_string() const;
};

/// white(p):    (1 - p) rho + p I/d (seed unused)
/// gaussian(s): rho + H with H Hermitian, diagonal N(0, s^2), off-diagonal
///              complex with E|H_jk|^2 = s^2; then projected back onto the
///              density matrices.
DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseModel& model, std::uint64_t seed);

struct MeasurementRecord {
  std::size_t operator_id = 0;
  double value = 0.0;
  std::optional<int> setting_id;
  std::optional<std::uint64_t> shots;

  bool operator==(const MeasurementRecord&) const = default;
};

/// Expected (shots == 0) or sampled values of every operator of `ops` on rho.
///
/// With shots = N > 0, operators sharing a setting id are sampled as one
/// multinomial draw of N counts over the setting's outcome probabilities;
/// ungrouped projectors are independent binomials, and ungrouped M_theta
/// tensor powers are sampled as N parity outcomes (value = (2k - N) / N).
/// Throws InvalidArgument when a probability is below -1e-9 or a setting's
/// probabilities do not sum to one.
std::vector<MeasurementRecord> simulate_measurements(const DensityMatrix& rho, const OperatorSet& ops,
                                                     std::uint64_t shots, std::uint64_t seed);

}  // namespace cstomo
