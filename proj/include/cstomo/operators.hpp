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
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "cstomo/linalg.hpp"

namespace cstomo {

enum class Sign : std::int8_t { kPlus = 1, kMinus = -1 };

/// (x)_j |b_j><b_j|
struct Computational {
  std::vector<std::uint8_t> bits;  // qubit 1 first
};

/// (x)_j |s_j,theta><s_j,theta| with |+-,theta> = (|0> +- e^{i theta}|1>)/sqrt(2).
struct ThetaPattern {
  double theta = 0.0;
  std::vector<Sign> signs;  // qubit 1 first
};

/// (cos(theta) sx + sin(theta) sy)^{(x) n}
struct MThetaPower {
  double theta = 0.0;
  int n = 1;
};

struct DenseOperator {
  Matrix matrix;
};

/// Symbolic recipe for one measurement operator.
using OperatorDescriptor = std::variant<Computational, ThetaPattern, MThetaPower, DenseOperator>;

/// Number of qubits the descriptor acts on. Throws InvalidArgument for an
/// empty pattern or a dense matrix whose size is not a power of two.
int qubit_count(const OperatorDescriptor& desc);

/// Checks the descriptor invariants (n >= 1, finite theta, Hermitian dense matrix).
void validate(const OperatorDescriptor& desc);

Vector local_basis_vector(double theta, Sign sign);

/// Dense 2^n x 2^n matrix of the operator.
Matrix realize(const OperatorDescriptor& desc);

/// As `realize`, but throws DimensionError unless the descriptor acts on `n` qubits.
Matrix realize(const OperatorDescriptor& desc, int n);

/// Rank-1 factor z with realize(desc) = z z*, for the computational and
/// theta-pattern variants; nullopt otherwise.
std::optional<Vector> factor(const OperatorDescriptor& desc);

/// cos(theta) sx + sin(theta) sy
Matrix m_theta(double theta);
Matrix m_theta_power(double theta, int n);

/// Ordered list of descriptors sharing one qubit count.
///
/// `settings[i]` groups operators measured in one basis setting (their
/// outcome probabilities sum to one); nullopt for ungrouped operators.
/// `source_ids[i]` is the id the operator had in the set it was drawn from
/// (identity for freshly built sets).
struct OperatorSet {
  std::string name;
  int n = 0;
  std::vector<OperatorDescriptor> descriptors;
  std::vector<std::optional<int>> settings;
  std::vector<std::size_t> source_ids;

  std::size_t size() const noexcept { return descriptors.size(); }
  Eigen::Index dim() const noexcept { return Eigen::Index{1} << n; }

  /// Appends with the next dense id.
  void push_back(OperatorDescriptor desc, std::optional<int> setting);

  /// Throws InvalidArgument when the parallel arrays disagree or a
  /// descriptor does not act on `n` qubits.
  void check() const;
};

/// Named operator families:
///   full    - 2^n computational projectors plus 48 theta settings (step pi/24)
///             with all 2^n sign patterns each; (48 + 1) * 2^n operators
///   fid14   - |0..0><0..0|, |1..1><1..1|, M_theta^{(x)n} for theta = 2 pi j / 12
///   fid3    - |0..0><0..0|, |1..1><1..1|, M_0^{(x)n}
///   photon8 - all 256 computational projectors plus M_{k pi/8}^{(x)8}, k = 0..7 (n must be 8)
OperatorSet standard_set(std::string_view name, int n);

struct WitnessTerm {
  double coefficient;
  OperatorDescriptor op;
};

/// |SC><SC| = 1/2 [P_0..0 + P_1..1 + (1/n) sum_{k=1..n} (-1)^k M_{k pi/n}^{(x)n}]
/// for even n >= 2. Odd n is rejected.
std::vector<WitnessTerm> witness_decomposition(int n);

/// Lazily realized dense matrices of an operator set, filled at most once
/// per id. Safe for concurrent readers.
class RealizationCache {
 public:
  explicit RealizationCache(const OperatorSet& set);
  std::shared_ptr<const Matrix> get(std::size_t id) const;

 private:
  std::vector<OperatorDescriptor> descriptors_;
  mutable std::mutex mu_;
  mutable std::vector<std::shared_ptr<const Matrix>> cache_;
};

}  // namespace cstomo
