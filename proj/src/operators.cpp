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

#include "cstomo/operators.hpp"

#include <bit>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cstomo/error.hpp"

namespace cstomo {

namespace {

constexpr double kPi = std::numbers::pi;

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};

std::vector<std::uint8_t> bits_of(std::size_t index, int n) {
  std::vector<std::uint8_t> bits(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) bits[static_cast<std::size_t>(j)] = (index >> (n - 1 - j)) & 1U;
  return bits;
}

std::vector<Sign> signs_of(std::size_t index, int n) {
  std::vector<Sign> signs(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) {
    signs[static_cast<std::size_t>(j)] = ((index >> (n - 1 - j)) & 1U) ? Sign::kMinus : Sign::kPlus;
  }
  return signs;
}

Vector basis_vector(std::uint8_t bit) {
  Vector v = Vector::Zero(2);
  v(bit ? 1 : 0) = 1.0;
  return v;
}

Vector kron_vectors(const std::vector<Vector>& parts) {
  Matrix acc = parts.front();
  for (std::size_t i = 1; i < parts.size(); ++i) acc = kron(acc, parts[i]);
  return acc.col(0);
}

void require_qubits(int n, const char* where) {
  if (n < 1) throw InvalidArgument(fmt::format("{}: qubit count must be >= 1, got {}", where, n));
  if (n > 20) throw InvalidArgument(fmt::format("{}: qubit count {} is too large for dense matrices", where, n));
}

}  // namespace

int qubit_count(const OperatorDescriptor& desc) {
  return std::visit(
      overloaded{
          [](const Computational& c) { return static_cast<int>(c.bits.size()); },
          [](const ThetaPattern& t) { return static_cast<int>(t.signs.size()); },
          [](const MThetaPower& m) { return m.n; },
          [](const DenseOperator& d) {
            const auto rows = static_cast<std::size_t>(d.matrix.rows());
            if (rows < 2 || !std::has_single_bit(rows) || d.matrix.cols() != d.matrix.rows()) {
              throw InvalidArgument(fmt::format("dense operator must be 2^n x 2^n, got {}x{}",
                                                d.matrix.rows(), d.matrix.cols()));
            }
            return std::countr_zero(rows);
          },
      },
      desc);
}

void validate(const OperatorDescriptor& desc) {
  require_qubits(qubit_count(desc), "operator");
  std::visit(overloaded{
                 [](const Computational& c) {
                   for (auto b : c.bits) {
                     if (b > 1) throw InvalidArgument("computational pattern bits must be 0 or 1");
                   }
                 },
                 [](const ThetaPattern& t) {
                   if (!std::isfinite(t.theta)) throw InvalidArgument("theta must be finite");
                 },
                 [](const MThetaPower& m) {
                   if (!std::isfinite(m.theta)) throw InvalidArgument("theta must be finite");
                 },
                 [](const DenseOperator& d) {
                   if (!all_finite(d.matrix)) throw InvalidArgument("dense operator has non-finite entries");
                   const double asym = hermitian_asymmetry(d.matrix);
                   if (asym > 1e-12 * std::max(1.0, d.matrix.norm())) {
                     throw InvalidArgument(fmt::format("dense operator is not Hermitian (asymmetry {:.3e})", asym));
                   }
                 },
             },
             desc);
}

Vector local_basis_vector(double theta, Sign sign) {
  Vector v(2);
  v(0) = 1.0;
  v(1) = static_cast<double>(sign) * std::polar(1.0, theta);
  return v / std::numbers::sqrt2;
}

Matrix m_theta(double theta) {
  Matrix m(2, 2);
  // cos(t) sx + sin(t) sy = [[0, e^{-it}], [e^{it}, 0]]
  m << 0.0, std::polar(1.0, -theta), std::polar(1.0, theta), 0.0;
  return m;
}

Matrix m_theta_power(double theta, int n) {
  require_qubits(n, "m_theta_power");
  return kron_power(m_theta(theta), n);
}

std::optional<Vector> factor(const OperatorDescriptor& desc) {
  validate(desc);
  return std::visit(overloaded{
                        [](const Computational& c) -> std::optional<Vector> {
                          std::vector<Vector> parts;
                          for (auto b : c.bits) parts.push_back(basis_vector(b));
                          return kron_vectors(parts);
                        },
                        [](const ThetaPattern& t) -> std::optional<Vector> {
                          std::vector<Vector> parts;
                          for (auto s : t.signs) parts.push_back(local_basis_vector(t.theta, s));
                          return kron_vectors(parts);
                        },
                        [](const MThetaPower&) -> std::optional<Vector> { return std::nullopt; },
                        [](const DenseOperator&) -> std::optional<Vector> { return std::nullopt; },
                    },
                    desc);
}

Matrix realize(const OperatorDescriptor& desc) {
  if (auto z = factor(desc)) return outer(*z);
  return std::visit(overloaded{
                        [](const MThetaPower& m) { return m_theta_power(m.theta, m.n); },
                        [](const DenseOperator& d) { return Matrix((d.matrix + d.matrix.adjoint()) * 0.5); },
                        [](const auto&) -> Matrix { throw Error("unreachable"); },
                    },
                    desc);
}

Matrix realize(const OperatorDescriptor& desc, int n) {
  const int q = qubit_count(desc);
  if (q != n) throw DimensionError(fmt::format("operator acts on {} qubits, expected {}", q, n));
  return realize(desc);
}

void OperatorSet::push_back(OperatorDescriptor desc, std::optional<int> setting) {
  source_ids.push_back(descriptors.size());
  descriptors.push_back(std::move(desc));
  settings.push_back(setting);
}

void OperatorSet::check() const {
  require_qubits(n, "operator set");
  if (settings.size() != descriptors.size() || source_ids.size() != descriptors.size()) {
    throw InvalidArgument("operator set arrays have inconsistent lengths");
  }
  for (std::size_t i = 0; i < descriptors.size(); ++i) {
    validate(descriptors[i]);
    const int q = qubit_count(descriptors[i]);
    if (q != n) {
      throw DimensionError(fmt::format("operator {} acts on {} qubits, set has {}", i, q, n));
    }
  }
}

OperatorSet standard_set(std::string_view name, int n) {
  require_qubits(n, "standard_set");
  const std::size_t d = std::size_t{1} << n;
  OperatorSet set;
  set.name = std::string(name);
  set.n = n;

  const auto add_corners = [&] {
    set.push_back(Computational{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)}, std::nullopt);
    set.push_back(Computational{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1)}, std::nullopt);
  };

  if (name == "full") {
    for (std::size_t i = 0; i < d; ++i) set.push_back(Computational{bits_of(i, n)}, 0);
    for (int k = 0; k < 48; ++k) {
      const double theta = k * kPi / 24.0;
      for (std::size_t i = 0; i < d; ++i) set.push_back(ThetaPattern{theta, signs_of(i, n)}, k + 1);
    }
  } else if (name == "fid14") {
    add_corners();
    for (int j = 0; j < 12; ++j) set.push_back(MThetaPower{2.0 * kPi * j / 12.0, n}, std::nullopt);
  } else if (name == "fid3") {
    add_corners();
    set.push_back(MThetaPower{0.0, n}, std::nullopt);
  } else if (name == "photon8") {
    if (n != 8) throw InvalidArgument(fmt::format("photon8 set is defined for 8 qubits, got {}", n));
    for (std::size_t i = 0; i < d; ++i) set.push_back(Computational{bits_of(i, n)}, 0);
    for (int k = 0; k < 8; ++k) set.push_back(MThetaPower{k * kPi / 8.0, n}, std::nullopt);
  } else {
    throw InvalidArgument(fmt::format("unknown operator set '{}' (expected full, fid14, fid3 or photon8)", name));
  }
  return set;
}

std::vector<WitnessTerm> witness_decomposition(int n) {
  require_qubits(n, "witness_decomposition");
  if (n % 2 != 0) {
    throw InvalidArgument(fmt::format("witness decomposition is only defined for even qubit counts, got {}", n));
  }
  std::vector<WitnessTerm> terms;
  terms.push_back({0.5, Computational{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 0)}});
  terms.push_back({0.5, Computational{std::vector<std::uint8_t>(static_cast<std::size_t>(n), 1)}});
  for (int k = 1; k <= n; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    terms.push_back({sign / (2.0 * n), MThetaPower{k * kPi / n, n}});
  }
  return terms;
}

RealizationCache::RealizationCache(const OperatorSet& set)
    : descriptors_(set.descriptors), cache_(set.size()) {}

std::shared_ptr<const Matrix> RealizationCache::get(std::size_t id) const {
  if (id >= descriptors_.size()) throw InvalidArgument(fmt::format("operator id {} out of range", id));
  {
    std::lock_guard lock(mu_);
    if (cache_[id]) return cache_[id];
  }
  // Realize outside the lock; a racing filler computes the same value.
  auto m = std::make_shared<const Matrix>(realize(descriptors_[id]));
  std::lock_guard lock(mu_);
  if (!cache_[id]) cache_[id] = std::move(m);
  return cache_[id];
}

}  // namespace cstomo
