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

#include "cstomo/states.hpp"

#include <charconv>
#include <cmath>
#include <map>
#include <numbers>

#include <boost/random/binomial_distribution.hpp>
#include <boost/random/normal_distribution.hpp>
#include <fmt/format.h>

#include "cstomo/error.hpp"
#include "cstomo/random.hpp"

namespace cstomo {

namespace {

constexpr double kNegativeProbTol = 1e-9;
constexpr double kSettingSumTol = 1e-6;

std::uint64_t draw_binomial(Rng& rng, std::uint64_t trials, double p) {
  if (trials == 0 || p <= 0.0) return 0;
  if (p >= 1.0) return trials;
  boost::random::binomial_distribution<std::int64_t, double> dist(static_cast<std::int64_t>(trials), p);
  return static_cast<std::uint64_t>(dist(rng));
}

double exact_value(const OperatorDescriptor& desc, const Matrix& rho) {
  if (auto z = factor(desc)) return (z->adjoint() * rho * *z)(0, 0).real();
  return trace_inner(realize(desc), rho);
}

}  // namespace

Vector sc_state(int n) {
  if (n < 1) throw InvalidArgument(fmt::format("sc_state: qubit count must be >= 1, got {}", n));
  if (n > 20) throw InvalidArgument(fmt::format("sc_state: qubit count {} is too large", n));
  const Eigen::Index d = Eigen::Index{1} << n;
  Vector psi = Vector::Zero(d);
  psi(0) = 1.0 / std::numbers::sqrt2;
  psi(d - 1) = 1.0 / std::numbers::sqrt2;
  return psi;
}

DensityMatrix ideal_density(int n) { return pure_density(sc_state(n)); }

NoiseModel NoiseModel::white(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument(fmt::format("white noise weight must lie in [0,1], got {}", p));
  return {Kind::kWhite, p};
}

NoiseModel NoiseModel::gaussian(double sigma) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument(fmt::format("gaussian noise sigma must be >= 0, got {}", sigma));
  }
  return {Kind::kGaussian, sigma};
}

NoiseModel NoiseModel::parse(std::string_view text) {
  if (text == "none") return none();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidArgument(fmt::format("bad noise model '{}' (expected none, white:<p> or gaussian:<sigma>)", text));
  }
  const std::string_view kind = text.substr(0, colon);
  const std::string value_text(text.substr(colon + 1));
  double value = 0.0;
  std::size_t used = 0;
  try {
    value = std::stod(value_text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value_text.size()) {
    throw InvalidArgument(fmt::format("bad noise parameter '{}'", value_text));
  }
  if (kind == "white") return white(value);
  if (kind == "gaussian") return gaussian(value);
  throw InvalidArgument(fmt::format("unknown noise model '{}'", kind));
}

std::string NoiseModel::to_string() const {
  switch (kind) {
    case Kind::kNone:
      return "none";
    case Kind::kWhite:
      return fmt::format("white:{}", param);
    case Kind::kGaussian:
      return fmt::format("gaussian:{}", param);
  }
  return "none";
}

DensityMatrix apply_noise(const DensityMatrix& rho, const NoiseModel& model, std::uint64_t seed) {
  const Eigen::Index d = rho.dim();
  switch (model.kind) {
    case NoiseModel::Kind::kNone:
      return rho;
    case NoiseModel::Kind::kWhite: {
      const double p = model.param;
      Matrix m = (1.0 - p) * rho.matrix();
      m.diagonal().array() += p / static_cast<double>(d);
      return DensityMatrix::from_matrix(m);
    }
    case NoiseModel::Kind::kGaussian: {
      Rng rng(seed);
      boost::random::normal_distribution<double> diag(0.0, model.param);
      boost::random::normal_distribution<double> off(0.0, model.param / std::numbers::sqrt2);
      Matrix h = Matrix::Zero(d, d);
      for (Eigen::Index j = 0; j < d; ++j) {
        h(j, j) = diag(rng);
        for (Eigen::Index k = j + 1; k < d; ++k) {
          const double re = off(rng);
          const double im = off(rng);
          h(j, k) = Complex(re, im);
          h(k, j) = Complex(re, -im);
        }
      }
      return project_density_cone(rho.matrix() + h);
    }
  }
  return rho;
}

std::vector<MeasurementRecord> simulate_measurements(const DensityMatrix& rho, const OperatorSet& ops,
                                                     std::uint64_t shots, std::uint64_t seed) {
  ops.check();
  if (ops.dim() != rho.dim()) {
    throw DimensionError(fmt::format("operator set has dimension {}, state has {}", ops.dim(), rho.dim()));
  }
  std::vector<MeasurementRecord> records(ops.size());
  for (std::size_t i = 0; i < ops.size(); ++i) {
    records[i].operator_id = i;
    records[i].value = exact_value(ops.descriptors[i], rho.matrix());
    records[i].setting_id = ops.settings[i];
  }
  if (shots == 0) return records;

  Rng rng(seed);
  // Group members in order of first appearance so the draw order is fixed.
  std::vector<int> group_order;
  std::map<int, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (!ops.settings[i]) continue;
    auto [it, inserted] = groups.try_emplace(*ops.settings[i]);
    if (inserted) group_order.push_back(*ops.settings[i]);
    it->second.push_back(i);
  }

  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops.settings[i]) continue;
    auto& rec = records[i];
    if (std::holds_alternative<MThetaPower>(ops.descriptors[i])) {
      const double p_plus = std::clamp((1.0 + rec.value) / 2.0, 0.0, 1.0);
      const auto k = draw_binomial(rng, shots, p_plus);
      rec.value = (2.0 * static_cast<double>(k) - static_cast<double>(shots)) / static_cast<double>(shots);
    } else {
      if (rec.value < -kNegativeProbTol || rec.value > 1.0 + kNegativeProbTol) {
        throw InvalidArgument(fmt::format("operator {} has probability {:.3e} outside [0,1]", i, rec.value));
      }
      const auto k = draw_binomial(rng, shots, std::clamp(rec.value, 0.0, 1.0));
      rec.value = static_cast<double>(k) / static_cast<double>(shots);
    }
    rec.shots = shots;
  }

  for (int setting : group_order) {
    const auto& members = groups[setting];
    double total = 0.0;
    for (auto i : members) {
      if (records[i].value < -kNegativeProbTol) {
        throw InvalidArgument(fmt::format("operator {} has negative probability {:.3e}", i, records[i].value));
      }
      total += std::max(records[i].value, 0.0);
    }
    if (std::abs(total - 1.0) > kSettingSumTol) {
      throw InvalidArgument(fmt::format("setting {} outcome probabilities sum to {:.9f}, not 1", setting, total));
    }
    // Multinomial as a chain of conditional binomials.
    std::uint64_t remaining = shots;
    double mass = total;
    for (std::size_t j = 0; j < members.size(); ++j) {
      const auto i = members[j];
      const double p = std::max(records[i].value, 0.0);
      std::uint64_t k = 0;
      if (j + 1 == members.size()) {
        k = remaining;
      } else if (mass > 0.0) {
        k = draw_binomial(rng, remaining, std::min(1.0, p / mass));
      }
      remaining -= k;
      mass -= p;
      records[i].value = static_cast<double>(k) / static_cast<double>(shots);
      records[i].shots = shots;
    }
  }
  return records;
}

}  // namespace cstomo
