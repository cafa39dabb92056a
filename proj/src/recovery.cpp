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

#include "cstomo/recovery.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/random/uniform_int_distribution.hpp>
#include <fmt/format.h>

#include "cstomo/error.hpp"
#include "cstomo/measurement_map.hpp"
#include "cstomo/random.hpp"

namespace cstomo {

namespace {

// Residuals are evaluated every kCheckEvery iterations; each check costs two
// extra adjoint applications.
constexpr int kCheckEvery = 10;
constexpr double kBalanceRatio = 10.0;
constexpr double kBalanceFactor = 2.0;
// After this many penalty changes mu stays fixed so the iteration can settle.
constexpr int kMaxRescales = 20;

struct Problem {
  MeasurementMap map;
  RealVector b;
};

Problem build_problem(const OperatorSet& ops, const std::vector<MeasurementRecord>& records) {
  ops.check();
  if (records.empty()) throw InvalidArgument("recovery needs at least one measurement record");
  std::vector<OperatorDescriptor> rows;
  rows.reserve(records.size());
  RealVector b(static_cast<Eigen::Index>(records.size()));
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& rec = records[i];
    if (rec.operator_id >= ops.size()) {
      throw InvalidArgument(fmt::format("record {} references operator {} but the set has {} operators", i,
                                        rec.operator_id, ops.size()));
    }
    if (!std::isfinite(rec.value)) throw InvalidArgument(fmt::format("record {} has a non-finite value", i));
    rows.push_back(ops.descriptors[rec.operator_id]);
    b(static_cast<Eigen::Index>(i)) = rec.value;
  }
  return {MeasurementMap(rows), std::move(b)};
}

Matrix shrink_modulus(const Matrix& x, double t) {
  return x.unaryExpr([t](const Complex& c) {
    const double a = std::abs(c);
    return a <= t ? Complex(0.0, 0.0) : c * ((a - t) / a);
  });
}

RealVector soft_threshold(const RealVector& x, double t) {
  return x.unaryExpr([t](double v) { return v > t ? v - t : (v < -t ? v + t : 0.0); });
}

// ADMM over the splitting
//   A(rho) = y,   rho = Z (density matrices),   rho = X (l1 only)
// with f(y) = |y - b|_1 (phaselift) or the box |y - b| <= eps (l1), and
// |X|_1 for l1. The rho-update solves (A*A + c I) rho = A*(y - u) + P,
// where P collects the c Hermitian copies, through
//   v = (G + cI)^{-1} (A(P) - c q),   A(rho) = q + v,   rho = (P - A*(v)) / c
// with q = y - u and G the Gram matrix of the operators.
RecoveryResult run_admm(const Problem& prob, const RecoveryConfig& cfg) {
  cfg.check();
  const bool l1 = cfg.method == Method::kL1;
  const Eigen::Index d = prob.map.dim();
  const Eigen::Index m = prob.map.size();
  const double copies = l1 ? 2.0 : 1.0;
  const double tol_abs = cfg.tol_abs_for(d);
  const RealVector& b = prob.b;
  const double eps = cfg.equality_epsilon;

  Eigen::MatrixXd system = prob.map.gram();
  system.diagonal().array() += copies;
  const Eigen::LLT<Eigen::MatrixXd> llt(system);
  if (llt.info() != Eigen::Success) throw SolverError("Gram system factorization failed");

  const auto prox_y = [&](const RealVector& w, double mu) -> RealVector {
    if (l1) return w.array().max(b.array() - eps).min(b.array() + eps).matrix();
    return b + soft_threshold(RealVector(w - b), 1.0 / mu);
  };

  double mu = cfg.penalty;
  Matrix rho = DensityMatrix::maximally_mixed(d).matrix();
  DensityMatrix z_state = DensityMatrix::maximally_mixed(d);
  Matrix x = rho;
  Matrix w = Matrix::Zero(d, d);
  Matrix v_dual = Matrix::Zero(d, d);
  RealVector arho = prob.map.apply(rho);
  RealVector y = prox_y(arho, mu);
  RealVector u = RealVector::Zero(m);

  RecoveryResult result{z_state, 0.0, 0.0, 0.0, 0, false, {}};
  double r_norm = std::numeric_limits<double>::infinity();
  double s_norm = std::numeric_limits<double>::infinity();
  double eps_pri = 0.0;
  double eps_dual = 0.0;
  int it = 0;
  int rescales = 0;
  for (it = 1; it <= cfg.max_iter; ++it) {
    const RealVector q = y - u;
    Matrix p = z_state.matrix() - w;
    if (l1) p += x - v_dual;
    const RealVector v = llt.solve(prob.map.apply(p) - copies * q);
    arho = q + v;
    rho = (p - prob.map.adjoint(v)) / copies;

    const RealVector y_old = y;
    const Matrix z_old = z_state.matrix();
    const Matrix x_old = x;

    // Over-relaxed copies of the rho-block outputs.
    const double alpha = cfg.relaxation;
    const RealVector arho_h = alpha * arho + (1.0 - alpha) * y_old;
    Matrix rho_z = alpha * rho + (1.0 - alpha) * z_old;

    y = prox_y(arho_h + u, mu);
    {
      // Roundoff asymmetry grows with the dual magnitudes; strip it first.
      Matrix t = rho_z + w;
      if (cfg.tie_break > 0.0) {
        // prox of indicator(D) + tie_break/2 |Z - I/d|^2 at t
        t = (mu * t) / (mu + cfg.tie_break);
        t.diagonal().array() += cfg.tie_break / (mu + cfg.tie_break) / static_cast<double>(d);
      }
      z_state = project_density_cone((t + t.adjoint()) * 0.5);
    }
    u += arho_h - y;
    w += rho_z - z_state.matrix();
    if (l1) {
      const Matrix rho_x = alpha * rho + (1.0 - alpha) * x_old;
      x = shrink_modulus(rho_x + v_dual, 1.0 / mu);
      v_dual += rho_x - x;
    }

    if (it % kCheckEvery != 0 && it != cfg.max_iter) continue;

    double r2 = (arho - y).squaredNorm() + (rho - z_state.matrix()).squaredNorm();
    Matrix ds = prob.map.adjoint(y - y_old) + (z_state.matrix() - z_old);
    Matrix dual_sum = prob.map.adjoint(u) + w;
    double ax2 = arho.squaredNorm() + rho.squaredNorm();
    double bz2 = y.squaredNorm() + z_state.matrix().squaredNorm();
    if (l1) {
      r2 += (rho - x).squaredNorm();
      ds += x - x_old;
      dual_sum += v_dual;
      ax2 += rho.squaredNorm();
      bz2 += x.squaredNorm();
    }
    r_norm = std::sqrt(r2);
    s_norm = mu * ds.norm();
    eps_pri = tol_abs + cfg.tol_rel * std::sqrt(std::max(ax2, bz2));
    eps_dual = tol_abs + cfg.tol_rel * mu * dual_sum.norm();
    if (r_norm <= eps_pri && s_norm <= eps_dual) {
      result.converged = true;
      break;
    }
    if (cfg.residual_balancing && rescales < kMaxRescales) {
      // Scaled duals carry a 1/mu factor.
      if (r_norm > kBalanceRatio * s_norm) {
        ++rescales;
        mu *= kBalanceFactor;
        u /= kBalanceFactor;
        w /= kBalanceFactor;
        v_dual /= kBalanceFactor;
      } else if (s_norm > kBalanceRatio * r_norm) {
        ++rescales;
        mu /= kBalanceFactor;
        u *= kBalanceFactor;
        w *= kBalanceFactor;
        v_dual *= kBalanceFactor;
      }
    }
  }

  result.rho = z_state;
  result.iterations = std::min(it, cfg.max_iter);
  result.primal_residual = r_norm;
  result.dual_residual = s_norm;
  const RealVector fit = prob.map.apply(z_state.matrix()) - b;
  if (l1) {
    result.objective = l1_objective(z_state.matrix());
  } else {
    result.objective = fit.cwiseAbs().sum();
  }
  if (!result.converged) {
    result.diagnostic = fmt::format(
        "no convergence after {} iterations: primal residual {:.3e} (tolerance {:.3e}), dual residual {:.3e} "
        "(tolerance {:.3e})",
        result.iterations, r_norm, eps_pri, s_norm, eps_dual);
    if (l1) {
      const double violation = (fit.cwiseAbs().array() - eps).maxCoeff();
      if (violation > 0.0) {
        result.diagnostic += fmt::format("; data constraints violated by up to {:.3e}, the constraint system may be infeasible", violation);
      }
    }
  }
  return result;
}

}  // namespace

Method parse_method(std::string_view text) {
  if (text == "phaselift") return Method::kPhaseLift;
  if (text == "l1") return Method::kL1;
  throw InvalidArgument(fmt::format("unknown method '{}' (expected phaselift or l1)", text));
}

std::string_view to_string(Method m) { return m == Method::kL1 ? "l1" : "phaselift"; }

void RecoveryConfig::check() const {
  if (!(penalty > 0.0) || !std::isfinite(penalty)) throw InvalidArgument("penalty must be positive");
  if (tol_abs && !(*tol_abs > 0.0)) throw InvalidArgument("tol_abs must be positive");
  if (!(tol_rel > 0.0)) throw InvalidArgument("tol_rel must be positive");
  if (max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  if (!(tie_break >= 0.0) || !std::isfinite(tie_break)) throw InvalidArgument("tie_break must be >= 0");
  if (!(relaxation > 0.0 && relaxation < 2.0)) throw InvalidArgument("relaxation must lie in (0, 2)");
  if (!(equality_epsilon >= 0.0) || !std::isfinite(equality_epsilon)) {
    throw InvalidArgument("equality epsilon must be >= 0");
  }
}

RecoveryResult recover_phaselift(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                                 const RecoveryConfig& cfg) {
  RecoveryConfig c = cfg;
  c.method = Method::kPhaseLift;
  return run_admm(build_problem(ops, records), c);
}

RecoveryResult recover_l1(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                          const RecoveryConfig& cfg) {
  RecoveryConfig c = cfg;
  c.method = Method::kL1;
  return run_admm(build_problem(ops, records), c);
}

RecoveryResult recover(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                       const RecoveryConfig& cfg) {
  return cfg.method == Method::kL1 ? recover_l1(ops, records, cfg) : recover_phaselift(ops, records, cfg);
}

double phaselift_objective(const OperatorSet& ops, const std::vector<MeasurementRecord>& records,
                           const Matrix& rho) {
  const Problem prob = build_problem(ops, records);
  return (prob.map.apply(rho) - prob.b).cwiseAbs().sum();
}

double l1_objective(const Matrix& rho) { return rho.cwiseAbs().sum(); }

OperatorSet sample_without_replacement(const OperatorSet& set, std::size_t m, std::uint64_t seed) {
  if (m == 0) throw InvalidArgument("sample size must be >= 1");
  if (m > set.size()) {
    throw InvalidArgument(fmt::format("sample size {} exceeds set size {}", m, set.size()));
  }
  std::vector<std::size_t> idx(set.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first m slots are a uniform m-subset.
  for (std::size_t i = 0; i < m; ++i) {
    boost::random::uniform_int_distribution<std::size_t> pick(i, idx.size() - 1);
    std::swap(idx[i], idx[pick(rng)]);
  }
  idx.resize(m);
  std::sort(idx.begin(), idx.end());

  OperatorSet out;
  out.name = fmt::format("{}[{}]", set.name, m);
  out.n = set.n;
  for (auto i : idx) {
    out.descriptors.push_back(set.descriptors[i]);
    out.settings.push_back(set.settings[i]);
    out.source_ids.push_back(i);
  }
  return out;
}

std::vector<MeasurementRecord> restrict_records(const OperatorSet& subset,
                                                const std::vector<MeasurementRecord>& pool_records) {
  std::multimap<std::size_t, const MeasurementRecord*> by_id;
  for (const auto& r : pool_records) by_id.emplace(r.operator_id, &r);
  std::vector<MeasurementRecord> out;
  for (std::size_t i = 0; i < subset.size(); ++i) {
    auto [lo, hi] = by_id.equal_range(subset.source_ids[i]);
    for (auto it = lo; it != hi; ++it) {
      MeasurementRecord r = *it->second;
      r.operator_id = i;
      out.push_back(r);
    }
  }
  return out;
}

}  // namespace cstomo
