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

#include "cstomo/metrics.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "cstomo/error.hpp"
#include "cstomo/operators.hpp"
#include "cstomo/states.hpp"

namespace cstomo {

namespace {

void require_qubits_match(const DensityMatrix& rho, int n) {
  if (n < 1 || n > 20 || rho.dim() != (Eigen::Index{1} << n)) {
    throw DimensionError(fmt::format("state has dimension {}, which does not match {} qubits", rho.dim(), n));
  }
}

}  // namespace

double fidelity(const Matrix& rho, const Vector& psi) {
  if (rho.rows() != psi.size() || rho.cols() != psi.size()) {
    throw DimensionError(fmt::format("fidelity: state is {}x{}, target has {} amplitudes", rho.rows(), rho.cols(),
                                     psi.size()));
  }
  const Complex f = psi.dot(rho * psi);  // conjugates psi
  if (std::abs(f.imag()) > 1e-10) {
    throw InvalidArgument(fmt::format("fidelity has imaginary part {:.3e}", f.imag()));
  }
  return f.real();
}

double fidelity(const DensityMatrix& rho, const Vector& psi) { return fidelity(rho.matrix(), psi); }

double sc_fidelity_from_corners(double first, double last, double upper, double lower) {
  return 0.5 * (first + last + upper + lower);
}

double witness_expectation(const DensityMatrix& rho, int n) {
  require_qubits_match(rho, n);
  return 0.5 - fidelity(rho, sc_state(n));
}

double witness_expectation_decomposed(const DensityMatrix& rho, int n) {
  require_qubits_match(rho, n);
  double projector = 0.0;
  for (const auto& term : witness_decomposition(n)) {
    projector += term.coefficient * trace_inner(realize(term.op, n), rho.matrix());
  }
  return 0.5 - projector;
}

std::vector<double> default_visibility_grid() {
  std::vector<double> grid(48);
  for (int k = 0; k < 48; ++k) grid[static_cast<std::size_t>(k)] = k * std::numbers::pi / 24.0;
  return grid;
}

std::vector<VisibilityPoint> visibility_curve(const DensityMatrix& rho, int n, const std::vector<double>& grid) {
  require_qubits_match(rho, n);
  std::vector<VisibilityPoint> curve;
  curve.reserve(grid.size());
  for (double theta : grid) curve.push_back({theta, trace_inner(m_theta_power(theta, n), rho.matrix())});
  return curve;
}

double visibility_amplitude(const std::vector<VisibilityPoint>& curve, int n) {
  if (curve.size() < 3) throw InvalidArgument("visibility fit needs at least three points");
  // A cos(n t + phi) + c = a cos(n t) + b sin(n t) + c
  const auto rows = static_cast<Eigen::Index>(curve.size());
  Eigen::MatrixXd design(rows, 3);
  Eigen::VectorXd values(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& pt = curve[static_cast<std::size_t>(i)];
    design(i, 0) = std::cos(n * pt.theta);
    design(i, 1) = std::sin(n * pt.theta);
    design(i, 2) = 1.0;
    values(i) = pt.value;
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(values);
  return std::hypot(coef(0), coef(1));
}

ErrorMetrics error_metrics(const Matrix& rho, const Matrix& reference) {
  const double f = frobenius_distance(rho, reference);
  const auto d = static_cast<double>(rho.rows());
  return {f, f * f / (d * d)};
}

double entropy(const DensityMatrix& rho) {
  const RealVector lambda = herm_eig(rho.matrix()).values;
  double s = 0.0;
  for (double l : lambda) {
    if (l > 1e-12) s -= l * std::log(l);
  }
  return s;
}

MetricsReport compute_metrics(const DensityMatrix& rho, int n, const Matrix* reference) {
  require_qubits_match(rho, n);
  MetricsReport r;
  r.fidelity = fidelity(rho, sc_state(n));
  r.witness_expectation = 0.5 - r.fidelity;
  const Matrix ideal = ideal_density(n).matrix();
  const auto err = error_metrics(rho.matrix(), reference ? *reference : ideal);
  r.frobenius_error = err.frobenius_error;
  r.mse = err.mse;
  r.entropy = entropy(rho);
  r.visibility = visibility_curve(rho, n, default_visibility_grid());
  r.visibility_amplitude = visibility_amplitude(r.visibility, n);
  return r;
}

}  // namespace cstomo
