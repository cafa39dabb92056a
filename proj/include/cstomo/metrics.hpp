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

#include <optional>
#include <vector>

#include "cstomo/linalg.hpp"

namespace cstomo {

/// <psi|rho|psi>. Throws DimensionError on size mismatch and InvalidArgument
/// if the imaginary part exceeds 1e-10.
double fidelity(const Matrix& rho, const Vector& psi);
double fidelity(const DensityMatrix& rho, const Vector& psi);

/// Fidelity with the n-qubit cat state from the four corner entries of rho:
/// (rho_00 + rho_dd + Re rho_0d + Re rho_d0) / 2.
double sc_fidelity_from_corners(double first, double last, double upper, double lower);

/// <w> = Tr(rho (I/2 - |SC><SC|)) = 1/2 - F.
double witness_expectation(const DensityMatrix& rho, int n);

/// <w> evaluated term by term through witness_decomposition(n) (even n).
double witness_expectation_decomposed(const DensityMatrix& rho, int n);

struct VisibilityPoint {
  double theta;
  double value;
};

/// theta = k pi / 24, k = 0..47.
std::vector<double> default_visibility_grid();

/// Tr(M_theta^{(x)n} rho) at each grid angle.
std::vector<VisibilityPoint> visibility_curve(const DensityMatrix& rho, int n, const std::vector<double>& grid);

/// Least-squares amplitude A >= 0 of A cos(n theta + phi) + c.
/// Throws InvalidArgument for fewer than three points.
double visibility_amplitude(const std::vector<VisibilityPoint>& curve, int n);

struct ErrorMetrics {
  double frobenius_error;
  double mse;  // frobenius_error^2 / d^2
};

ErrorMetrics error_metrics(const Matrix& rho, const Matrix& reference);

/// -sum lambda ln lambda over eigenvalues above 1e-12 (nats).
double entropy(const DensityMatrix& rho);

struct MetricsReport {
  double fidelity = 0.0;
  double witness_expectation = 0.0;
  double frobenius_error = 0.0;
  double mse = 0.0;
  double entropy = 0.0;
  std::vector<VisibilityPoint> visibility;
  std::optional<double> visibility_amplitude;
};

/// Every diagnostic against the n-qubit cat state; errors are measured
/// against `reference` when given, else against the ideal cat density matrix.
MetricsReport compute_metrics(const DensityMatrix& rho, int n, const Matrix* reference = nullptr);

}  // namespace cstomo
