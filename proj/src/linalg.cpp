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

#include "cstomo/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>

#include "cstomo/error.hpp"

namespace cstomo {

namespace {

constexpr double kMaxAsymmetry = 1e-6;
constexpr double kHermitianTol = 1e-12;

void require_same_shape(const Matrix& a, const Matrix& b, const char* op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError(fmt::format("{}: shape mismatch {}x{} vs {}x{}", op, a.rows(), a.cols(),
                                     b.rows(), b.cols()));
  }
}

Matrix recompose(const Matrix& vectors, const RealVector& values) {
  Matrix r = vectors * values.asDiagonal() * vectors.adjoint();
  return (r + r.adjoint()) * 0.5;
}

}  // namespace

bool all_finite(const Matrix& m) { return m.real().allFinite() && m.imag().allFinite(); }

DensityMatrix DensityMatrix::from_matrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw InvalidArgument(fmt::format("density matrix must be square and nonempty, got {}x{}", m.rows(), m.cols()));
  }
  if (!all_finite(m)) throw InvalidArgument("density matrix has non-finite entries");
  const double asym = hermitian_asymmetry(m);
  if (asym > kHermitianTol) {
    throw InvalidArgument(fmt::format("density matrix is not Hermitian (asymmetry {:.3e})", asym));
  }
  Matrix h = (m + m.adjoint()) * 0.5;
  const double tr = h.trace().real();
  if (std::abs(tr - 1.0) > kTraceTol) {
    throw InvalidArgument(fmt::format("density matrix trace is {:.17g} (deviation {:.3e})", tr, tr - 1.0));
  }
  const double min_eig = herm_eig(h).values.minCoeff();
  if (min_eig < -kEigTol) {
    throw InvalidArgument(fmt::format("density matrix is not positive semidefinite (min eigenvalue {:.3e})", min_eig));
  }
  return DensityMatrix(std::move(h));
}

DensityMatrix DensityMatrix::maximally_mixed(Eigen::Index d) {
  if (d < 1) throw InvalidArgument("dimension must be positive");
  return DensityMatrix(Matrix::Identity(d, d) / static_cast<double>(d));
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index j = 0; j < a.rows(); ++j) {
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      out.block(j * b.rows(), k * b.cols(), b.rows(), b.cols()) = a(j, k) * b;
    }
  }
  return out;
}

Matrix kron_power(const Matrix& a, int n) {
  if (n < 1) throw InvalidArgument("kron_power: n must be >= 1");
  Matrix out = a;
  for (int i = 1; i < n; ++i) out = kron(out, a);
  return out;
}

Matrix outer(const Vector& z) { return z * z.adjoint(); }

DensityMatrix pure_density(const Vector& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw InvalidArgument(fmt::format("state vector norm is {:.17g}, expected 1", norm));
  }
  Matrix p = outer(psi);
  return DensityMatrix((p + p.adjoint()) * 0.5);
}

double hermitian_asymmetry(const Matrix& h) {
  if (h.rows() != h.cols()) return std::numeric_limits<double>::infinity();
  if (h.size() == 0) return 0.0;
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

Matrix hermitian_part(const Matrix& h) {
  if (h.rows() != h.cols()) {
    throw InvalidArgument(fmt::format("expected a square matrix, got {}x{}", h.rows(), h.cols()));
  }
  const double asym = hermitian_asymmetry(h);
  if (!(asym <= kMaxAsymmetry)) {
    throw InvalidArgument(fmt::format("matrix is not Hermitian (asymmetry {:.3e} > {:.0e})", asym, kMaxAsymmetry));
  }
  return (h + h.adjoint()) * 0.5;
}

EigenDecomposition herm_eig(const Matrix& h) {
  const Matrix sym = hermitian_part(h);
  Eigen::SelfAdjointEigenSolver<Matrix> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    // Residual of whatever the solver left behind, for the error message.
    const double res = (sym - solver.eigenvectors() * solver.eigenvalues().asDiagonal() *
                                  solver.eigenvectors().adjoint())
                           .norm();
    throw SolverError(fmt::format("Hermitian eigensolver did not converge (residual {:.3e})", res));
  }
  // Eigen returns ascending order.
  const Eigen::Index d = sym.rows();
  EigenDecomposition out{RealVector(d), Matrix(d, d)};
  for (Eigen::Index i = 0; i < d; ++i) {
    out.values(i) = solver.eigenvalues()(d - 1 - i);
    out.vectors.col(i) = solver.eigenvectors().col(d - 1 - i);
  }
  return out;
}

RealVector project_simplex(const RealVector& v) {
  const Eigen::Index n = v.size();
  if (n == 0) throw InvalidArgument("project_simplex: empty vector");
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double tau = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    cumsum += u[static_cast<std::size_t>(i)];
    const double t = (cumsum - 1.0) / static_cast<double>(i + 1);
    if (u[static_cast<std::size_t>(i)] - t > 0) tau = t;
  }
  return (v.array() - tau).cwiseMax(0.0).matrix();
}

DensityMatrix project_density_cone(const Matrix& h) {
  const EigenDecomposition eig = herm_eig(h);
  return DensityMatrix(recompose(eig.vectors, project_simplex(eig.values)));
}

double trace_inner(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "trace_inner");
  if (a.rows() != a.cols()) throw DimensionError("trace_inner: operands must be square");
  const Complex t = (a.array() * b.transpose().array()).sum();
  const double scale = std::max(1.0, a.norm() * b.norm());
  if (std::abs(t.imag()) > 1e-10 * scale) {
    throw InvalidArgument(fmt::format("trace_inner: imaginary part {:.3e} (operands not Hermitian)", t.imag()));
  }
  return t.real();
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
  require_same_shape(a, b, "frobenius_distance");
  return (a - b).norm();
}

}  // namespace cstomo
