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

#include "cstomo/measurement_map.hpp"

#include <fmt/format.h>

#include "cstomo/error.hpp"

namespace cstomo {

namespace {

Eigen::Index basis_index(const Computational& c) {
  Eigen::Index k = 0;
  for (auto b : c.bits) k = (k << 1) | static_cast<Eigen::Index>(b);
  return k;
}

// Re Tr(a b) without the Hermiticity check of trace_inner.
double re_trace_product(const Matrix& a, const Matrix& b) {
  return (a.array() * b.transpose().array()).sum().real();
}

}  // namespace

MeasurementMap::MeasurementMap(const std::vector<OperatorDescriptor>& ops) {
  if (ops.empty()) throw InvalidArgument("measurement map needs at least one operator");
  const int n = qubit_count(ops.front());
  dim_ = Eigen::Index{1} << n;
  size_ = static_cast<Eigen::Index>(ops.size());

  std::vector<Vector> cols;
  for (Eigen::Index row = 0; row < size_; ++row) {
    const auto& desc = ops[static_cast<std::size_t>(row)];
    validate(desc);
    if (qubit_count(desc) != n) {
      throw DimensionError(fmt::format("operator {} acts on {} qubits, expected {}", row, qubit_count(desc), n));
    }
    if (const auto* c = std::get_if<Computational>(&desc)) {
      diag_rows_.push_back(row);
      diag_index_.push_back(basis_index(*c));
    } else if (std::holds_alternative<ThetaPattern>(desc)) {
      factor_rows_.push_back(row);
      cols.push_back(*factor(desc));
    } else {
      dense_rows_.push_back(row);
      dense_.push_back(realize(desc));
    }
  }
  factors_.resize(dim_, static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) factors_.col(static_cast<Eigen::Index>(j)) = cols[j];
}

RealVector MeasurementMap::apply(const Matrix& rho) const {
  if (rho.rows() != dim_ || rho.cols() != dim_) {
    throw DimensionError(fmt::format("state is {}x{}, operators are {}x{}", rho.rows(), rho.cols(), dim_, dim_));
  }
  RealVector out(size_);
  for (std::size_t j = 0; j < diag_rows_.size(); ++j) out(diag_rows_[j]) = rho(diag_index_[j], diag_index_[j]).real();
  if (factors_.cols() > 0) {
    const Matrix rz = rho * factors_;
    const RealVector vals = factors_.conjugate().cwiseProduct(rz).colwise().sum().real().transpose();
    for (std::size_t j = 0; j < factor_rows_.size(); ++j) out(factor_rows_[j]) = vals(static_cast<Eigen::Index>(j));
  }
  for (std::size_t j = 0; j < dense_rows_.size(); ++j) out(dense_rows_[j]) = re_trace_product(dense_[j], rho);
  return out;
}

Matrix MeasurementMap::adjoint(const RealVector& v) const {
  if (v.size() != size_) throw DimensionError(fmt::format("adjoint: vector has {} entries, map has {}", v.size(), size_));
  Matrix out = Matrix::Zero(dim_, dim_);
  for (std::size_t j = 0; j < diag_rows_.size(); ++j) out(diag_index_[j], diag_index_[j]) += v(diag_rows_[j]);
  if (factors_.cols() > 0) {
    RealVector w(factors_.cols());
    for (std::size_t j = 0; j < factor_rows_.size(); ++j) w(static_cast<Eigen::Index>(j)) = v(factor_rows_[j]);
    out.noalias() += factors_ * w.asDiagonal() * factors_.adjoint();
  }
  for (std::size_t j = 0; j < dense_rows_.size(); ++j) out += v(dense_rows_[j]) * dense_[j];
  return out;
}

Eigen::MatrixXd MeasurementMap::gram() const {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(size_, size_);
  const auto nd = diag_rows_.size();
  const auto nf = factor_rows_.size();
  const auto nx = dense_rows_.size();

  for (std::size_t a = 0; a < nd; ++a) {
    for (std::size_t b = 0; b < nd; ++b) {
      g(diag_rows_[a], diag_rows_[b]) = diag_index_[a] == diag_index_[b] ? 1.0 : 0.0;
    }
    for (std::size_t b = 0; b < nf; ++b) {
      const double v = std::norm(factors_(diag_index_[a], static_cast<Eigen::Index>(b)));
      g(diag_rows_[a], factor_rows_[b]) = v;
      g(factor_rows_[b], diag_rows_[a]) = v;
    }
    for (std::size_t b = 0; b < nx; ++b) {
      const double v = dense_[b](diag_index_[a], diag_index_[a]).real();
      g(diag_rows_[a], dense_rows_[b]) = v;
      g(dense_rows_[b], diag_rows_[a]) = v;
    }
  }
  if (nf > 0) {
    const Eigen::MatrixXd overlaps = (factors_.adjoint() * factors_).cwiseAbs2();
    for (std::size_t a = 0; a < nf; ++a) {
      for (std::size_t b = 0; b < nf; ++b) {
        g(factor_rows_[a], factor_rows_[b]) = overlaps(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
      }
    }
  }
  for (std::size_t a = 0; a < nx; ++a) {
    if (nf > 0) {
      const Matrix mz = dense_[a] * factors_;
      const RealVector vals = factors_.conjugate().cwiseProduct(mz).colwise().sum().real().transpose();
      for (std::size_t b = 0; b < nf; ++b) {
        g(dense_rows_[a], factor_rows_[b]) = vals(static_cast<Eigen::Index>(b));
        g(factor_rows_[b], dense_rows_[a]) = vals(static_cast<Eigen::Index>(b));
      }
    }
    for (std::size_t b = a; b < nx; ++b) {
      const double v = re_trace_product(dense_[a], dense_[b]);
      g(dense_rows_[a], dense_rows_[b]) = v;
      g(dense_rows_[b], dense_rows_[a]) = v;
    }
  }
  return g;
}

}  // namespace cstomo
