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

#include <cmath>
#include <cstdint>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include "cstomo/linalg.hpp"
#include "cstomo/random.hpp"

namespace cstomo::testing {

inline Matrix random_complex(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  boost::random::normal_distribution<double> g;
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

inline Matrix random_hermitian(Eigen::Index d, Rng& rng) {
  Matrix a = random_complex(d, d, rng);
  return (a + a.adjoint()) / 2.0;
}

inline Vector random_unit_vector(Eigen::Index d, Rng& rng) {
  Vector v = random_complex(d, 1, rng).col(0);
  return v / v.norm();
}

inline Matrix random_unitary(Eigen::Index d, Rng& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_complex(d, d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

// Wishart-style state of random rank between 1 and d.
inline Matrix random_density(Eigen::Index d, Rng& rng) {
  boost::random::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Index rank = 1 + static_cast<Eigen::Index>(u(rng) * static_cast<double>(d));
  if (rank > d) rank = d;
  Matrix g = random_complex(d, rank, rng);
  Matrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  return (rho + rho.adjoint()) / 2.0;
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0.0, 1.0, 1.0, 0.0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1.0, 0.0, 0.0, -1.0;
  return m;
}

inline Matrix diag(std::initializer_list<double> values) {
  RealVector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v(i++) = x;
  return v.cast<Complex>().asDiagonal();
}

}  // namespace cstomo::testing
