// Copyright 2026 The qbl Authors
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

// Unconstrained real coordinates for states and Hermitian operators.

#ifndef QBL_PARAM_HPP
#define QBL_PARAM_HPP

#include "qbl/operator.hpp"

namespace qbl::param {

/// Number of reals describing a d x d complex matrix X.
inline Index square_root_size(Index d) { return 2 * d * d; }

inline Matrix unpack_square(const RealVector& x, Index d) {
    Matrix m(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) m(i, j) = Complex(x(2 * (i * d + j)), x(2 * (i * d + j) + 1));
    }
    return m;
}

inline RealVector pack_square(const Matrix& m) {
    const Index d = m.rows();
    RealVector x(2 * d * d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) {
            x(2 * (i * d + j)) = m(i, j).real();
            x(2 * (i * d + j) + 1) = m(i, j).imag();
        }
    }
    return x;
}

/// rho = X X^dagger / tr(X X^dagger); throws ZeroTrace for X = 0.
inline DensityOperator state_from(const RealVector& x, Index d) {
    const Matrix m = unpack_square(x, d);
    return DensityOperator(Matrix(m * m.adjoint()));
}

/// Coordinates whose state_from is rho (X = rho^{1/2}).
inline RealVector coordinates_of(const PSDOperator& rho) {
    return pack_square(rho.map_spectrum([](double v) { return std::sqrt(std::max(v, 0.0)); }).matrix());
}

/// d^2 reals: the diagonal, then (re, im) of the strict upper triangle.
inline Index hermitian_size(Index d) { return d * d; }

inline Matrix unpack_hermitian(const RealVector& x, Index d, Index offset = 0) {
    Matrix h = Matrix::Zero(d, d);
    Index p = offset;
    for (Index i = 0; i < d; ++i) h(i, i) = x(p++);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            h(i, j) = Complex(x(p), x(p + 1));
            h(j, i) = std::conj(h(i, j));
            p += 2;
        }
    }
    return h;
}

inline void pack_hermitian(const Matrix& h, RealVector& x, Index offset = 0) {
    const Index d = h.rows();
    Index p = offset;
    for (Index i = 0; i < d; ++i) x(p++) = h(i, i).real();
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            x(p++) = h(i, j).real();
            x(p++) = h(i, j).imag();
        }
    }
}

}  // namespace qbl::param

#endif  // QBL_PARAM_HPP
