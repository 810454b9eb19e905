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

#ifndef QBL_RANDOM_HPP
#define QBL_RANDOM_HPP

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/QR>

#include "qbl/channel.hpp"
#include "qbl/operator.hpp"

namespace qbl {

using Rng = std::mt19937_64;

inline Matrix ginibre(Index rows, Index cols, Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Matrix g(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        for (Index j = 0; j < cols; ++j) g(i, j) = Complex(n(rng), n(rng));
    }
    return g;
}

inline HermitianOperator random_hermitian(Index d, Rng& rng, double scale = 1.0) {
    const Matrix g = ginibre(d, d, rng);
    return HermitianOperator(Matrix(0.5 * scale * (g + g.adjoint())));
}

/// Haar-random unitary (QR of a Ginibre matrix with the phase fix).
inline Matrix random_unitary(Index d, Rng& rng) {
    const Matrix g = ginibre(d, d, rng);
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (Index i = 0; i < d; ++i) {
        const Complex diag = r(i, i);
        const double a = std::abs(diag);
        if (a > 0.0) q.col(i) *= diag / a;
    }
    return q;
}

/// Haar-random isometry C^din -> C^dout (dout >= din).
inline Matrix random_isometry(Index dout, Index din, Rng& rng) {
    return random_unitary(dout, rng).leftCols(din);
}

inline CVector haar_vector(Index d, Rng& rng) {
    CVector v = ginibre(d, 1, rng).col(0);
    v.normalize();
    return v;
}

inline DensityOperator haar_pure_state(Index d, Rng& rng) { return DensityOperator::pure(haar_vector(d, rng)); }

/// Hilbert-Schmidt distributed mixed state (full rank almost surely).
inline DensityOperator hs_mixed_state(Index d, Rng& rng) {
    const Matrix g = ginibre(d, d, rng);
    return DensityOperator(Matrix(g * g.adjoint()));
}

/// Rank-deficient state plus 1e-6 identity: probes the support boundary
/// while keeping full support.
inline DensityOperator boundary_state(Index d, Rng& rng, double floor = 1e-6) {
    std::uniform_int_distribution<Index> pick(1, std::max<Index>(1, d - 1));
    const Index rank = pick(rng);
    const Matrix g = ginibre(d, rank, rng);
    Matrix m = g * g.adjoint();
    m /= m.trace().real();
    m += floor * Matrix::Identity(d, d);
    return DensityOperator(std::move(m));
}

/// Random positive definite operator (not normalized), eigenvalues bounded away from 0.
inline PSDOperator random_pd(Index d, Rng& rng, double floor = 0.05) {
    const Matrix g = ginibre(d, d, rng);
    Matrix m = g * g.adjoint() / static_cast<double>(d);
    m += floor * Matrix::Identity(d, d);
    return PSDOperator(std::move(m));
}

/// Random channel via a Haar isometry C^din -> C^dout (x) C^kraus_count.
inline Channel random_channel(Index din, Index dout, Index kraus_count, Rng& rng) {
    if (dout * kraus_count < din) throw InvalidDatum("random_channel: need dout * kraus_count >= din");
    const Matrix v = random_isometry(dout * kraus_count, din, rng);
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<std::size_t>(kraus_count));
    for (Index k = 0; k < kraus_count; ++k) {
        Matrix kk(dout, din);
        for (Index r = 0; r < dout; ++r) kk.row(r) = v.row(r * kraus_count + k);
        kraus.push_back(std::move(kk));
    }
    return Channel(std::move(kraus), "random");
}

/// Random mixture of unitaries on C^d; unital.
inline Channel random_unital_channel(Index d, Index terms, Rng& rng) {
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::vector<double> w(static_cast<std::size_t>(terms));
    double total = 0.0;
    for (double& x : w) total += (x = u(rng));
    std::vector<Matrix> kraus;
    for (Index k = 0; k < terms; ++k) {
        kraus.push_back(std::sqrt(w[static_cast<std::size_t>(k)] / total) * random_unitary(d, rng));
    }
    return Channel(std::move(kraus), "random-unital");
}

/// Orthonormal basis (columns) drawn from the Haar measure.
inline Matrix random_basis(Index d, Rng& rng) { return random_unitary(d, rng); }

}  // namespace qbl

#endif  // QBL_RANDOM_HPP
