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

#ifndef QBL_CHANNEL_HPP
#define QBL_CHANNEL_HPP

#include <algorithm>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "qbl/operator.hpp"

namespace qbl {

/// Trace-preserving map X -> sum_i s_i K_i X K_i^dagger. All signs are +1
/// for channels (CP by construction); maps that are positive but not
/// completely positive carry some -1 signs and must be built through
/// Channel::positive_only.
class Channel {
public:
    explicit Channel(std::vector<Matrix> kraus, std::string label = {}, const NumericPolicy& policy = {})
        : kraus_(std::move(kraus)), signs_(kraus_.size(), 1.0), label_(std::move(label)) {
        validate(policy);
    }

    /// A trace-preserving map that is only asserted to be positive. The
    /// Choi certificate is skipped; positivity is spot-checked on random
    /// pure inputs instead since no finite certificate exists.
    static Channel positive_only(std::vector<Matrix> kraus, std::vector<double> signs, std::string label = {},
                                 const NumericPolicy& policy = {}) {
        Channel ch;
        ch.kraus_ = std::move(kraus);
        ch.signs_ = std::move(signs);
        ch.label_ = std::move(label);
        ch.positive_only_ = true;
        if (ch.signs_.size() != ch.kraus_.size()) throw DimensionMismatch("positive_only: one sign per Kraus operator");
        ch.validate(policy);
        ch.spot_check_positivity(policy);
        return ch;
    }

    Index dim_in() const { return kraus_.front().cols(); }
    Index dim_out() const { return kraus_.front().rows(); }
    const std::vector<Matrix>& kraus() const { return kraus_; }
    const std::vector<double>& signs() const { return signs_; }
    const std::string& label() const { return label_; }
    bool is_positive_only() const { return positive_only_; }

    Matrix apply(const Matrix& x) const {
        require_same_dim(x.rows(), dim_in(), "Channel::apply");
        Matrix out = Matrix::Zero(dim_out(), dim_out());
        for (std::size_t i = 0; i < kraus_.size(); ++i) out += signs_[i] * kraus_[i] * x * kraus_[i].adjoint();
        return out;
    }
    HermitianOperator apply(const HermitianOperator& x) const { return HermitianOperator(apply(x.matrix())); }
    PSDOperator apply(const PSDOperator& x) const { return PSDOperator(apply(x.matrix())); }
    DensityOperator apply(const DensityOperator& x) const { return DensityOperator(apply(x.matrix())); }

    Matrix apply_adjoint(const Matrix& y) const {
        require_same_dim(y.rows(), dim_out(), "Channel::apply_adjoint");
        Matrix out = Matrix::Zero(dim_in(), dim_in());
        for (std::size_t i = 0; i < kraus_.size(); ++i) out += signs_[i] * kraus_[i].adjoint() * y * kraus_[i];
        return out;
    }
    HermitianOperator apply_adjoint(const HermitianOperator& y) const {
        return HermitianOperator(apply_adjoint(y.matrix()));
    }

    /// E^dagger of an operator that is -inf on a subspace K: the result is
    /// -inf on the support of E^dagger(P_K) and the compression of
    /// E^dagger(finite part) elsewhere.
    ExtendedHermitian apply_adjoint(const ExtendedHermitian& y) const {
        require_same_dim(y.dim(), dim_out(), "Channel::apply_adjoint");
        Matrix finite = apply_adjoint(y.finite_part());
        if (!y.has_kernel()) return ExtendedHermitian(HermitianOperator(finite));
        const Matrix pulled = apply_adjoint(y.kernel_projector());
        return ExtendedHermitian(std::move(finite), detail::small_eigenspace(pulled, 1e-9));
    }

    /// sum_ij |i><j| (x) E(|i><j|), dimension dim_in * dim_out.
    Matrix choi() const {
        const Index din = dim_in();
        const Index dout = dim_out();
        Matrix c = Matrix::Zero(din * dout, din * dout);
        for (Index i = 0; i < din; ++i) {
            for (Index j = 0; j < din; ++j) {
                Matrix eij = Matrix::Zero(din, din);
                eij(i, j) = 1.0;
                c.block(i * dout, j * dout, dout, dout) = apply(eij);
            }
        }
        return c;
    }

    /// Minimal Choi eigenvalue; >= -psd_slack certifies complete positivity.
    double choi_min_eigenvalue() const { return detail::eigh(choi()).values(0); }

    bool certify_cp(const NumericPolicy& policy = {}) const {
        return choi_min_eigenvalue() >= -policy.psd_slack;
    }

private:
    Channel() = default;

    void validate(const NumericPolicy& policy) {
        if (kraus_.empty()) throw DimensionMismatch("Channel: empty Kraus family");
        for (const Matrix& k : kraus_) {
            if (k.rows() != dim_out() || k.cols() != dim_in() || k.size() == 0) {
                throw DimensionMismatch("Channel: inconsistent Kraus shapes");
            }
        }
        Matrix s = Matrix::Zero(dim_in(), dim_in());
        for (std::size_t i = 0; i < kraus_.size(); ++i) s += signs_[i] * kraus_[i].adjoint() * kraus_[i];
        const double dev = detail::max_abs(s - Matrix::Identity(dim_in(), dim_in()));
        if (dev > policy.trace_preserving) {
            throw NotTracePreserving("Channel '" + label_ + "': sum K^dagger K deviates by " + std::to_string(dev));
        }
    }

    void spot_check_positivity(const NumericPolicy& policy) const {
        std::mt19937_64 rng(0x5eed);
        std::normal_distribution<double> n(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            CVector psi(dim_in());
            for (Index i = 0; i < psi.size(); ++i) psi(i) = Complex(n(rng), n(rng));
            psi.normalize();
            const Matrix out = apply(Matrix(psi * psi.adjoint()));
            if (detail::eigh(0.5 * (out + out.adjoint())).values(0) < -policy.psd_slack) {
                throw NotPositive("Channel '" + label_ + "': output of a pure state is not PSD");
            }
        }
    }

    std::vector<Matrix> kraus_;
    std::vector<double> signs_;
    std::string label_;
    bool positive_only_ = false;
};

inline Channel identity_channel(Index d) { return Channel({Matrix::Identity(d, d)}, "id"); }

inline Channel unitary_channel(const Matrix& u, std::string label = "unitary") {
    return Channel({u}, std::move(label));
}

/// Partial trace keeping the subsystems in `keep` (0-based, any order;
/// output ordering follows the input ordering). Subsystem 0 is the most
/// significant tensor factor.
inline Channel partial_trace(const std::vector<Index>& dims, std::vector<Index> keep) {
    if (dims.empty()) throw BadPartition("partial_trace: no subsystems");
    for (Index d : dims) {
        if (d <= 0) throw BadPartition("partial_trace: non-positive subsystem dimension");
    }
    std::sort(keep.begin(), keep.end());
    if (std::adjacent_find(keep.begin(), keep.end()) != keep.end()) {
        throw BadPartition("partial_trace: repeated index in keep");
    }
    for (Index k : keep) {
        if (k < 0 || k >= static_cast<Index>(dims.size())) throw BadPartition("partial_trace: keep index out of range");
    }
    const Index m = static_cast<Index>(dims.size());
    std::vector<bool> kept(static_cast<std::size_t>(m), false);
    for (Index k : keep) kept[static_cast<std::size_t>(k)] = true;
    const Index din = std::accumulate(dims.begin(), dims.end(), Index{1}, std::multiplies<>());
    Index dout = 1;
    Index ddis = 1;
    for (Index s = 0; s < m; ++s) (kept[static_cast<std::size_t>(s)] ? dout : ddis) *= dims[static_cast<std::size_t>(s)];

    std::vector<Matrix> kraus(static_cast<std::size_t>(ddis), Matrix::Zero(dout, din));
    for (Index x = 0; x < din; ++x) {
        Index rem = x;
        Index out_idx = 0;
        Index dis_idx = 0;
        Index out_stride = 1;
        Index dis_stride = 1;
        for (Index s = m - 1; s >= 0; --s) {
            const Index ds = dims[static_cast<std::size_t>(s)];
            const Index digit = rem % ds;
            rem /= ds;
            if (kept[static_cast<std::size_t>(s)]) {
                out_idx += digit * out_stride;
                out_stride *= ds;
            } else {
                dis_idx += digit * dis_stride;
                dis_stride *= ds;
            }
        }
        kraus[static_cast<std::size_t>(dis_idx)](out_idx, x) = 1.0;
    }
    std::string label = "tr_complement{";
    for (std::size_t i = 0; i < keep.size(); ++i) label += (i ? "," : "") + std::to_string(keep[i]);
    label += "}";
    return Channel(std::move(kraus), std::move(label));
}

/// X -> tr X, output dimension 1.
inline Channel trace_map(Index d) { return partial_trace({d}, {}); }

/// Pinching in the orthonormal basis given by the columns of `basis`.
inline Channel measurement_channel(const Matrix& basis, std::string label = "measure",
                                   const NumericPolicy& policy = {}) {
    if (basis.rows() != basis.cols() || basis.size() == 0) throw NotOrthonormal("measurement_channel: basis must be square");
    const Index d = basis.rows();
    if (detail::max_abs(basis.adjoint() * basis - Matrix::Identity(d, d)) > policy.orthonormal) {
        throw NotOrthonormal("measurement_channel: basis is not orthonormal");
    }
    std::vector<Matrix> kraus;
    kraus.reserve(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) kraus.emplace_back(basis.col(i) * basis.col(i).adjoint());
    return Channel(std::move(kraus), std::move(label));
}

inline Matrix pauli(char which) {
    Matrix s(2, 2);
    const Complex i(0.0, 1.0);
    switch (which) {
        case 'X': s << 0, 1, 1, 0; break;
        case 'Y': s << 0, -i, i, 0; break;
        case 'Z': s << 1, 0, 0, -1; break;
        default: s = Matrix::Identity(2, 2);
    }
    return s;
}

/// Eigenbases of the Pauli operators as columns: |x0> = (1,1)/sqrt2,
/// |x1> = (1,-1)/sqrt2, |y0> = (1,i)/sqrt2, |y1> = (1,-i)/sqrt2, |z0>, |z1>.
inline Matrix pauli_basis(char which) {
    Matrix b(2, 2);
    const double r = 1.0 / std::sqrt(2.0);
    const Complex i(0.0, 1.0);
    switch (which) {
        case 'X': b << r, r, r, -r; break;
        case 'Y': b << r, r, r * i, -r * i; break;
        default: b = Matrix::Identity(2, 2);
    }
    return b;
}

/// Qubit depolarizing channel X -> (1-p) X + p tr(X) 1/2.
inline Channel depolarizing(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability("depolarizing: p outside [0,1]");
    const double a = std::sqrt(1.0 - 0.75 * p);
    const double b = std::sqrt(0.25 * p);
    return Channel({a * pauli('I'), b * pauli('X'), b * pauli('Y'), b * pauli('Z')},
                   "depolarizing(" + std::to_string(p) + ")");
}

inline Channel tensor(const Channel& a, const Channel& b) {
    std::vector<Matrix> kraus;
    std::vector<double> signs;
    kraus.reserve(a.kraus().size() * b.kraus().size());
    for (std::size_t i = 0; i < a.kraus().size(); ++i) {
        for (std::size_t j = 0; j < b.kraus().size(); ++j) {
            kraus.push_back(kron(a.kraus()[i], b.kraus()[j]));
            signs.push_back(a.signs()[i] * b.signs()[j]);
        }
    }
    std::string label = a.label() + "(x)" + b.label();
    if (a.is_positive_only() || b.is_positive_only()) {
        return Channel::positive_only(std::move(kraus), std::move(signs), std::move(label));
    }
    return Channel(std::move(kraus), std::move(label));
}

}  // namespace qbl

#endif  // QBL_CHANNEL_HPP
