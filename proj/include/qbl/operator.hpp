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

/** @file
 *
 * Dense Hermitian linear algebra. Matrix functions go through the
 * eigendecomposition; logarithms of singular operators are kept exact by
 * carrying the kernel as a "-inf" subspace (ExtendedHermitian) instead of
 * regularizing eigenvalues.
 */

#ifndef QBL_OPERATOR_HPP
#define QBL_OPERATOR_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <mutex>
#include <span>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qbl/core.hpp"

namespace qbl {

/// Eigenvalues in ascending order with the matching unitary.
struct Spectrum {
    RealVector values;
    Matrix vectors;
};

namespace detail {

inline Spectrum eigh(const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m);
    return {es.eigenvalues(), es.eigenvectors()};
}

inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

struct SpectrumCache {
    std::once_flag once;
    Spectrum value;
};

/// Orthonormal basis of the eigenspace of a PSD matrix with eigenvalues <= tol.
inline Matrix small_eigenspace(const Matrix& psd, double rel_tol) {
    const Spectrum s = eigh(psd);
    const double scale = std::max(1.0, s.values.size() ? s.values.maxCoeff() : 0.0);
    Index count = 0;
    while (count < s.values.size() && s.values(count) <= rel_tol * scale) ++count;
    return s.vectors.leftCols(count);
}

inline Matrix compress(const Matrix& m, const Matrix& basis) {
    return basis * (basis.adjoint() * m * basis) * basis.adjoint();
}

}  // namespace detail

/// Kronecker product, subsystem `a` most significant.
inline Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        for (Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

/// Re tr(a b); exact trace pairing for Hermitian arguments.
inline double trace_product(const Matrix& a, const Matrix& b) {
    return (a.transpose().cwiseProduct(b)).sum().real();
}

class HermitianOperator {
public:
    explicit HermitianOperator(Matrix m, const NumericPolicy& policy = {})
        : m_(std::move(m)), cache_(std::make_shared<detail::SpectrumCache>()) {
        if (m_.rows() != m_.cols() || m_.rows() == 0) {
            throw DimensionMismatch("HermitianOperator: matrix must be square and non-empty");
        }
        const double dev = detail::max_abs(m_ - m_.adjoint());
        if (dev > policy.hermitian_input * (1.0 + detail::max_abs(m_))) {
            throw NotHermitian("HermitianOperator: deviation " + std::to_string(dev));
        }
        symmetrize();
    }

    static HermitianOperator identity(Index d) { return HermitianOperator(Matrix::Identity(d, d)); }
    static HermitianOperator zero(Index d) { return HermitianOperator(Matrix::Zero(d, d)); }
    static HermitianOperator diagonal(const RealVector& diag) {
        return HermitianOperator(Matrix(diag.cast<Complex>().asDiagonal()));
    }
    /// U diag(values) U^dagger; the spectrum is cached without re-diagonalizing.
    static HermitianOperator from_spectrum(const RealVector& values, const Matrix& vectors) {
        HermitianOperator h(vectors * values.cast<Complex>().asDiagonal() * vectors.adjoint());
        std::vector<Index> order(static_cast<std::size_t>(values.size()));
        for (Index i = 0; i < values.size(); ++i) order[static_cast<std::size_t>(i)] = i;
        std::sort(order.begin(), order.end(),
                  [&](Index a, Index b) { return values(a) < values(b); });
        Spectrum s{RealVector(values.size()), Matrix(vectors.rows(), vectors.cols())};
        for (Index i = 0; i < values.size(); ++i) {
            s.values(i) = values(order[static_cast<std::size_t>(i)]);
            s.vectors.col(i) = vectors.col(order[static_cast<std::size_t>(i)]);
        }
        std::call_once(h.cache_->once, [&] { h.cache_->value = std::move(s); });
        return h;
    }

    Index dim() const { return m_.rows(); }
    const Matrix& matrix() const { return m_; }

    const Spectrum& spectrum() const {
        std::call_once(cache_->once, [this] { cache_->value = detail::eigh(m_); });
        return cache_->value;
    }

    double trace() const { return m_.trace().real(); }
    double min_eigenvalue() const { return spectrum().values(0); }
    double max_eigenvalue() const { return spectrum().values(dim() - 1); }

    /// f applied to the spectrum: U diag(f(lambda)) U^dagger.
    template <class F>
    HermitianOperator map_spectrum(F f) const {
        const Spectrum& s = spectrum();
        return from_spectrum(s.values.unaryExpr(f), s.vectors);
    }

    friend HermitianOperator operator+(const HermitianOperator& a, const HermitianOperator& b) {
        require_same_dim(a.dim(), b.dim(), "operator+");
        return HermitianOperator(a.m_ + b.m_);
    }
    friend HermitianOperator operator-(const HermitianOperator& a, const HermitianOperator& b) {
        require_same_dim(a.dim(), b.dim(), "operator-");
        return HermitianOperator(a.m_ - b.m_);
    }
    friend HermitianOperator operator*(double s, const HermitianOperator& a) {
        return HermitianOperator(s * a.m_);
    }

protected:
    void symmetrize() { m_ = (0.5 * (m_ + m_.adjoint())).eval(); }

    Matrix m_;
    std::shared_ptr<detail::SpectrumCache> cache_;
};

/// Positive semi-definite operator; eigenvalues >= -eps_supp.
class PSDOperator : public HermitianOperator {
public:
    explicit PSDOperator(Matrix m, const NumericPolicy& policy = {})
        : HermitianOperator(std::move(m), policy) {
        check(policy);
    }
    explicit PSDOperator(const HermitianOperator& h, const NumericPolicy& policy = {})
        : HermitianOperator(h) {
        check(policy);
    }

    static PSDOperator identity(Index d) { return PSDOperator(Matrix::Identity(d, d)); }

    double eps_supp() const { return eps_; }

    Index support_rank() const {
        const RealVector& v = spectrum().values;
        return (v.array() > eps_).count();
    }
    bool full_rank() const { return support_rank() == dim(); }

    /// Columns span the support (eigenvalues > eps_supp).
    Matrix support_basis() const {
        const Spectrum& s = spectrum();
        const Index r = support_rank();
        return s.vectors.rightCols(r);
    }
    Matrix support_projector() const {
        const Matrix b = support_basis();
        return b * b.adjoint();
    }

private:
    void check(const NumericPolicy& policy) {
        eps_ = policy.support * std::max(1.0, max_eigenvalue());
        if (min_eigenvalue() < -eps_) {
            throw NotPositive("PSDOperator: eigenvalue " + std::to_string(min_eigenvalue()));
        }
    }

    double eps_ = 0.0;
};

/// Unit-trace PSD operator; the trace is renormalized on construction.
class DensityOperator : public PSDOperator {
public:
    explicit DensityOperator(Matrix m, const NumericPolicy& policy = {})
        : PSDOperator(normalized(std::move(m)), policy) {}
    explicit DensityOperator(const PSDOperator& p, const NumericPolicy& policy = {})
        : DensityOperator(p.matrix(), policy) {}

    static DensityOperator maximally_mixed(Index d) {
        return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
    }
    static DensityOperator pure(const CVector& psi) {
        return DensityOperator(Matrix(psi * psi.adjoint()));
    }

private:
    static Matrix normalized(Matrix m) {
        const double tr = m.trace().real();
        if (!(tr > 0.0) || !std::isfinite(tr)) throw ZeroTrace("DensityOperator: non-positive trace");
        m /= tr;
        return m;
    }
};

/// Hermitian operator that is -inf on a subspace: the value of log(a) for
/// singular a, and of sums/adjoint images of such logarithms. `finite`
/// lives on the span of `basis` (orthonormal columns) and is zero on the
/// complement, where the operator is -inf.
class ExtendedHermitian {
public:
    // NOLINTNEXTLINE(google-explicit-constructor): every Hermitian is an extended one.
    ExtendedHermitian(const HermitianOperator& h)
        : finite_(h.matrix()), basis_(Matrix::Identity(h.dim(), h.dim())), full_(true) {}

    ExtendedHermitian(Matrix finite, Matrix basis)
        : finite_(std::move(finite)), basis_(std::move(basis)), full_(basis_.cols() == basis_.rows()) {
        if (finite_.rows() != basis_.rows()) throw DimensionMismatch("ExtendedHermitian: basis rows");
        if (!full_) finite_ = detail::compress(finite_, basis_);
        finite_ = (0.5 * (finite_ + finite_.adjoint())).eval();
    }

    Index dim() const { return finite_.rows(); }
    bool has_kernel() const { return !full_; }
    Index finite_rank() const { return basis_.cols(); }
    const Matrix& finite_part() const { return finite_; }
    const Matrix& finite_basis() const { return basis_; }
    Matrix kernel_projector() const {
        return Matrix::Identity(dim(), dim()) - basis_ * basis_.adjoint();
    }
    /// The finite block expressed in the finite basis.
    Matrix compressed() const { return basis_.adjoint() * finite_ * basis_; }

    /// Eigenvalues of the finite block (ascending); empty if everything is -inf.
    RealVector finite_eigenvalues() const {
        if (finite_rank() == 0) return RealVector();
        return detail::eigh(compressed()).values;
    }

    friend ExtendedHermitian operator*(double s, const ExtendedHermitian& x) {
        if (!(s > 0.0)) throw InvalidExponent("ExtendedHermitian: scale must be positive");
        return ExtendedHermitian(s * x.finite_, x.basis_, Trusted{});
    }

    friend ExtendedHermitian operator+(const ExtendedHermitian& a, const ExtendedHermitian& b) {
        require_same_dim(a.dim(), b.dim(), "ExtendedHermitian::operator+");
        if (!a.has_kernel() && !b.has_kernel()) {
            return ExtendedHermitian(a.finite_ + b.finite_, a.basis_, Trusted{});
        }
        const Matrix basis = detail::small_eigenspace(a.kernel_projector() + b.kernel_projector(), 1e-9);
        return ExtendedHermitian(a.finite_ + b.finite_, basis);
    }

    /// a - b where b must be finite wherever a is finite (support inclusion).
    friend ExtendedHermitian operator-(const ExtendedHermitian& a, const ExtendedHermitian& b) {
        require_same_dim(a.dim(), b.dim(), "ExtendedHermitian::operator-");
        if (b.has_kernel()) {
            const Matrix leak = b.kernel_projector() * a.basis_;
            if (detail::max_abs(leak) > 1e-8) {
                throw InvalidDatum("ExtendedHermitian: subtracting -inf on a finite subspace");
            }
        }
        return ExtendedHermitian(a.finite_ - b.finite_, a.basis_);
    }

private:
    struct Trusted {};
    ExtendedHermitian(Matrix finite, Matrix basis, Trusted)
        : finite_(std::move(finite)), basis_(std::move(basis)), full_(basis_.cols() == basis_.rows()) {}

    Matrix finite_;
    Matrix basis_;
    bool full_;
};

/// Sum of extended operators; the kernel is the span of all kernels.
inline ExtendedHermitian sum(std::span<const ExtendedHermitian> terms) {
    if (terms.empty()) throw DimensionMismatch("sum: no terms");
    ExtendedHermitian acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
    return acc;
}

/// Support-projected natural logarithm; -inf on the kernel.
inline ExtendedHermitian matrix_log(const PSDOperator& a) {
    const Index r = a.support_rank();
    if (r == 0) throw ZeroOperator("matrix_log: zero operator");
    const Spectrum& s = a.spectrum();
    const Matrix basis = s.vectors.rightCols(r);
    const RealVector logs = s.values.tail(r).array().log();
    Matrix finite = basis * logs.cast<Complex>().asDiagonal() * basis.adjoint();
    return ExtendedHermitian(std::move(finite), basis);
}

inline PSDOperator matrix_exp(const HermitianOperator& h) {
    return PSDOperator(h.map_spectrum([](double x) { return std::exp(x); }));
}

/// exp of an extended operator: zero on the -inf subspace.
inline PSDOperator matrix_exp(const ExtendedHermitian& x) {
    const Index d = x.dim();
    if (x.finite_rank() == 0) return PSDOperator(Matrix::Zero(d, d));
    const Spectrum s = detail::eigh(x.compressed());
    const Matrix v = x.finite_basis() * s.vectors;
    const RealVector e = s.values.array().exp();
    return PSDOperator(Matrix(v * e.cast<Complex>().asDiagonal() * v.adjoint()));
}

/// log tr exp(x), evaluated stably; -inf when x is -inf everywhere.
inline double log_trace_exp(const ExtendedHermitian& x) {
    if (x.finite_rank() == 0) return -kInf;
    const RealVector ev = x.finite_eigenvalues();
    const double top = ev.maxCoeff();
    return top + std::log((ev.array() - top).exp().sum());
}

inline double trace_exp(const ExtendedHermitian& x) { return std::exp(log_trace_exp(x)); }

/// tr exp(sum_i h_i), kernels handled per the support conventions.
inline double trace_exp_sum(std::span<const ExtendedHermitian> hs) { return trace_exp(sum(hs)); }

inline double trace_exp_sum(const std::vector<ExtendedHermitian>& hs) {
    return trace_exp_sum(std::span<const ExtendedHermitian>(hs));
}

/// a^p on the support of a (p may be negative).
inline PSDOperator psd_power(const PSDOperator& a, double p) {
    const Index r = a.support_rank();
    const Spectrum& s = a.spectrum();
    const Matrix basis = s.vectors.rightCols(r);
    const RealVector vals = s.values.tail(r).array().pow(p);
    return PSDOperator(Matrix(basis * vals.cast<Complex>().asDiagonal() * basis.adjoint()));
}

inline double trace_norm(const HermitianOperator& h) { return h.spectrum().values.cwiseAbs().sum(); }

/// Schatten p-(anti)norm; p = kInf gives the largest eigenvalue.
inline double schatten(const PSDOperator& a, double p) {
    if (!(p > 0.0)) throw InvalidExponent("schatten: p must be positive");
    const RealVector v = a.spectrum().values.cwiseMax(0.0);
    if (std::isinf(p)) return v.maxCoeff();
    return std::pow(v.array().pow(p).sum(), 1.0 / p);
}

/// log |||w|||_{sigma,p} = (1/p) log tr exp(p log w + log sigma).
inline double log_weighted_antinorm(const PSDOperator& w, const ExtendedHermitian& log_sigma, double p) {
    if (!(p > 0.0)) throw InvalidExponent("weighted_antinorm: p must be positive");
    require_same_dim(w.dim(), log_sigma.dim(), "weighted_antinorm");
    if (w.support_rank() == 0) return -kInf;
    return log_trace_exp(p * matrix_log(w) + log_sigma) / p;
}

/// |||w|||_{sigma,p} = (tr exp(p log w + log sigma))^{1/p}
///                   = || exp(log w + (1/p) log sigma) ||_p.
/// An anti-norm for p in (0,1]; for p > 1 it is evaluated as is.
inline double weighted_antinorm(const PSDOperator& w, const PSDOperator& sigma, double p) {
    return std::exp(log_weighted_antinorm(w, matrix_log(sigma), p));
}

namespace detail {

template <class F>
double adaptive_simpson(F f, double a, double b, double fa, double fm, double fb, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

/// Adaptive Simpson quadrature of f over [a, b] to absolute tolerance tol.
template <class F>
double integrate(F f, double a, double b, double tol) {
    // Split once so symmetric integrands cannot fool the first error estimate.
    auto piece = [&](double lo, double hi) {
        const double flo = f(lo);
        const double fhi = f(hi);
        const double fmid = f(0.5 * (lo + hi));
        const double whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        return detail::adaptive_simpson(f, lo, hi, flo, fmid, fhi, whole, 0.5 * tol, 48);
    };
    const double m = a + 0.4 * (b - a);
    return piece(a, m) + piece(m, b);
}

/// Lieb's triple-matrix bound
///   int_0^inf tr a (c^{-1}+t)^{-1} b (c^{-1}+t)^{-1} dt,
/// which dominates tr exp(log a + log b + log c). Integrated over
/// s in [0,1] with t = s/(1-s); the Jacobian is absorbed into the
/// resolvents so the integrand tends to tr(ab) as s -> 1.
inline double lieb_triple_integral(const PSDOperator& a, const PSDOperator& b, const PSDOperator& c,
                                   const NumericPolicy& policy = {}) {
    require_same_dim(a.dim(), b.dim(), "lieb_triple_integral");
    require_same_dim(a.dim(), c.dim(), "lieb_triple_integral");
    if (c.min_eigenvalue() <= c.eps_supp()) throw SingularC("lieb_triple_integral: c is singular");
    const Spectrum& sc = c.spectrum();
    const Matrix ap = sc.vectors.adjoint() * a.matrix() * sc.vectors;
    const Matrix bp = sc.vectors.adjoint() * b.matrix() * sc.vectors;
    const RealVector& cv = sc.values;
    const Index d = a.dim();
    RealVector r(d);
    auto integrand = [&](double s) {
        for (Index i = 0; i < d; ++i) r(i) = cv(i) / ((1.0 - s) + s * cv(i));
        double acc = 0.0;
        for (Index i = 0; i < d; ++i) {
            for (Index j = 0; j < d; ++j) acc += (ap(i, j) * bp(j, i)).real() * r(i) * r(j);
        }
        return acc;
    };
    return integrate(integrand, 0.0, 1.0, policy.quadrature);
}

using LinearMap = std::function<Matrix(const Matrix&)>;

struct JensenResult {
    bool holds;
    double min_eigenvalue;
};

/// Checks log(m(x)) - m(log x) >= 0 for a unital positive map m.
inline JensenResult operator_jensen_check(const LinearMap& m_adj, const PSDOperator& x,
                                          const NumericPolicy& policy = {}) {
    const Index d = x.dim();
    const Matrix id = Matrix::Identity(d, d);
    const Matrix mid = m_adj(id);
    if (mid.rows() != mid.cols()) throw DimensionMismatch("operator_jensen_check: map output not square");
    if (detail::max_abs(mid - Matrix::Identity(mid.rows(), mid.cols())) > 1e-10) {
        throw NotUnital("operator_jensen_check: map is not unital");
    }
    if (x.support_rank() < d) throw NotPositive("operator_jensen_check: x must be positive definite");
    const PSDOperator mx(m_adj(x.matrix()));
    const ExtendedHermitian log_mx = matrix_log(mx);
    const Matrix m_logx = m_adj(matrix_log(x).finite_part());
    const HermitianOperator diff(Matrix(log_mx.finite_part() - m_logx));
    const double lo = diff.min_eigenvalue();
    return {lo >= -policy.psd_slack, lo};
}

}  // namespace qbl

#endif  // QBL_OPERATOR_HPP
