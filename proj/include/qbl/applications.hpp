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
 * Worked instances of BL duality: Shearer / Loomis-Whitney, conditional
 * Shearer, Maassen-Uffink and six-state uncertainty relations, minimum
 * output entropy, data processing and its strong version, and
 * super-additivity of relative entropy.
 *
 * Uncertainty relations report entropies and gaps in bits; everything
 * else is in nats.
 */

#ifndef QBL_APPLICATIONS_HPP
#define QBL_APPLICATIONS_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qbl/bl.hpp"

namespace qbl {

namespace detail {

inline Index product_of(const std::vector<Index>& dims) {
    Index p = 1;
    for (Index d : dims) p *= d;
    return p;
}

inline PSDOperator identity_on(Index d) { return PSDOperator(Matrix(Matrix::Identity(d, d))); }

inline void check_subsets(std::size_t m, const std::vector<std::vector<Index>>& subsets, int p, bool exact) {
    if (p < 1) throw CoverViolation("cover multiplicity p must be >= 1");
    std::vector<int> count(m, 0);
    for (const auto& s : subsets) {
        std::set<Index> seen;
        for (Index i : s) {
            if (i < 0 || i >= static_cast<Index>(m)) throw BadPartition("subset index out of range");
            if (!seen.insert(i).second) throw BadPartition("repeated index inside a subset");
            ++count[static_cast<std::size_t>(i)];
        }
    }
    for (std::size_t s = 0; s < m; ++s) {
        if (count[s] < p || (exact && count[s] != p)) {
            throw CoverViolation("subsystem " + std::to_string(s) + " is covered " + std::to_string(count[s]) +
                                 " times, need " + (exact ? "exactly " : "at least ") + std::to_string(p));
        }
    }
}

}  // namespace detail

// ---------------------------------------------------------------- Shearer

/// Partial traces onto S_k with q_k = 1/p, sigma = 1, sigma_k = 1, C = 0.
/// Subsets use 0-based subsystem indices.
inline BLDatum shearer_datum(const std::vector<Index>& dims, const std::vector<std::vector<Index>>& subsets, int p) {
    detail::check_subsets(dims.size(), subsets, p, false);
    std::vector<Channel> channels;
    std::vector<PSDOperator> sigmas;
    for (const auto& s : subsets) {
        channels.push_back(partial_trace(dims, s));
        sigmas.push_back(detail::identity_on(channels.back().dim_out()));
    }
    return BLDatum{std::vector<double>(subsets.size(), 1.0 / p), std::move(channels),
                   detail::identity_on(detail::product_of(dims)), std::move(sigmas), 0.0, "shearer", "nats"};
}

struct ConditionalShearerReport {
    /// H(A_[m] | B)
    double lhs = 0.0;
    /// (1/p) sum_k H(A_{S_k} | B)
    double rhs = 0.0;
    double gap = 0.0;
    bool holds = true;
    std::string units = "nats";
};

/// rhs - lhs for H(A_[m]|B) <= (1/p) sum_k H(A_{S_k}|B), without any cover
/// requirement. rho lives on A_1 ... A_m B with B last.
inline ConditionalShearerReport conditional_shearer_gap(const DensityOperator& rho, const std::vector<Index>& dims_a,
                                                        Index dim_b, const std::vector<std::vector<Index>>& subsets,
                                                        int p, const NumericPolicy& policy = {}) {
    if (p < 1) throw CoverViolation("cover multiplicity p must be >= 1");
    std::vector<Index> dims = dims_a;
    dims.push_back(dim_b);
    require_same_dim(rho.dim(), detail::product_of(dims), "conditional_shearer");
    const Index b = static_cast<Index>(dims_a.size());
    const double h_b = von_neumann(DensityOperator(partial_trace(dims, {b}).apply(rho.matrix())));
    auto cond = [&](std::vector<Index> keep) {
        keep.push_back(b);
        return von_neumann(DensityOperator(partial_trace(dims, keep).apply(rho.matrix()))) - h_b;
    };
    ConditionalShearerReport rep;
    std::vector<Index> all(dims_a.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<Index>(i);
    rep.lhs = cond(all);
    for (const auto& s : subsets) rep.rhs += cond(s);
    rep.rhs /= p;
    rep.gap = rep.rhs - rep.lhs;
    rep.holds = rep.gap >= -policy.membership;
    return rep;
}

/// Same check with the exact-cover requirement enforced (CoverViolation otherwise).
inline ConditionalShearerReport conditional_shearer_check(const DensityOperator& rho, const std::vector<Index>& dims_a,
                                                          Index dim_b, const std::vector<std::vector<Index>>& subsets,
                                                          int p, const NumericPolicy& policy = {}) {
    detail::check_subsets(dims_a.size(), subsets, p, true);
    return conditional_shearer_gap(rho, dims_a, dim_b, subsets, p, policy);
}

/// |Phi+> on A1 B, |0> on A2, ordered A1 A2 B.
inline DensityOperator bell_with_pure_ancilla() {
    CVector v = CVector::Zero(8);
    const double r = 1.0 / std::sqrt(2.0);
    v(0) = r;  // |0>_A1 |0>_A2 |0>_B
    v(5) = r;  // |1>_A1 |0>_A2 |1>_B
    return DensityOperator::pure(v);
}

// ---------------------------------------------------------- uncertainty

/// c(X,Z) = max_{x,z} |<x|z>|^2 for bases given as matrix columns.
inline double maassen_uffink_constant(const Matrix& basis_x, const Matrix& basis_z, const NumericPolicy& policy = {}) {
    measurement_channel(basis_x, "check", policy);
    measurement_channel(basis_z, "check", policy);
    return (basis_x.adjoint() * basis_z).cwiseAbs2().maxCoeff();
}

/// Two measurements, q = (1,1), sigma = sigma_k = 1, C = log c(X,Z).
/// The uncertainty bound H(X) + H(Z) >= -C + H(A) is the entropic form.
inline BLDatum mu_datum(const Matrix& basis_x, const Matrix& basis_z) {
    const double c = maassen_uffink_constant(basis_x, basis_z);
    const Index d = basis_x.rows();
    return BLDatum{{1.0, 1.0},
                   {measurement_channel(basis_x, "M_X"), measurement_channel(basis_z, "M_Z")},
                   detail::identity_on(d),
                   {detail::identity_on(d), detail::identity_on(d)},
                   std::log(c),
                   "maassen-uffink",
                   "bits"};
}

struct UncertaintyReport {
    std::vector<double> outcome_entropies;
    double h_a = 0.0;
    double bound = 0.0;
    /// sum of outcome entropies - bound
    double gap = 0.0;
    std::string units = "bits";
};

/// H(X) + H(Z) - H(A) + log c in bits.
inline UncertaintyReport mu_entropic_gap(const Matrix& basis_x, const Matrix& basis_z, const DensityOperator& rho) {
    const double c = maassen_uffink_constant(basis_x, basis_z);
    UncertaintyReport rep;
    for (const Matrix* b : {&basis_x, &basis_z}) {
        rep.outcome_entropies.push_back(to_bits(von_neumann(measurement_channel(*b).apply(rho))));
    }
    rep.h_a = to_bits(von_neumann(rho));
    rep.bound = -std::log2(c) + rep.h_a;
    rep.gap = rep.outcome_entropies[0] + rep.outcome_entropies[1] - rep.bound;
    return rep;
}

struct MuAnalyticReport {
    double c = 0.0;
    /// tr exp(M_X^dagger(log w1) + M_Z^dagger(log w2))
    double lhs = 0.0;
    /// tr exp(log M_X(w1) + log M_Z(w2)), after operator Jensen
    double jensen_bound = 0.0;
    /// tr M_X(w1) M_Z(w2), after Golden-Thompson
    double golden_thompson_bound = 0.0;
    double gap = 0.0;
    bool chain_holds = true;
    /// Which chain steps are tight to 1e-9: Jensen, Golden-Thompson, overlap.
    std::vector<bool> saturated;
};

/// c(X,Z) - tr exp(...) for density operators w1, w2, with the Jensen and
/// Golden-Thompson chain evaluated step by step.
inline MuAnalyticReport mu_analytic_check(const Matrix& basis_x, const Matrix& basis_z, const DensityOperator& w1,
                                          const DensityOperator& w2, const NumericPolicy& policy = {}) {
    const Channel mx = measurement_channel(basis_x, "M_X");
    const Channel mz = measurement_channel(basis_z, "M_Z");
    MuAnalyticReport rep;
    rep.c = maassen_uffink_constant(basis_x, basis_z);
    const ExtendedHermitian l0 = mx.apply_adjoint(matrix_log(w1)) + mz.apply_adjoint(matrix_log(w2));
    rep.lhs = trace_exp(l0);
    const PSDOperator a = mx.apply(w1);
    const PSDOperator b = mz.apply(w2);
    rep.jensen_bound = trace_exp(matrix_log(a) + matrix_log(b));
    rep.golden_thompson_bound = (a.matrix() * b.matrix()).trace().real();
    rep.gap = rep.c - rep.lhs;
    const double s = policy.psd_slack;
    rep.chain_holds = rep.lhs <= rep.jensen_bound + s && rep.jensen_bound <= rep.golden_thompson_bound + s &&
                      rep.golden_thompson_bound <= rep.c + s;
    rep.saturated = {std::abs(rep.jensen_bound - rep.lhs) <= 1e-9,
                     std::abs(rep.golden_thompson_bound - rep.jensen_bound) <= 1e-9,
                     std::abs(rep.c - rep.golden_thompson_bound) <= 1e-9};
    return rep;
}

/// Pauli X, Y, Z measurements on a qubit, C = log(1/4).
inline BLDatum six_state_datum() {
    const PSDOperator one = detail::identity_on(2);
    return BLDatum{{1.0, 1.0, 1.0},
                   {measurement_channel(pauli_basis('X'), "M_X"), measurement_channel(pauli_basis('Y'), "M_Y"),
                    measurement_channel(pauli_basis('Z'), "M_Z")},
                   one,
                   {one, one, one},
                   std::log(0.25),
                   "six-state",
                   "bits"};
}

struct SixStateReport {
    UncertaintyReport entropic;
    /// sum - (3/2 + (3/2) H(A)), the bound from pairwise Maassen-Uffink.
    double weaker_gap = 0.0;
};

/// H(X) + H(Y) + H(Z) - 2 - H(A) in bits.
inline SixStateReport six_state_check(const DensityOperator& rho) {
    require_same_dim(rho.dim(), 2, "six_state_check");
    SixStateReport rep;
    double total = 0.0;
    for (char w : {'X', 'Y', 'Z'}) {
        const double h = to_bits(von_neumann(measurement_channel(pauli_basis(w)).apply(rho)));
        rep.entropic.outcome_entropies.push_back(h);
        total += h;
    }
    rep.entropic.h_a = to_bits(von_neumann(rho));
    rep.entropic.bound = 2.0 + rep.entropic.h_a;
    rep.entropic.gap = total - rep.entropic.bound;
    rep.weaker_gap = total - (1.5 + 1.5 * rep.entropic.h_a);
    return rep;
}

struct SixStateAnalyticReport {
    /// tr exp(sum_k M_k^dagger(log w_k))
    double lhs = 0.0;
    /// tr exp(log M_X(w1) + log M_Y(w2) + log M_Z(w3))
    double jensen_bound = 0.0;
    /// int_0^inf tr M_X(w1) R_t M_Y(w2) R_t dt, R_t = (M_Z(w3)^{-1} + t)^{-1}
    double lieb_bound = 0.0;
    /// max_{x,y} int_0^inf |<x|R_t|y>|^2 dt
    double overlap_bound = 0.0;
    double gap = 0.0;
    bool chain_holds = true;
};

inline SixStateAnalyticReport six_state_analytic_check(const DensityOperator& w1, const DensityOperator& w2,
                                                       const DensityOperator& w3, const NumericPolicy& policy = {}) {
    const Channel mx = measurement_channel(pauli_basis('X'));
    const Channel my = measurement_channel(pauli_basis('Y'));
    const Channel mz = measurement_channel(pauli_basis('Z'));
    SixStateAnalyticReport rep;
    const std::vector<ExtendedHermitian> pulled = {mx.apply_adjoint(matrix_log(w1)), my.apply_adjoint(matrix_log(w2)),
                                                   mz.apply_adjoint(matrix_log(w3))};
    rep.lhs = trace_exp_sum(pulled);
    const PSDOperator a = mx.apply(w1);
    const PSDOperator b = my.apply(w2);
    const PSDOperator c = mz.apply(w3);
    rep.jensen_bound = trace_exp_sum(std::vector<ExtendedHermitian>{matrix_log(a), matrix_log(b), matrix_log(c)});
    rep.lieb_bound = lieb_triple_integral(a, b, c, policy);
    const Matrix bx = pauli_basis('X');
    const Matrix by = pauli_basis('Y');
    const Matrix bz = pauli_basis('Z');
    const Complex w[2] = {c.matrix()(0, 0), c.matrix()(1, 1)};
    for (Index x = 0; x < 2; ++x) {
        for (Index y = 0; y < 2; ++y) {
            Complex coef[2];
            for (Index z = 0; z < 2; ++z) coef[z] = bx.col(x).dot(bz.col(z)) * bz.col(z).dot(by.col(y));
            auto f = [&](double s) {
                Complex acc = 0.0;
                for (Index z = 0; z < 2; ++z) acc += coef[z] * w[z].real() / ((1.0 - s) + w[z].real() * s);
                return std::norm(acc);
            };
            rep.overlap_bound = std::max(rep.overlap_bound, integrate(f, 0.0, 1.0, policy.quadrature));
        }
    }
    rep.gap = 0.25 - rep.lhs;
    const double s = policy.psd_slack;
    const double q = 10.0 * policy.quadrature;
    rep.chain_holds = rep.lhs <= rep.jensen_bound + s && rep.jensen_bound <= rep.lieb_bound + q &&
                      rep.lieb_bound <= rep.overlap_bound + q && rep.overlap_bound <= 0.25 + q;
    return rep;
}

// ---------------------------------------------------- minimum output entropy

/// Identity and E with q = (1,1), sigma = 1, sigma_k = 1: the optimal
/// constant is -H_min(E).
inline BLDatum min_output_datum(const Channel& ch) {
    const Index d = ch.dim_in();
    return BLDatum{{1.0, 1.0},
                   {identity_channel(d), ch},
                   detail::identity_on(d),
                   {detail::identity_on(d), detail::identity_on(ch.dim_out())},
                   std::nullopt,
                   "min-output(" + ch.label() + ")",
                   "nats"};
}

struct MinOutputReport {
    /// min over pure psi of H(E(psi psi^dagger))
    double direct = kInf;
    /// -max over omega of lambda_max(E^dagger(log omega))
    double dual = kInf;
    bool agree = false;
    CVector witness_state;
    Matrix witness_omega;
};

namespace detail {

inline CVector unpack_vector(const RealVector& x) {
    CVector v(x.size() / 2);
    for (Index i = 0; i < v.size(); ++i) v(i) = Complex(x(2 * i), x(2 * i + 1));
    return v;
}

inline RealVector pack_vector(const CVector& v) {
    RealVector x(2 * v.size());
    for (Index i = 0; i < v.size(); ++i) {
        x(2 * i) = v(i).real();
        x(2 * i + 1) = v(i).imag();
    }
    return x;
}

/// Top eigenpair of the finite part of an extended operator; -inf when
/// the whole space is in the kernel.
inline std::pair<double, CVector> top_eigenpair(const ExtendedHermitian& h) {
    if (h.finite_basis().cols() == 0) return {-kInf, CVector::Unit(h.dim(), 0)};
    const Spectrum s = eigh(h.compressed());
    const Index last = s.values.size() - 1;
    return {s.values(last), h.finite_basis() * s.vectors.col(last)};
}

}  // namespace detail

/// H_min(E) by (a) direct minimization over pure inputs and (b) the dual
/// lambda_max formula, optimized by alternating omega = E(psi psi^dagger)
/// with psi = top eigenvector of E^dagger(log omega), then polished over
/// omega = X X^dagger / tr. The sup in (b) may sit on the boundary
/// (e.g. pure outputs), where log omega is -inf on a subspace.
inline MinOutputReport min_output_entropy(const Channel& ch, const OptimizerBudget& budget = {}, double agree_tol = 1e-5) {
    const Index d = ch.dim_in();
    const Index dout = ch.dim_out();
    auto direct_f = [&](const RealVector& x) {
        const CVector v = detail::unpack_vector(x);
        if (v.norm() < 1e-12) return -kInf;
        return -von_neumann(ch.apply(DensityOperator::pure(v)));
    };
    auto dual_of = [&](const PSDOperator& omega) {
        return detail::top_eigenpair(ch.apply_adjoint(matrix_log(omega))).first;
    };
    auto dual_f = [&](const RealVector& x) {
        try {
            return dual_of(param::state_from(x, dout));
        } catch (const Error&) {
            return -kInf;
        }
    };
    struct Run {
        double direct = -kInf;
        double dual = -kInf;
        CVector psi;
        Matrix omega;
    };
    auto job = [&](int r) {
        Rng rng(budget.seed + static_cast<std::uint64_t>(r));
        Run run;
        const CVector start = haar_vector(d, rng);
        AscentOptions opt{budget.max_iterations, budget.tolerance, 1e-6};
        const AscentResult a = maximize(direct_f, detail::pack_vector(start), opt);
        run.direct = a.value;
        run.psi = detail::unpack_vector(a.x).normalized();

        CVector psi = haar_vector(d, rng);
        double best = -kInf;
        Matrix best_omega;
        // A rank-deficient E(psi psi^dagger) pins psi to the finite part of
        // E^dagger(log omega), so iterate on (1-eps) E(psi psi^dagger) + eps 1/d
        // with eps shrinking towards the boundary.
        const Matrix flat = Matrix::Identity(dout, dout) / static_cast<double>(dout);
        for (double eps = 1e-2; eps >= 1e-10; eps *= 1e-2) {
            double level = -kInf;
            for (int it = 0; it < budget.max_iterations; ++it) {
                const PSDOperator omega(Matrix((1.0 - eps) * ch.apply(Matrix(psi * psi.adjoint())) + eps * flat));
                const auto [lam, vec] = detail::top_eigenpair(ch.apply_adjoint(matrix_log(omega)));
                const bool done = lam <= level + budget.tolerance * (1.0 + std::abs(lam));
                level = std::max(level, lam);
                if (lam > best) {
                    best = lam;
                    best_omega = omega.matrix() / omega.trace();
                }
                psi = vec.normalized();
                if (done) break;
            }
        }
        const PSDOperator w(best_omega);
        if (w.full_rank()) {
            const AscentResult b = maximize(dual_f, param::coordinates_of(w), opt);
            if (b.value > best) {
                best = b.value;
                best_omega = param::state_from(b.x, dout).matrix();
            }
        }
        run.dual = best;
        run.omega = best_omega;
        return run;
    };
    const auto runs = run_restarts(std::max(1, budget.restarts), budget.threads, job);
    MinOutputReport rep;
    double best_direct = -kInf;
    double best_dual = -kInf;
    for (const Run& r : runs) {
        if (r.direct > best_direct) {
            best_direct = r.direct;
            rep.witness_state = r.psi;
        }
        if (r.dual > best_dual) {
            best_dual = r.dual;
            rep.witness_omega = r.omega;
        }
    }
    if (!std::isfinite(best_direct) || !std::isfinite(best_dual)) throw Diverged("min_output_entropy: no finite estimate");
    rep.direct = -best_direct;
    rep.dual = -best_dual;
    rep.agree = std::abs(rep.direct - rep.dual) <= agree_tol;
    return rep;
}

// ----------------------------------------------------------- data processing

struct DpiAnalyticReport {
    /// tr exp(log sigma + E^dagger(log omega))
    double lhs = 0.0;
    /// tr exp(log omega + log E(sigma))
    double rhs = 0.0;
    /// tr exp(log sigma + log E^dagger(omega)), after operator Jensen
    double jensen_bound = 0.0;
    /// tr omega E(sigma), the weaker chain's end point
    double weaker_rhs = 0.0;
    double gap = 0.0;
    /// rhs < weaker_rhs: the analytic DPI is strictly stronger here.
    bool strictly_stronger = false;
    bool holds = true;
};

inline DpiAnalyticReport dpi_analytic_check(const PSDOperator& sigma, const Channel& ch, const PSDOperator& omega,
                                            const NumericPolicy& policy = {}) {
    require_same_dim(sigma.dim(), ch.dim_in(), "dpi_analytic_check");
    require_same_dim(omega.dim(), ch.dim_out(), "dpi_analytic_check");
    DpiAnalyticReport rep;
    const ExtendedHermitian log_sigma = matrix_log(sigma);
    const PSDOperator e_sigma = ch.apply(sigma);
    rep.lhs = trace_exp(log_sigma + ch.apply_adjoint(matrix_log(omega)));
    rep.rhs = trace_exp(matrix_log(omega) + matrix_log(e_sigma));
    const PSDOperator pulled(ch.apply_adjoint(omega.matrix()));
    rep.jensen_bound = pulled.support_rank() ? trace_exp(log_sigma + matrix_log(pulled)) : 0.0;
    rep.weaker_rhs = trace_product(omega.matrix(), e_sigma.matrix());
    rep.gap = rep.rhs - rep.lhs;
    rep.strictly_stronger = rep.rhs < rep.weaker_rhs - 1e-9;
    rep.holds = rep.gap >= -policy.psd_slack;
    return rep;
}

// ------------------------------------------------ contraction coefficients

struct ContractionReport {
    double eta = 0.0;
    /// Limit of the ratio along sigma + eps Delta, eps -> 0 (BKM metric).
    double perturbative = 0.0;
    /// Best ratio found at a finite distance from sigma.
    double ascent = 0.0;
    Matrix witness;
    /// sigma or E(sigma) is singular; the ratio is ill-posed near the boundary.
    bool boundary_flag = false;
};

namespace detail {

/// (log a - log b)/(a - b), continuous at a = b.
inline double log_divided_difference(double a, double b) {
    if (std::abs(a - b) <= 1e-12 * std::max(a, b)) return 2.0 / (a + b);
    return (std::log(a) - std::log(b)) / (a - b);
}

/// Gram matrix of the BKM (Kubo-Mori) form at tau over the given
/// Hermitian directions: the Hessian of D(. || tau) at tau.
inline RealMatrix bkm_gram(const PSDOperator& tau, const std::vector<Matrix>& directions) {
    const Spectrum& s = tau.spectrum();
    const Index d = tau.dim();
    RealMatrix k(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) k(i, j) = log_divided_difference(s.values(i), s.values(j));
    }
    std::vector<Matrix> rotated;
    for (const Matrix& m : directions) rotated.push_back(s.vectors.adjoint() * m * s.vectors);
    const Index n = static_cast<Index>(directions.size());
    RealMatrix g(n, n);
    for (Index a = 0; a < n; ++a) {
        for (Index b = a; b < n; ++b) {
            double acc = 0.0;
            for (Index i = 0; i < d; ++i) {
                for (Index j = 0; j < d; ++j) acc += (std::conj(rotated[a](i, j)) * rotated[b](i, j)).real() * k(i, j);
            }
            g(a, b) = g(b, a) = acc;
        }
    }
    return g;
}

/// Orthonormal basis of traceless Hermitian d x d matrices.
inline std::vector<Matrix> traceless_hermitian_basis(Index d) {
    std::vector<Matrix> out;
    const double r = 1.0 / std::sqrt(2.0);
    for (Index i = 0; i < d; ++i) {
        for (Index j = i + 1; j < d; ++j) {
            Matrix a = Matrix::Zero(d, d);
            a(i, j) = a(j, i) = r;
            out.push_back(a);
            Matrix b = Matrix::Zero(d, d);
            b(i, j) = Complex(0, -r);
            b(j, i) = Complex(0, r);
            out.push_back(b);
        }
    }
    for (Index l = 1; l < d; ++l) {
        Matrix h = Matrix::Zero(d, d);
        const double norm = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
        for (Index i = 0; i < l; ++i) h(i, i) = norm;
        h(l, l) = -static_cast<double>(l) * norm;
        out.push_back(h);
    }
    return out;
}

}  // namespace detail

/// eta(sigma, E) = sup_{rho != sigma} D(E rho || E sigma) / D(rho || sigma),
/// as the max of the exact perturbative limit (a generalized eigenvalue
/// problem in the BKM metric) and a multi-start ascent over rho = X X^dagger/tr
/// restricted to D(rho||sigma) >= 1e-6.
inline ContractionReport contraction_coefficient(const Channel& ch, const DensityOperator& sigma,
                                                 const OptimizerBudget& budget = {}) {
    require_same_dim(sigma.dim(), ch.dim_in(), "contraction_coefficient");
    const Index d = sigma.dim();
    ContractionReport rep;
    const PSDOperator e_sigma = ch.apply(sigma);
    rep.boundary_flag = !sigma.full_rank() || !e_sigma.full_rank();
    if (d == 1) return rep;

    Matrix best_direction;
    if (!rep.boundary_flag) {
        const std::vector<Matrix> basis = detail::traceless_hermitian_basis(d);
        std::vector<Matrix> images;
        for (const Matrix& m : basis) images.push_back(ch.apply(m));
        const RealMatrix in = detail::bkm_gram(sigma, basis);
        const RealMatrix out = detail::bkm_gram(e_sigma, images);
        Eigen::GeneralizedSelfAdjointEigenSolver<RealMatrix> ges(out, in);
        if (ges.info() != Eigen::Success) throw Diverged("contraction_coefficient: generalized eigensolver failed");
        const Index top = ges.eigenvalues().size() - 1;
        rep.perturbative = std::max(0.0, ges.eigenvalues()(top));
        best_direction = Matrix::Zero(d, d);
        for (std::size_t a = 0; a < basis.size(); ++a) best_direction += ges.eigenvectors()(static_cast<Index>(a), top) * basis[a];
    }

    const ExtendedHermitian log_sigma = matrix_log(sigma);
    const ExtendedHermitian log_e_sigma = matrix_log(e_sigma);
    auto ratio_of = [&](const DensityOperator& rho) {
        const double den = relative_entropy(rho, sigma, log_sigma);
        if (!(den >= 1e-6) || std::isinf(den)) return -kInf;
        return relative_entropy(ch.apply(rho), e_sigma, log_e_sigma) / den;
    };
    auto f = [&](const RealVector& x) {
        try {
            return ratio_of(param::state_from(x, d));
        } catch (const Error&) {
            return -kInf;
        }
    };
    struct Run {
        double value = -kInf;
        Matrix rho;
    };
    auto job = [&](int r) {
        Rng rng(budget.seed + static_cast<std::uint64_t>(r));
        DensityOperator start = hs_mixed_state(d, rng);
        if (r % 2 == 1 && best_direction.size()) {
            // Probe along the perturbative direction at a finite step.
            const double step = 0.5 * std::min(1.0, sigma.min_eigenvalue() / std::max(1e-12, best_direction.operatorNorm()));
            start = DensityOperator(Matrix(sigma.matrix() + step * best_direction));
        }
        AscentOptions opt{budget.max_iterations, budget.tolerance, 1e-6};
        const AscentResult res = maximize(f, param::coordinates_of(start), opt);
        Run run;
        run.value = res.value;
        if (std::isfinite(res.value)) run.rho = param::state_from(res.x, d).matrix();
        return run;
    };
    const auto runs = run_restarts(std::max(1, budget.restarts), budget.threads, job);
    rep.ascent = 0.0;
    for (const Run& r : runs) {
        if (r.value > rep.ascent) {
            rep.ascent = r.value;
            rep.witness = r.rho;
        }
    }
    rep.eta = std::max(rep.perturbative, rep.ascent);
    if (rep.perturbative >= rep.ascent && best_direction.size()) {
        const double eps = 1e-4 * sigma.min_eigenvalue() / std::max(1e-12, best_direction.operatorNorm());
        rep.witness = sigma.matrix() + eps * best_direction;
    }
    if (rep.eta > 1.0 + 1e-9) throw Diverged("contraction_coefficient: ratio exceeds 1 (" + std::to_string(rep.eta) + ")");
    rep.eta = std::min(rep.eta, 1.0);
    return rep;
}

struct SdpiAnalyticReport {
    double lhs = 0.0;
    /// ||exp(log omega + (1/eta) log E(sigma))||_eta
    double rhs = 0.0;
    double gap = 0.0;
};

/// RHS - LHS of tr exp(log sigma + E^dagger(log omega)) <= ||exp(log omega + (1/eta) log E(sigma))||_eta.
inline SdpiAnalyticReport sdpi_analytic_check(const Channel& ch, const PSDOperator& sigma, double eta,
                                              const PSDOperator& omega) {
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidEta("sdpi_analytic_check: eta must lie in (0,1]");
    require_same_dim(sigma.dim(), ch.dim_in(), "sdpi_analytic_check");
    require_same_dim(omega.dim(), ch.dim_out(), "sdpi_analytic_check");
    SdpiAnalyticReport rep;
    const ExtendedHermitian log_omega = matrix_log(omega);
    rep.lhs = trace_exp(matrix_log(sigma) + ch.apply_adjoint(log_omega));
    // ||exp(L + q log s)||_{1/q} = (tr exp(L/q + log s))^q with q = 1/eta
    rep.rhs = std::exp(log_trace_exp(eta * log_omega + matrix_log(ch.apply(sigma))) / eta);
    rep.gap = rep.rhs - rep.lhs;
    return rep;
}

struct ScalarSdpiReport {
    double min_gap = kInf;
    double argmin_t = 0.0;
    int points = 0;
};

/// min over the grid t = 0, step, ..., 1 of
///   2^{(eta-1)/eta} (t^eta + (1-t)^eta)^{1/eta} - (t(1-t))^{p/2} (t^{1-p} + (1-t)^{1-p}),
/// the depolarizing / maximally mixed reduction of the analytic SDPI.
inline ScalarSdpiReport depolarizing_scalar_sdpi(double p, double eta, double step = 1e-3) {
    if (!(eta > 0.0 && eta <= 1.0)) throw InvalidEta("depolarizing_scalar_sdpi: eta must lie in (0,1]");
    if (!(p >= 0.0 && p <= 1.0)) throw InvalidProbability("depolarizing_scalar_sdpi: p outside [0,1]");
    ScalarSdpiReport rep;
    const int n = static_cast<int>(std::llround(1.0 / step));
    for (int i = 0; i <= n; ++i) {
        const double t = std::min(1.0, i * step);
        const double u = 1.0 - t;
        const double lhs = std::pow(t * u, 0.5 * p) * (std::pow(t, 1.0 - p) + std::pow(u, 1.0 - p));
        const double rhs = std::exp2((eta - 1.0) / eta) * std::pow(std::pow(t, eta) + std::pow(u, eta), 1.0 / eta);
        const double gap = rhs - lhs;
        ++rep.points;
        if (std::isfinite(gap) && gap < rep.min_gap) {
            rep.min_gap = gap;
            rep.argmin_t = t;
        }
    }
    return rep;
}

// -------------------------------------------------------- super-additivity

struct SuperadditivityReport {
    double alpha = 0.0;
    double beta = 0.0;
    VerificationReport entropic;
    VerificationReport analytic;
};

/// (1 + 2 ||(s_A^{-1/2} (x) s_B^{-1/2}) s_AB (s_A^{-1/2} (x) s_B^{-1/2}) - 1||_inf)^{-1}.
inline double superadditivity_alpha(const DensityOperator& sigma_ab, Index da, Index db) {
    require_same_dim(sigma_ab.dim(), da * db, "superadditivity_constant");
    const PSDOperator sa(reduce(sigma_ab.matrix(), da, db, true));
    const PSDOperator sb(reduce(sigma_ab.matrix(), da, db, false));
    if (!sa.full_rank() || !sb.full_rank()) throw SingularMarginal("superadditivity_constant: marginal not full rank");
    const Matrix w = kron(psd_power(sa, -0.5).matrix(), psd_power(sb, -0.5).matrix());
    const HermitianOperator dev(Matrix(w * sigma_ab.matrix() * w - Matrix::Identity(da * db, da * db)));
    const double norm = std::max(std::abs(dev.min_eigenvalue()), std::abs(dev.max_eigenvalue()));
    return 1.0 / (1.0 + 2.0 * norm);
}

/// tr_B and tr_A with q = (alpha, beta), sigma = sigma_AB, sigma_k = marginals, C = 0.
inline BLDatum superadditivity_datum(const DensityOperator& sigma_ab, Index da, Index db) {
    const double alpha = superadditivity_alpha(sigma_ab, da, db);
    return BLDatum{{alpha, alpha},
                   {partial_trace({da, db}, {0}), partial_trace({da, db}, {1})},
                   sigma_ab,
                   {PSDOperator(reduce(sigma_ab.matrix(), da, db, true)), PSDOperator(reduce(sigma_ab.matrix(), da, db, false))},
                   0.0,
                   "superadditivity",
                   "nats"};
}

inline SuperadditivityReport superadditivity_constant(const DensityOperator& sigma_ab, Index da, Index db,
                                                      int samples = 500, std::uint64_t seed = 0) {
    const BLDatum datum = superadditivity_datum(sigma_ab, da, db);
    SuperadditivityReport rep;
    rep.alpha = rep.beta = datum.q[0];
    SamplerConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    rep.entropic = bl_membership(datum, cfg);
    cfg.form = Form::analytic;
    rep.analytic = bl_membership(datum, cfg);
    return rep;
}

}  // namespace qbl

#endif  // QBL_APPLICATIONS_HPP
