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
 * Entropies in nats. +infinity is an ordinary IEEE value here: it
 * propagates through sums with finite numbers, and callers that compare
 * two possibly infinite sides special-case it before subtracting.
 */

#ifndef QBL_ENTROPY_HPP
#define QBL_ENTROPY_HPP

#include <cmath>

#include "qbl/channel.hpp"
#include "qbl/operator.hpp"

namespace qbl {

/// sum x log x over the positive part of a spectrum (0 log 0 = 0).
inline double entropy_term(const RealVector& eigenvalues, double eps) {
    double acc = 0.0;
    for (Index i = 0; i < eigenvalues.size(); ++i) {
        const double x = eigenvalues(i);
        if (x > eps) acc += x * std::log(x);
    }
    return acc;
}

inline double von_neumann(const DensityOperator& rho) {
    return std::max(0.0, -entropy_term(rho.spectrum().values, rho.eps_supp()));
}

/// Binary entropy in nats.
inline double binary_entropy(double x) {
    auto t = [](double v) { return v > 0.0 ? -v * std::log(v) : 0.0; };
    return t(x) + t(1.0 - x);
}

/// True when supp(omega) is contained in supp(tau), judged by
/// ||(1 - P_tau) P_omega||_inf.
inline bool support_contained(const PSDOperator& omega, const PSDOperator& tau, const NumericPolicy& policy = {}) {
    if (tau.full_rank()) return true;
    const Matrix leak = (Matrix::Identity(tau.dim(), tau.dim()) - tau.support_projector()) * omega.support_basis();
    if (leak.size() == 0) return true;
    return leak.operatorNorm() <= policy.support_inclusion;
}

/// D(omega||tau) with the support convention; +inf unless omega << tau.
/// The log of tau may be passed precomputed.
inline double relative_entropy(const DensityOperator& omega, const PSDOperator& tau, const ExtendedHermitian& log_tau,
                               const NumericPolicy& policy = {}) {
    require_same_dim(omega.dim(), tau.dim(), "relative_entropy");
    if (!support_contained(omega, tau, policy)) return kInf;
    const double neg_entropy = entropy_term(omega.spectrum().values, omega.eps_supp());
    return neg_entropy - trace_product(omega.matrix(), log_tau.finite_part());
}

inline double relative_entropy(const DensityOperator& omega, const PSDOperator& tau, const NumericPolicy& policy = {}) {
    require_same_dim(omega.dim(), tau.dim(), "relative_entropy");
    if (tau.support_rank() == 0) return kInf;
    return relative_entropy(omega, tau, matrix_log(tau), policy);
}

/// Partial trace of a bipartite operator onto A (keep_first) or B.
inline Matrix reduce(const Matrix& rho_ab, Index da, Index db, bool keep_first) {
    require_same_dim(rho_ab.rows(), da * db, "reduce");
    return partial_trace({da, db}, {keep_first ? Index{0} : Index{1}}).apply(rho_ab);
}

/// H(A|B) = H(A) - D(rho_AB || rho_A (x) rho_B).
inline double conditional_entropy(const DensityOperator& rho_ab, Index da, Index db) {
    require_same_dim(rho_ab.dim(), da * db, "conditional_entropy");
    const DensityOperator rho_a(reduce(rho_ab.matrix(), da, db, true));
    const DensityOperator rho_b(reduce(rho_ab.matrix(), da, db, false));
    const PSDOperator product(kron(rho_a.matrix(), rho_b.matrix()));
    return von_neumann(rho_a) - relative_entropy(rho_ab, product);
}

/// tr rho log omega - log tr exp(log omega + log sigma); a lower bound on
/// D(rho||sigma) for every PSD omega, attained at the optimizer below.
inline double variational_lower(const DensityOperator& rho, const PSDOperator& sigma, const PSDOperator& omega,
                                 const NumericPolicy& policy = {}) {
    require_same_dim(rho.dim(), sigma.dim(), "variational_lower");
    require_same_dim(rho.dim(), omega.dim(), "variational_lower");
    if (!support_contained(rho, omega, policy)) return -kInf;
    const ExtendedHermitian log_omega = matrix_log(omega);
    const double lin = trace_product(rho.matrix(), log_omega.finite_part());
    return lin - log_trace_exp(log_omega + matrix_log(sigma));
}

/// exp(log rho - log sigma) normalized: the maximizer of variational_lower.
inline DensityOperator relative_entropy_optimizer(const DensityOperator& rho, const PSDOperator& sigma) {
    const PSDOperator unnormalized = matrix_exp(matrix_log(rho) - matrix_log(sigma));
    if (!(unnormalized.trace() > 0.0)) throw ZeroTrace("relative_entropy_optimizer: empty joint support");
    return DensityOperator(unnormalized.matrix());
}

/// log tr exp(H + log sigma).
inline double legendre_trace_exp(const ExtendedHermitian& h, const PSDOperator& sigma) {
    require_same_dim(h.dim(), sigma.dim(), "legendre_trace_exp");
    return log_trace_exp(h + matrix_log(sigma));
}

/// exp(H + log sigma)/tr exp(H + log sigma): the Gibbs-like state
/// attaining sup_omega { tr H omega - D(omega||sigma) }.
inline DensityOperator variational_optimizer_state(const ExtendedHermitian& h, const PSDOperator& sigma) {
    require_same_dim(h.dim(), sigma.dim(), "variational_optimizer_state");
    const ExtendedHermitian x = h + matrix_log(sigma);
    if (x.finite_rank() == 0) throw ZeroTrace("variational_optimizer_state: empty joint support");
    // Shift by the top eigenvalue before exponentiating.
    const double top = x.finite_eigenvalues().maxCoeff();
    const Matrix shift = -top * x.finite_basis() * x.finite_basis().adjoint();
    return DensityOperator(matrix_exp(ExtendedHermitian(Matrix(x.finite_part() + shift), x.finite_basis())).matrix());
}

/// tr H omega - D(omega||sigma); the objective of the Legendre formula.
inline double legendre_objective(const HermitianOperator& h, const PSDOperator& sigma, const DensityOperator& omega) {
    const double d = relative_entropy(omega, sigma);
    if (std::isinf(d)) return -kInf;
    return trace_product(h.matrix(), omega.matrix()) - d;
}

}  // namespace qbl

#endif  // QBL_ENTROPY_HPP
