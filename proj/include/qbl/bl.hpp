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
 * Brascamp-Lieb data and the two equivalent forms of a BL inequality:
 *
 *   entropic:  sum_k q_k D(E_k(rho) || sigma_k) <= D(rho || sigma) + C
 *   analytic:  tr exp(log sigma + sum_k E_k^dagger(log omega_k))
 *                  <= exp(C) prod_k ||exp(log omega_k + q_k log sigma_k)||_{1/q_k}
 *
 * The optimal constant is estimated independently from each side. The
 * entropic estimator alternates the two variational formulas for the
 * relative entropy (a monotone ascent) and also runs a direct ascent over
 * rho = X X^dagger / tr; the analytic estimator never touches rho and
 * works by block-coordinate ascent over omega_k = exp(H_k).
 */

#ifndef QBL_BL_HPP
#define QBL_BL_HPP

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qbl/channel.hpp"
#include "qbl/entropy.hpp"
#include "qbl/optimize.hpp"
#include "qbl/param.hpp"
#include "qbl/random.hpp"

namespace qbl {

struct BLDatum {
    std::vector<double> q;
    std::vector<Channel> channels;
    PSDOperator sigma;
    std::vector<PSDOperator> sigmas;
    /// The constant C in nats; empty means "to be estimated".
    std::optional<double> c;
    std::string label;
    /// Reporting units for gaps and constants ("nats" or "bits").
    std::string units = "nats";

    Index dim() const { return sigma.dim(); }
    std::size_t size() const { return channels.size(); }

    void validate() const {
        if (channels.empty()) throw InvalidDatum("BLDatum: no channels");
        if (q.size() != channels.size() || sigmas.size() != channels.size()) {
            throw InvalidDatum("BLDatum: q, channels and sigmas must have equal length");
        }
        for (std::size_t k = 0; k < channels.size(); ++k) {
            if (!(q[k] > 0.0)) throw InvalidDatum("BLDatum: q_" + std::to_string(k) + " must be positive");
            if (channels[k].dim_in() != sigma.dim()) {
                throw DimensionMismatch("BLDatum: channel " + std::to_string(k) + " input dimension");
            }
            if (sigmas[k].dim() != channels[k].dim_out()) {
                throw DimensionMismatch("BLDatum: sigma_" + std::to_string(k) + " dimension");
            }
        }
        if (sigma.support_rank() == 0) throw InvalidDatum("BLDatum: sigma is zero");
    }
};

/// sigma_k = E_k(sigma) for every k, the DPI-style family.
inline std::vector<PSDOperator> pushforward_sigmas(const std::vector<Channel>& channels, const PSDOperator& sigma) {
    std::vector<PSDOperator> out;
    out.reserve(channels.size());
    for (const Channel& ch : channels) out.push_back(ch.apply(sigma));
    return out;
}

enum class Form { entropic, analytic };
enum class Verdict { holds_on_samples, violated };

inline const char* to_string(Form f) { return f == Form::entropic ? "entropic" : "analytic"; }
inline const char* to_string(Verdict v) { return v == Verdict::holds_on_samples ? "holds_on_samples" : "violated"; }

struct VerificationReport {
    Form form = Form::entropic;
    double worst_gap = kInf;
    /// rho (entropic) or omega_1..omega_n (analytic) attaining worst_gap.
    std::vector<Matrix> witness;
    int samples = 0;
    std::vector<std::pair<int, double>> optimizer_trace;
    Verdict verdict = Verdict::holds_on_samples;
    std::string units = "nats";
};

/// Caches log sigma and log sigma_k for repeated gap evaluations.
class BLEvaluator {
public:
    explicit BLEvaluator(const BLDatum& datum, NumericPolicy policy = {})
        : datum_(datum), policy_(policy), log_sigma_(matrix_log(datum.sigma)) {
        datum_.validate();
        log_sigmas_.reserve(datum_.size());
        for (const PSDOperator& s : datum_.sigmas) log_sigmas_.push_back(matrix_log(s));
    }

    const BLDatum& datum() const { return datum_; }
    const ExtendedHermitian& log_sigma() const { return log_sigma_; }
    const ExtendedHermitian& log_sigma(std::size_t k) const { return log_sigmas_[k]; }

    double relative_to_sigma(const DensityOperator& rho) const {
        return relative_entropy(rho, datum_.sigma, log_sigma_, policy_);
    }

    /// sum_k q_k D(E_k(rho)||sigma_k) for rho << sigma; +inf if a term is infinite.
    double channel_side(const DensityOperator& rho) const {
        double acc = 0.0;
        for (std::size_t k = 0; k < datum_.size(); ++k) {
            const DensityOperator out(datum_.channels[k].apply(rho.matrix()), policy_);
            acc += datum_.q[k] * relative_entropy(out, datum_.sigmas[k], log_sigmas_[k], policy_);
        }
        return acc;
    }

    /// sum_k q_k D(E_k rho||sigma_k) - D(rho||sigma); -inf when rho is not << sigma.
    double entropic_objective(const DensityOperator& rho) const {
        require_same_dim(rho.dim(), datum_.dim(), "entropic_objective");
        const double base = relative_to_sigma(rho);
        if (std::isinf(base)) return -kInf;
        return channel_side(rho) - base;
    }

    /// D(rho||sigma) + C - sum_k q_k D(E_k rho||sigma_k).
    double entropic_gap(const DensityOperator& rho, double c) const {
        require_same_dim(rho.dim(), datum_.dim(), "entropic_gap");
        const double base = relative_to_sigma(rho);
        if (std::isinf(base)) return kInf;
        const double side = channel_side(rho);
        if (std::isinf(side)) return -kInf;
        return base + c - side;
    }

    /// log tr exp(log sigma + sum_k E_k^dagger(L_k)) for given logarithms L_k.
    double log_lhs(const std::vector<ExtendedHermitian>& logs) const {
        std::vector<ExtendedHermitian> terms;
        terms.reserve(datum_.size() + 1);
        terms.push_back(log_sigma_);
        for (std::size_t k = 0; k < datum_.size(); ++k) terms.push_back(datum_.channels[k].apply_adjoint(logs[k]));
        return log_trace_exp(sum(std::span<const ExtendedHermitian>(terms)));
    }

    /// log ||exp(L_k + q_k log sigma_k)||_{1/q_k} = q_k log tr exp(L_k/q_k + log sigma_k).
    double log_rhs_factor(std::size_t k, const ExtendedHermitian& log_omega) const {
        return datum_.q[k] * log_trace_exp((1.0 / datum_.q[k]) * log_omega + log_sigmas_[k]);
    }

    /// log LHS - sum_k log RHS_k, in terms of the logarithms of omega_k.
    double analytic_objective_from_logs(const std::vector<ExtendedHermitian>& logs) const {
        if (logs.size() != datum_.size()) throw DimensionMismatch("analytic_objective: one omega per channel");
        double rhs = 0.0;
        for (std::size_t k = 0; k < datum_.size(); ++k) {
            require_same_dim(logs[k].dim(), datum_.channels[k].dim_out(), "analytic_objective");
            rhs += log_rhs_factor(k, logs[k]);
        }
        return log_lhs(logs) - rhs;
    }

    double analytic_objective(const std::vector<PSDOperator>& omegas) const {
        std::vector<ExtendedHermitian> logs;
        logs.reserve(omegas.size());
        for (const PSDOperator& w : omegas) logs.push_back(matrix_log(w));
        return analytic_objective_from_logs(logs);
    }

    /// log(RHS) - log(LHS) including exp(C).
    double analytic_gap(const std::vector<PSDOperator>& omegas, double c) const {
        return c - analytic_objective(omegas);
    }

    const NumericPolicy& policy() const { return policy_; }

private:
    BLDatum datum_;
    NumericPolicy policy_;
    ExtendedHermitian log_sigma_;
    std::vector<ExtendedHermitian> log_sigmas_;
};

inline double entropic_gap(const BLDatum& d, const DensityOperator& rho) {
    if (!d.c) throw InvalidDatum("entropic_gap: datum has no constant");
    return BLEvaluator(d).entropic_gap(rho, *d.c);
}

inline double analytic_gap(const BLDatum& d, const std::vector<PSDOperator>& omegas) {
    if (!d.c) throw InvalidDatum("analytic_gap: datum has no constant");
    return BLEvaluator(d).analytic_gap(omegas, *d.c);
}

struct RestartRecord {
    int restart = 0;
    std::uint64_t seed = 0;
    /// Best value of the alternating fixed point (entropic) or of the
    /// coordinate ascent (analytic).
    double primary = -kInf;
    /// Best value of the direct ascent (entropic only).
    double secondary = -kInf;
    int iterations = 0;
};

/// An estimate of the optimal constant. Always a lower bound on the true
/// optimum: it is the objective value at an explicit witness.
struct ConstantEstimate {
    Form form = Form::entropic;
    double c_est = -kInf;
    std::vector<Matrix> witness;
    /// Analytic form only: the generators H_k = log omega_k (top eigenvalue 0).
    /// c_est is evaluated from these, since optimal omegas may sit on the
    /// boundary where the normalized witness underflows.
    std::vector<Matrix> log_witness;
    std::vector<std::pair<int, double>> trace;
    std::vector<RestartRecord> restarts;
};

namespace detail {

struct Candidate {
    double value = -kInf;
    std::vector<Matrix> witness;
    std::vector<Matrix> log_witness;
    std::vector<std::pair<int, double>> trace;
    RestartRecord record;
};

/// Support basis of sigma; states are sampled and optimized inside it.
inline Matrix state_space(const PSDOperator& sigma) {
    return sigma.full_rank() ? Matrix::Identity(sigma.dim(), sigma.dim()) : sigma.support_basis();
}

inline DensityOperator embed(const DensityOperator& small, const Matrix& basis) {
    if (basis.cols() == basis.rows()) return small;
    return DensityOperator(Matrix(basis * small.matrix() * basis.adjoint()));
}

/// Alternating maximization: omega_k = exp(q_k (log E_k rho - log sigma_k)),
/// then rho = exp(log sigma + sum_k E_k^dagger log omega_k) / tr(...).
inline Candidate fixed_point(const BLEvaluator& ev, DensityOperator rho, const OptimizerBudget& budget) {
    const BLDatum& d = ev.datum();
    Candidate best;
    double value = ev.entropic_objective(rho);
    best.value = value;
    best.witness = {rho.matrix()};
    for (int it = 1; it <= budget.max_iterations; ++it) {
        std::vector<ExtendedHermitian> pulled;
        pulled.reserve(d.size());
        for (std::size_t k = 0; k < d.size(); ++k) {
            const PSDOperator out(d.channels[k].apply(rho.matrix()));
            const ExtendedHermitian log_omega = d.q[k] * (matrix_log(out) - ev.log_sigma(k));
            pulled.push_back(d.channels[k].apply_adjoint(log_omega));
        }
        const ExtendedHermitian h = sum(std::span<const ExtendedHermitian>(pulled));
        DensityOperator next = variational_optimizer_state(h, d.sigma);
        const double next_value = ev.entropic_objective(next);
        if (std::isnan(next_value)) throw Diverged("fixed point: objective is NaN");
        best.trace.emplace_back(it, next_value);
        best.record.iterations = it;
        const double improvement = next_value - value;
        rho = std::move(next);
        value = next_value;
        if (value > best.value) {
            best.value = value;
            best.witness = {rho.matrix()};
        }
        if (std::isinf(value) || std::abs(improvement) <= budget.tolerance * (1.0 + std::abs(value))) break;
    }
    return best;
}

inline Candidate direct_ascent(const BLEvaluator& ev, const DensityOperator& start, const Matrix& space,
                               const OptimizerBudget& budget) {
    const Index r = space.cols();
    const DensityOperator local(Matrix(space.adjoint() * start.matrix() * space));
    auto f = [&](const RealVector& x) {
        try {
            return ev.entropic_objective(embed(param::state_from(x, r), space));
        } catch (const ZeroTrace&) {
            return -kInf;
        }
    };
    AscentOptions opt{budget.max_iterations, budget.tolerance, 1e-5};
    const AscentResult res = maximize(f, param::coordinates_of(local), opt);
    Candidate c;
    c.value = res.value;
    c.witness = {embed(param::state_from(res.x, r), space).matrix()};
    c.trace = res.trace;
    c.record.iterations = res.iterations;
    return c;
}

inline DensityOperator sample_state(Index d, Rng& rng, int kind) {
    switch (kind % 3) {
        case 0: return hs_mixed_state(d, rng);
        case 1: return haar_pure_state(d, rng);
        default: return boundary_state(d, rng);
    }
}

}  // namespace detail

/// Estimates sup_rho [sum_k q_k D(E_k rho||sigma_k) - D(rho||sigma)] as the
/// best of the alternating fixed point and a direct BFGS ascent over
/// rho = X X^dagger / tr, across budget.restarts seeded restarts.
inline ConstantEstimate optimal_constant_entropic(const BLDatum& datum, const OptimizerBudget& budget = {},
                                                  bool with_direct_ascent = true) {
    const BLEvaluator ev(datum);
    const Matrix space = detail::state_space(datum.sigma);
    auto job = [&](int r) {
        const std::uint64_t seed = budget.seed + static_cast<std::uint64_t>(r);
        Rng rng(seed);
        const DensityOperator start =
            detail::embed(r == 0 ? DensityOperator::maximally_mixed(space.cols()) : hs_mixed_state(space.cols(), rng), space);
        detail::Candidate best;
        best.record.restart = r;
        best.record.seed = seed;
        try {
            detail::Candidate fp = detail::fixed_point(ev, start, budget);
            best.record.primary = fp.value;
            best.record.iterations = fp.record.iterations;
            best.value = fp.value;
            best.witness = std::move(fp.witness);
            best.trace = std::move(fp.trace);
        } catch (const InvalidDatum&) {
            // Support condition failed along the iteration; rely on ascent.
        }
        if (with_direct_ascent) {
            detail::Candidate da = detail::direct_ascent(ev, start, space, budget);
            best.record.secondary = da.value;
            if (da.value > best.value) {
                best.value = da.value;
                best.witness = std::move(da.witness);
                best.trace = std::move(da.trace);
            }
        }
        return best;
    };
    const std::vector<detail::Candidate> runs = run_restarts(std::max(1, budget.restarts), budget.threads, job);
    ConstantEstimate est;
    est.form = Form::entropic;
    const detail::Candidate* top = nullptr;
    for (const detail::Candidate& c : runs) {
        est.restarts.push_back(c.record);
        if (!top || c.value > top->value) top = &c;
    }
    if (!top || top->witness.empty()) throw Diverged("optimal_constant_entropic: no finite restart");
    est.witness = top->witness;
    est.trace = top->trace;
    est.c_est = ev.entropic_objective(DensityOperator(top->witness.front()));
    return est;
}

namespace detail {

// The objective is invariant under H_k -> H_k + c; pin the top eigenvalue
// of each generator to 0 so exp never overflows.
inline Matrix gauged(const Matrix& h) {
    const double top = eigh(h).values.maxCoeff();
    return h - top * Matrix::Identity(h.rows(), h.cols());
}

inline std::vector<ExtendedHermitian> unpack_logs(const RealVector& x, const std::vector<Index>& dims) {
    std::vector<ExtendedHermitian> logs;
    logs.reserve(dims.size());
    Index offset = 0;
    for (Index d : dims) {
        logs.emplace_back(HermitianOperator(gauged(param::unpack_hermitian(x, d, offset))));
        offset += param::hermitian_size(d);
    }
    return logs;
}

inline void regauge(RealVector& x, const std::vector<Index>& dims) {
    Index offset = 0;
    for (Index d : dims) {
        param::pack_hermitian(gauged(param::unpack_hermitian(x, d, offset)), x, offset);
        offset += param::hermitian_size(d);
    }
}

/// Block-coordinate ascent over the generators H_k (omega_k = exp H_k).
inline Candidate coordinate_ascent(const BLEvaluator& ev, RealVector x, const std::vector<Index>& dims,
                                   const OptimizerBudget& budget, bool sweeps = true) {
    std::vector<Index> offsets;
    Index total = 0;
    for (Index d : dims) {
        offsets.push_back(total);
        total += param::hermitian_size(d);
    }
    auto full = [&](const RealVector& v) { return ev.analytic_objective_from_logs(unpack_logs(v, dims)); };
    Candidate c;
    double value = full(x);
    int used = 0;
    int sweep = 0;
    const int per_block = std::max(5, budget.max_iterations / 10);
    while (sweeps && used < budget.max_iterations) {
        ++sweep;
        const double before = value;
        for (std::size_t k = 0; k < dims.size() && used < budget.max_iterations; ++k) {
            const Index n = param::hermitian_size(dims[k]);
            auto block = [&](const RealVector& y) {
                RealVector v = x;
                v.segment(offsets[k], n) = y;
                return full(v);
            };
            AscentOptions opt{std::min(per_block, budget.max_iterations - used), budget.tolerance, 1e-5};
            const AscentResult res = maximize(block, RealVector(x.segment(offsets[k], n)), opt);
            used += std::max(1, res.iterations);
            if (res.value >= value) {
                x.segment(offsets[k], n) = res.x;
                regauge(x, dims);
                value = res.value;
            }
        }
        c.trace.emplace_back(sweep, value);
        if (dims.size() == 1 || value - before <= budget.tolerance * (1.0 + std::abs(value))) break;
    }
    if (dims.size() > 1 || !sweeps) {
        // Joint polish: coordinate sweeps crawl along coupled directions.
        AscentOptions opt{sweeps ? budget.max_iterations : std::max(10, budget.max_iterations / 5), budget.tolerance, 1e-5};
        const AscentResult res = maximize(full, x, opt);
        used += res.iterations;
        if (res.value > value) {
            x = res.x;
            regauge(x, dims);
            value = res.value;
            c.trace.emplace_back(++sweep, value);
        }
    }
    c.value = value;
    c.record.iterations = used;
    for (const ExtendedHermitian& l : unpack_logs(x, dims)) {
        const PSDOperator w = matrix_exp(l);
        c.witness.push_back(w.matrix() / w.trace());
        c.log_witness.push_back(l.finite_part());
    }
    return c;
}

/// Minorize-maximize on the analytic objective alone. log tr exp(A + E_k^dagger L)
/// is convex in L, so its tangent at L_k is a minorant; the maximizer of
/// tangent - q_k log tr exp(L/q_k + log sigma_k) is
///   L_k = q_k (log E_k(tau) - log sigma_k),  tau = exp(log sigma + sum_j E_j^dagger L_j)/tr,
/// and every step is non-decreasing. Stops at the first non-full-rank update.
inline std::vector<ExtendedHermitian> minorize_maximize(const BLEvaluator& ev, std::vector<ExtendedHermitian> logs,
                                                        const OptimizerBudget& budget, std::vector<std::pair<int, double>>& trace) {
    const BLDatum& d = ev.datum();
    double value = ev.analytic_objective_from_logs(logs);
    for (int it = 1; it <= budget.max_iterations; ++it) {
        std::vector<ExtendedHermitian> pulled;
        for (std::size_t k = 0; k < d.size(); ++k) pulled.push_back(d.channels[k].apply_adjoint(logs[k]));
        const DensityOperator tau = variational_optimizer_state(sum(std::span<const ExtendedHermitian>(pulled)), d.sigma);
        std::vector<ExtendedHermitian> next;
        for (std::size_t k = 0; k < d.size(); ++k) {
            const PSDOperator out(d.channels[k].apply(tau.matrix()));
            if (!out.full_rank()) return logs;
            const ExtendedHermitian l = d.q[k] * (matrix_log(out) - ev.log_sigma(k));
            if (l.has_kernel()) return logs;
            next.emplace_back(HermitianOperator(gauged(l.finite_part())));
        }
        const double next_value = ev.analytic_objective_from_logs(next);
        if (!(next_value >= value - 1e-12)) break;
        const double improvement = next_value - value;
        logs = std::move(next);
        value = next_value;
        trace.emplace_back(it, value);
        if (improvement <= budget.tolerance * (1.0 + std::abs(value))) break;
    }
    return logs;
}

}  // namespace detail

/// Estimates sup over omega_1..omega_n of
///   log tr exp(log sigma + sum_k E_k^dagger(log omega_k)) - sum_k log ||exp(log omega_k + q_k log sigma_k)||_{1/q_k}
/// by block-coordinate BFGS ascent over omega_k = exp(H_k), multi-start.
inline ConstantEstimate optimal_constant_analytic(const BLDatum& datum, const OptimizerBudget& budget = {}) {
    const BLEvaluator ev(datum);
    std::vector<Index> dims;
    Index total = 0;
    for (const Channel& ch : datum.channels) {
        dims.push_back(ch.dim_out());
        total += param::hermitian_size(ch.dim_out());
    }
    auto job = [&](int r) {
        const std::uint64_t seed = budget.seed + static_cast<std::uint64_t>(r);
        Rng rng(seed);
        RealVector x(total);
        Index offset = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) {
            const Index d = dims[k];
            // Restart 0 starts from omega_k proportional to sigma_k's support projector.
            const DensityOperator w = r == 0 ? DensityOperator::maximally_mixed(d) : hs_mixed_state(d, rng);
            param::pack_hermitian(matrix_log(w).finite_part(), x, offset);
            offset += param::hermitian_size(d);
        }
        // Pure parametrized ascent on every fourth restart; the others are
        // seeded by minorize-maximize and then polished by the same ascent.
        detail::Candidate best;
        if (r % 4 == 0) {
            best = detail::coordinate_ascent(ev, x, dims, budget);
            best.record.primary = best.value;
        }
        try {
            std::vector<std::pair<int, double>> mm_trace;
            std::vector<ExtendedHermitian> logs =
                detail::minorize_maximize(ev, detail::unpack_logs(x, dims), budget, mm_trace);
            RealVector y(total);
            Index off = 0;
            for (std::size_t k = 0; k < dims.size(); ++k) {
                param::pack_hermitian(logs[k].finite_part(), y, off);
                off += param::hermitian_size(dims[k]);
            }
            detail::Candidate mm = detail::coordinate_ascent(ev, std::move(y), dims, budget, false);
            mm.trace.insert(mm.trace.begin(), mm_trace.begin(), mm_trace.end());
            best.record.secondary = mm.value;
            if (mm.value > best.value) {
                mm.record = best.record;
                best = std::move(mm);
            }
        } catch (const Error&) {
            // Support degenerated along the iteration; keep the ascent result.
        }
        best.record.restart = r;
        best.record.seed = seed;
        return best;
    };
    const std::vector<detail::Candidate> runs = run_restarts(std::max(1, budget.restarts), budget.threads, job);
    ConstantEstimate est;
    est.form = Form::analytic;
    const detail::Candidate* top = nullptr;
    for (const detail::Candidate& c : runs) {
        est.restarts.push_back(c.record);
        if (!top || c.value > top->value) top = &c;
    }
    if (!top || top->log_witness.empty()) throw Diverged("optimal_constant_analytic: no finite restart");
    est.witness = top->witness;
    est.log_witness = top->log_witness;
    est.trace = top->trace;
    std::vector<ExtendedHermitian> logs;
    for (const Matrix& m : top->log_witness) logs.emplace_back(HermitianOperator(m));
    est.c_est = ev.analytic_objective_from_logs(logs);
    return est;
}

struct DualityReport {
    ConstantEstimate entropic;
    ConstantEstimate analytic;
    double difference = 0.0;
    double tolerance = 0.0;
    bool agree = false;
};

/// Runs both estimators; they agree when |C_ent - C_ana| <= max(abs_tol, rel_tol |C_ent|).
inline DualityReport duality_crosscheck(const BLDatum& datum, const OptimizerBudget& budget = {},
                                        double abs_tol = 1e-4, double rel_tol = 1e-3) {
    DualityReport rep;
    rep.entropic = optimal_constant_entropic(datum, budget);
    rep.analytic = optimal_constant_analytic(datum, budget);
    rep.difference = std::abs(rep.entropic.c_est - rep.analytic.c_est);
    rep.tolerance = std::max(abs_tol, rel_tol * std::abs(rep.entropic.c_est));
    rep.agree = rep.difference <= rep.tolerance;
    return rep;
}

struct SamplerConfig {
    Form form = Form::entropic;
    int samples = 1000;
    std::uint64_t seed = 0;
    /// Extra candidates evaluated before random sampling (e.g. optimizer witnesses).
    std::vector<DensityOperator> extra_states;
    std::vector<std::vector<PSDOperator>> extra_omegas;
};

/// Samples rho (entropic form) or omega_1..omega_n (analytic form) from
/// Hilbert-Schmidt, Haar-pure and boundary-biased ensembles and reports
/// the smallest gap, expressed in the datum's units. The analytic form only draws full-support omegas
/// (restricted to supp sigma_k when sigma_k is singular).
inline VerificationReport bl_membership(const BLDatum& datum, const SamplerConfig& cfg,
                                        const NumericPolicy& policy = {}) {
    if (!datum.c) throw InvalidDatum("bl_membership: datum has no constant");
    const double c = *datum.c;
    const BLEvaluator ev(datum, policy);
    VerificationReport rep;
    rep.form = cfg.form;
    rep.units = datum.units;
    Rng rng(cfg.seed);
    const bool bits = datum.units == "bits";
    auto consider = [&](double gap, std::vector<Matrix> witness) {
        if (bits) gap = to_bits(gap);
        ++rep.samples;
        if (gap < rep.worst_gap || rep.witness.empty()) {
            rep.worst_gap = gap;
            rep.witness = std::move(witness);
            rep.optimizer_trace.emplace_back(rep.samples, gap);
        }
    };
    if (cfg.form == Form::entropic) {
        const Matrix space = detail::state_space(datum.sigma);
        for (const DensityOperator& rho : cfg.extra_states) consider(ev.entropic_gap(rho, c), {rho.matrix()});
        for (int s = 0; s < cfg.samples; ++s) {
            const DensityOperator rho = detail::embed(detail::sample_state(space.cols(), rng, s), space);
            consider(ev.entropic_gap(rho, c), {rho.matrix()});
        }
    } else {
        for (const auto& omegas : cfg.extra_omegas) {
            std::vector<Matrix> w;
            for (const PSDOperator& o : omegas) w.push_back(o.matrix());
            consider(ev.analytic_gap(omegas, c), std::move(w));
        }
        for (int s = 0; s < cfg.samples; ++s) {
            std::vector<PSDOperator> omegas;
            std::vector<Matrix> w;
            for (std::size_t k = 0; k < datum.size(); ++k) {
                const Matrix space = detail::state_space(datum.sigmas[k]);
                const DensityOperator local =
                    (s % 2 == 0) ? hs_mixed_state(space.cols(), rng) : boundary_state(space.cols(), rng);
                const DensityOperator o = detail::embed(local, space);
                w.push_back(o.matrix());
                omegas.push_back(o);
            }
            consider(ev.analytic_gap(omegas, c), std::move(w));
        }
    }
    rep.verdict = rep.worst_gap >= -policy.membership ? Verdict::holds_on_samples : Verdict::violated;
    return rep;
}

/// Product datum (E_k^1 (x) E_k^2, sigma^1 (x) sigma^2, sigma_k^1 (x) sigma_k^2)
/// with constant C^1 + C^2; requires identical n and q.
inline BLDatum tensor_datum(const BLDatum& a, const BLDatum& b) {
    if (a.size() != b.size()) throw InvalidDatum("tensor_datum: different numbers of channels");
    for (std::size_t k = 0; k < a.size(); ++k) {
        if (std::abs(a.q[k] - b.q[k]) > 1e-12) throw InvalidDatum("tensor_datum: q vectors differ");
    }
    std::vector<Channel> channels;
    std::vector<PSDOperator> sigmas;
    for (std::size_t k = 0; k < a.size(); ++k) {
        channels.push_back(tensor(a.channels[k], b.channels[k]));
        sigmas.emplace_back(kron(a.sigmas[k].matrix(), b.sigmas[k].matrix()));
    }
    std::optional<double> c;
    if (a.c && b.c) c = *a.c + *b.c;
    return BLDatum{a.q, std::move(channels), PSDOperator(kron(a.sigma.matrix(), b.sigma.matrix())), std::move(sigmas),
                   c, a.label + "(x)" + b.label, a.units};
}

struct TensorizationReport {
    double constant_first = 0.0;
    double constant_second = 0.0;
    /// C^1 + C^2, the candidate constant for the product datum.
    double sum_of_constants = 0.0;
    ConstantEstimate product;
    /// (C^1 + C^2) - C_est(product): negative means tensorization fails.
    double worst_gap = 0.0;
    VerificationReport sampled;
    Verdict verdict = Verdict::holds_on_samples;
};

/// Checks whether (q, C^1 + C^2) is in the BL set of the product datum by
/// optimizing over (possibly entangled) states of the joint system.
inline TensorizationReport tensorization_check(const BLDatum& a, const BLDatum& b, const OptimizerBudget& budget = {},
                                               const NumericPolicy& policy = {}) {
    TensorizationReport rep;
    rep.constant_first = a.c ? *a.c : optimal_constant_entropic(a, budget).c_est;
    rep.constant_second = b.c ? *b.c : optimal_constant_entropic(b, budget).c_est;
    rep.sum_of_constants = rep.constant_first + rep.constant_second;
    BLDatum product = tensor_datum(a, b);
    product.c = rep.sum_of_constants;
    rep.product = optimal_constant_entropic(product, budget);
    rep.worst_gap = rep.sum_of_constants - rep.product.c_est;

    SamplerConfig cfg;
    cfg.samples = 200;
    cfg.seed = budget.seed;
    cfg.extra_states.emplace_back(rep.product.witness.front());
    if (a.dim() == b.dim()) {
        // Maximally entangled state across the two copies.
        const Index d = a.dim();
        CVector phi = CVector::Zero(d * d);
        for (Index i = 0; i < d; ++i) phi(i * d + i) = 1.0;
        cfg.extra_states.push_back(DensityOperator::pure(phi / std::sqrt(static_cast<double>(d))));
    }
    rep.sampled = bl_membership(product, cfg, policy);
    rep.worst_gap = std::min(rep.worst_gap, rep.sampled.worst_gap);
    rep.verdict = rep.worst_gap >= -policy.membership ? Verdict::holds_on_samples : Verdict::violated;
    return rep;
}

}  // namespace qbl

#endif  // QBL_BL_HPP
