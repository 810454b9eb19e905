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

#include <gtest/gtest.h>

#include <numbers>

#include "oracle.hpp"
#include "qbl/applications.hpp"
#include "test_data.hpp"

namespace qbl {
namespace {

using testing_data::small_budget;

const double kLn2 = std::numbers::ln2;

Matrix diag(std::initializer_list<double> v) {
    RealVector r(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) r(i++) = x;
    return r.cast<Complex>().asDiagonal();
}

// Bloch axis of the first basis vector; outcome 0 has probability (1 + r.n)/2.
Eigen::Vector3d bloch_axis(const Matrix& basis) {
    const Complex a = basis(0, 0), b = basis(1, 0);
    const Complex ab = std::conj(a) * b;
    return {2 * ab.real(), 2 * ab.imag(), std::norm(a) - std::norm(b)};
}

/// max of -H(X) - H(Z) + H(A) in nats: y-free grid of step 1e-3 over the
/// disk spanned by the two axes (orthogonal components only shrink H(A)).
double mu_plane_oracle(const Matrix& bx, const Matrix& bz) {
    const Eigen::Vector3d nx = bloch_axis(bx);
    const Eigen::Vector3d nz = bloch_axis(bz);
    const Eigen::Vector3d e1 = nx.normalized();
    Eigen::Vector3d e2 = nz - nz.dot(e1) * e1;
    if (e2.norm() < 1e-12) e2 = e1.unitOrthogonal();
    e2.normalize();
    double best = -kInf;
    for (int i = -1000; i <= 1000; ++i) {
        for (int j = -1000; j <= 1000; ++j) {
            const double u = i * 1e-3, v = j * 1e-3;
            const double r = std::hypot(u, v);
            if (r > 1.0) continue;
            const Eigen::Vector3d vec = u * e1 + v * e2;
            best = std::max(best, -oracle::binary_entropy(0.5 * (1 + vec.dot(nx))) -
                                      oracle::binary_entropy(0.5 * (1 + vec.dot(nz))) +
                                      oracle::binary_entropy(0.5 * (1 + r)));
        }
    }
    return best;
}

// ------------------------------------------------------------ Shearer

TEST(Shearer, SubadditivityMatchesOracle) {
    Rng rng(1);
    const BLDatum d = shearer_datum({2, 3}, {{0}, {1}}, 1);
    EXPECT_EQ(d.q, std::vector<double>({1.0, 1.0}));
    for (int i = 0; i < 50; ++i) {
        const DensityOperator rho = hs_mixed_state(6, rng);
        const Matrix& r = rho.matrix();
        const double expected = oracle::entropy(oracle::partial_trace(r, {2, 3}, {0})) +
                                oracle::entropy(oracle::partial_trace(r, {2, 3}, {1})) - oracle::entropy(r);
        EXPECT_NEAR(entropic_gap(d, rho), expected, 1e-9);
        EXPECT_GE(expected, -1e-12);
    }
}

TEST(Shearer, ThreeQubitPairsEntropic) {
    Rng rng(2);
    const std::vector<std::vector<Index>> pairs = {{0, 1}, {0, 2}, {1, 2}};
    const BLDatum d = shearer_datum({2, 2, 2}, pairs, 2);
    for (int i = 0; i < 500; ++i) {
        const DensityOperator rho = i % 2 ? hs_mixed_state(8, rng) : haar_pure_state(8, rng);
        double rhs = 0.0;
        for (const auto& s : pairs) rhs += 0.5 * oracle::entropy(oracle::partial_trace(rho.matrix(), {2, 2, 2}, s));
        EXPECT_GE(rhs - oracle::entropy(rho.matrix()), -1e-12);
        EXPECT_NEAR(entropic_gap(d, rho), rhs - oracle::entropy(rho.matrix()), 1e-9);
    }
}

TEST(Shearer, LoomisWhitneyAnalytic) {
    Rng rng(3);
    const std::vector<std::vector<Index>> pairs = {{0, 1}, {0, 2}, {1, 2}};
    const BLDatum d = shearer_datum({2, 2, 2}, pairs, 2);
    for (int i = 0; i < 100; ++i) {
        std::vector<PSDOperator> w;
        Matrix exponent = Matrix::Zero(8, 8);
        double log_rhs = 0.0;
        for (const auto& s : pairs) {
            w.push_back(random_pd(4, rng, 0.0));
            exponent += oracle::embed(oracle::logm(w.back().matrix()), {2, 2, 2}, s);
            log_rhs += std::log(w.back().matrix().norm());
        }
        const double lhs = oracle::trace_re(oracle::expm(exponent));
        EXPECT_LE(lhs, std::exp(log_rhs) * (1 + 1e-12));
        EXPECT_NEAR(analytic_gap(d, w), log_rhs - std::log(lhs), 1e-9);
    }
}

TEST(Shearer, CoverViolation) {
    EXPECT_THROW(shearer_datum({2, 2}, {{0}}, 1), CoverViolation);
    EXPECT_THROW(shearer_datum({2, 2}, {{0}, {1}}, 0), CoverViolation);
    EXPECT_THROW(shearer_datum({2, 2, 2}, {{0, 1}, {1, 2}}, 2), CoverViolation);
    EXPECT_THROW(shearer_datum({2, 2}, {{0, 2}, {1}}, 1), BadPartition);
    // Covering more than p times is allowed.
    EXPECT_NO_THROW(shearer_datum({2, 2}, {{0, 1}, {0}, {1}}, 1));
}

TEST(ConditionalShearer, ProductStateReducesToUnconditional) {
    Rng rng(4);
    for (int i = 0; i < 20; ++i) {
        const DensityOperator a = hs_mixed_state(4, rng);
        const DensityOperator b = hs_mixed_state(2, rng);
        const DensityOperator rho(kron(a.matrix(), b.matrix()));
        const ConditionalShearerReport r = conditional_shearer_check(rho, {2, 2}, 2, {{0}, {1}}, 1);
        const double unconditional = oracle::entropy(oracle::partial_trace(a.matrix(), {2, 2}, {0})) +
                                     oracle::entropy(oracle::partial_trace(a.matrix(), {2, 2}, {1})) -
                                     oracle::entropy(a.matrix());
        EXPECT_NEAR(r.gap, unconditional, 1e-9);
        EXPECT_TRUE(r.holds);
    }
}

TEST(ConditionalShearer, StrongSubadditivity) {
    Rng rng(5);
    for (int i = 0; i < 200; ++i) {
        const DensityOperator rho = i % 2 ? hs_mixed_state(8, rng) : haar_pure_state(8, rng);
        const ConditionalShearerReport r = conditional_shearer_check(rho, {2, 2}, 2, {{0}, {1}}, 1);
        EXPECT_TRUE(r.holds);
        EXPECT_GE(r.gap, -1e-12);
    }
}

TEST(ConditionalShearer, BellStateNeedsExactCover) {
    const DensityOperator rho = bell_with_pure_ancilla();
    const std::vector<std::vector<Index>> subsets = {{0}, {0}, {1}};
    EXPECT_THROW(conditional_shearer_check(rho, {2, 2}, 2, subsets, 1), CoverViolation);
    // H(A1A2|B) = -ln 2, H(A1|B) = -ln 2, H(A2|B) = 0.
    const ConditionalShearerReport r = conditional_shearer_gap(rho, {2, 2}, 2, subsets, 1);
    EXPECT_NEAR(r.lhs, -kLn2, 1e-9);
    EXPECT_NEAR(r.rhs, -2 * kLn2, 1e-9);
    EXPECT_NEAR(r.gap, -kLn2, 1e-9);
    EXPECT_FALSE(r.holds);
}

// -------------------------------------------------------- uncertainty

TEST(MaassenUffink, ConstantExamples) {
    EXPECT_NEAR(maassen_uffink_constant(pauli_basis('Z'), pauli_basis('Z')), 1.0, 1e-15);
    EXPECT_NEAR(maassen_uffink_constant(pauli_basis('X'), pauli_basis('Z')), 0.5, 1e-15);
    EXPECT_NEAR(maassen_uffink_constant(pauli_basis('X'), pauli_basis('Y')), 0.5, 1e-15);
    EXPECT_NEAR(maassen_uffink_constant(pauli_basis('Y'), pauli_basis('Z')), 0.5, 1e-15);
    EXPECT_THROW(maassen_uffink_constant(2 * pauli_basis('X'), pauli_basis('Z')), NotOrthonormal);
}

TEST(MaassenUffink, ConstantRange) {
    Rng rng(6);
    for (Index d = 2; d <= 5; ++d) {
        for (int i = 0; i < 50; ++i) {
            const double c = maassen_uffink_constant(random_basis(d, rng), random_basis(d, rng));
            EXPECT_GE(c, 1.0 / d - 1e-12);
            EXPECT_LE(c, 1.0 + 1e-12);
        }
        // Fourier basis is unbiased with respect to the computational one.
        Matrix f(d, d);
        for (Index j = 0; j < d; ++j)
            for (Index k = 0; k < d; ++k) f(j, k) = std::polar(1.0 / std::sqrt(double(d)), 2 * std::numbers::pi * j * k / d);
        EXPECT_NEAR(maassen_uffink_constant(Matrix::Identity(d, d), f), 1.0 / d, 1e-12);
    }
}

TEST(MaassenUffink, EntropicGapInBits) {
    const Matrix bx = pauli_basis('X'), bz = pauli_basis('Z');
    const UncertaintyReport r = mu_entropic_gap(bx, bz, DensityOperator::maximally_mixed(2));
    EXPECT_EQ(r.units, "bits");
    EXPECT_NEAR(r.outcome_entropies[0], 1.0, 1e-12);
    EXPECT_NEAR(r.h_a, 1.0, 1e-12);
    EXPECT_NEAR(r.bound, 2.0, 1e-12);
    EXPECT_NEAR(r.gap, 0.0, 1e-12);
    CVector z0 = CVector::Zero(2);
    z0(0) = 1.0;
    EXPECT_NEAR(mu_entropic_gap(bx, bz, DensityOperator::pure(z0)).gap, 0.0, 1e-12);
}

TEST(MaassenUffink, RandomBasesHoldAndAreTight) {
    Rng rng(7);
    for (int trial = 0; trial < 3; ++trial) {
        const Matrix bx = random_basis(2, rng), bz = random_basis(2, rng);
        double worst = kInf;
        for (int i = 0; i < 10000; ++i) {
            const DensityOperator rho = i % 2 ? hs_mixed_state(2, rng) : haar_pure_state(2, rng);
            worst = std::min(worst, mu_entropic_gap(bx, bz, rho).gap);
        }
        EXPECT_GE(worst, -1e-12);
        const double grid = mu_plane_oracle(bx, bz);
        const double est = optimal_constant_entropic(mu_datum(bx, bz), small_budget()).c_est;
        EXPECT_NEAR(est, grid, 1e-3);
        EXPECT_LE(est, std::log(maassen_uffink_constant(bx, bz)) + 1e-9);
    }
}

TEST(MaassenUffink, AnalyticEqualityAtMaximallyMixed) {
    const DensityOperator half = DensityOperator::maximally_mixed(2);
    const MuAnalyticReport r = mu_analytic_check(pauli_basis('X'), pauli_basis('Z'), half, half);
    EXPECT_NEAR(r.lhs, 0.5, 1e-12);
    EXPECT_NEAR(r.gap, 0.0, 1e-12);
    EXPECT_TRUE(r.chain_holds);
    EXPECT_EQ(r.saturated, std::vector<bool>({true, true, true}));
}

TEST(MaassenUffink, AnalyticChainOnRandomOmegas) {
    Rng rng(8);
    int strict_jensen = 0;
    for (int i = 0; i < 500; ++i) {
        const Index d = 2 + i % 3;
        const Matrix bx = random_basis(d, rng), bz = random_basis(d, rng);
        const MuAnalyticReport r = mu_analytic_check(bx, bz, hs_mixed_state(d, rng), hs_mixed_state(d, rng));
        EXPECT_GE(r.gap, -1e-9);
        EXPECT_TRUE(r.chain_holds);
        if (!r.saturated[0]) ++strict_jensen;
    }
    EXPECT_GT(strict_jensen, 0);
}

TEST(MaassenUffink, AnalyticSaturationForDiagonalOmegas) {
    // omega diagonal in the measured basis: M(omega) = omega, Jensen is tight.
    const Matrix bx = pauli_basis('X'), bz = pauli_basis('Z');
    const DensityOperator w1(Matrix(bx * diag({0.9, 0.1}) * bx.adjoint()));
    const DensityOperator w2(diag({0.7, 0.3}));
    const MuAnalyticReport r = mu_analytic_check(bx, bz, w1, w2);
    EXPECT_TRUE(r.chain_holds);
    EXPECT_EQ(r.saturated, std::vector<bool>({true, false, true}));
    EXPECT_NEAR(r.golden_thompson_bound, 0.5, 1e-12);
}

TEST(SixState, Examples) {
    CVector z0 = CVector::Zero(2);
    z0(0) = 1.0;
    const SixStateReport pure = six_state_check(DensityOperator::pure(z0));
    EXPECT_NEAR(pure.entropic.outcome_entropies[0], 1.0, 1e-12);
    EXPECT_NEAR(pure.entropic.outcome_entropies[1], 1.0, 1e-12);
    EXPECT_NEAR(pure.entropic.outcome_entropies[2], 0.0, 1e-12);
    EXPECT_NEAR(pure.entropic.gap, 0.0, 1e-12);
    EXPECT_NEAR(pure.weaker_gap, 0.5, 1e-12);
    const SixStateReport mixed = six_state_check(DensityOperator::maximally_mixed(2));
    EXPECT_NEAR(mixed.entropic.gap, 0.0, 1e-12);
    EXPECT_THROW(six_state_check(DensityOperator::maximally_mixed(3)), DimensionMismatch);
}

TEST(SixState, RandomStates) {
    Rng rng(9);
    for (int i = 0; i < 1000; ++i) {
        const SixStateReport r = six_state_check(i % 2 ? hs_mixed_state(2, rng) : haar_pure_state(2, rng));
        EXPECT_GE(r.entropic.gap, -1e-12);
        EXPECT_GE(r.weaker_gap, r.entropic.gap - 1e-12);
    }
}

TEST(SixState, AnalyticBoundAndChain) {
    Rng rng(10);
    for (int i = 0; i < 300; ++i) {
        const SixStateAnalyticReport r =
            six_state_analytic_check(hs_mixed_state(2, rng), hs_mixed_state(2, rng), hs_mixed_state(2, rng));
        EXPECT_LE(r.lhs, 0.25 + 1e-9);
        EXPECT_GE(r.gap, -1e-9);
        EXPECT_TRUE(r.chain_holds);
    }
    const DensityOperator half = DensityOperator::maximally_mixed(2);
    const SixStateAnalyticReport eq = six_state_analytic_check(half, half, half);
    EXPECT_NEAR(eq.lhs, 0.25, 1e-12);
    EXPECT_NEAR(eq.overlap_bound, 0.25, 1e-8);
}

TEST(SixState, OptimalConstantIsMinusTwoBits) {
    EXPECT_NEAR(optimal_constant_entropic(six_state_datum(), small_budget()).c_est, -2 * kLn2, 1e-6);
}

// -------------------------------------------------- min output entropy

TEST(MinOutput, IdentityIsZero) {
    const MinOutputReport r = min_output_entropy(identity_channel(3), small_budget());
    EXPECT_NEAR(r.direct, 0.0, 1e-6);
    EXPECT_NEAR(r.dual, 0.0, 1e-6);
    EXPECT_TRUE(r.agree);
}

TEST(MinOutput, DepolarizingGrid) {
    for (int i = 0; i <= 10; ++i) {
        const double p = 0.1 * i;
        const MinOutputReport r = min_output_entropy(depolarizing(p), small_budget());
        const double h = oracle::binary_entropy(p / 2);
        EXPECT_NEAR(r.direct, h, 1e-5) << p;
        EXPECT_NEAR(r.dual, h, 1e-5) << p;
        EXPECT_TRUE(r.agree) << p;
        if (i > 0 && i < 10) {
            // The dual optimizer has spectrum (1 - p/2, p/2).
            const RealVector ev = oracle::eigenvalues(r.witness_omega);
            EXPECT_NEAR(ev(1), 1 - p / 2, 1e-3) << p;
        }
    }
}

TEST(MinOutput, RandomChannelsAgree) {
    Rng rng(11);
    for (int i = 0; i < 50; ++i) {
        const Index d = 2 + i % 2;
        const Index dout = 2 + (i / 2) % 2;
        const Channel ch = random_channel(d, dout, (d + dout - 1) / dout + i % 2, rng);
        const MinOutputReport r = min_output_entropy(ch, small_budget());
        EXPECT_TRUE(r.agree) << i << ": " << r.direct << " vs " << r.dual;
        EXPECT_NEAR(oracle::entropy(ch.apply(Matrix(r.witness_state * r.witness_state.adjoint()))), r.direct, 1e-9);
    }
}

TEST(MinOutput, MatchesBLConstant) {
    const Channel ch = depolarizing(0.4);
    const double h = min_output_entropy(ch, small_budget()).direct;
    EXPECT_NEAR(optimal_constant_analytic(min_output_datum(ch), small_budget()).c_est, -h, 1e-5);
}

// ------------------------------------------------------ data processing

TEST(DpiAnalytic, IdentityIsEquality) {
    Rng rng(12);
    for (int i = 0; i < 20; ++i) {
        const DpiAnalyticReport r = dpi_analytic_check(random_pd(3, rng), identity_channel(3), random_pd(3, rng));
        EXPECT_NEAR(r.gap, 0.0, 1e-10 * (1 + r.rhs));
        EXPECT_TRUE(r.holds);
    }
}

TEST(DpiAnalytic, TraceMapIsTrivial) {
    Rng rng(13);
    const PSDOperator sigma = random_pd(3, rng);
    const DpiAnalyticReport r = dpi_analytic_check(sigma, trace_map(3), PSDOperator::identity(1));
    EXPECT_NEAR(r.gap, 0.0, 1e-12);
    EXPECT_NEAR(r.lhs, oracle::trace_re(sigma.matrix()), 1e-12);
    // With a scalar omega = w the inequality reads w tr sigma <= w tr sigma.
    const DpiAnalyticReport s = dpi_analytic_check(sigma, trace_map(3), PSDOperator(Matrix(Matrix::Constant(1, 1, 0.3))));
    EXPECT_NEAR(s.gap, 0.0, 1e-12);
    EXPECT_THROW(dpi_analytic_check(sigma, trace_map(3), PSDOperator::identity(2)), DimensionMismatch);
}

TEST(DpiAnalytic, RandomQubitTriples) {
    Rng rng(14);
    int stronger = 0;
    for (int i = 0; i < 500; ++i) {
        const Channel ch = random_channel(2, 2, 1 + i % 3, rng);
        const PSDOperator sigma = random_pd(2, rng), omega = random_pd(2, rng);
        const DpiAnalyticReport r = dpi_analytic_check(sigma, ch, omega);
        EXPECT_TRUE(r.holds);
        const Matrix lhs_exp = oracle::logm(sigma.matrix()) + ch.apply_adjoint(Matrix(oracle::logm(omega.matrix())));
        EXPECT_NEAR(r.lhs, oracle::trace_re(oracle::expm(lhs_exp)), 1e-9);
        // Jensen then Golden-Thompson.
        EXPECT_LE(r.lhs, r.jensen_bound * (1 + 1e-9));
        EXPECT_LE(r.jensen_bound, r.weaker_rhs * (1 + 1e-9));
        if (r.strictly_stronger) ++stronger;
    }
    EXPECT_GT(stronger, 0);
}

// ---------------------------------------------------------- contraction

TEST(Contraction, IdentityAndUnitary) {
    Rng rng(15);
    const DensityOperator sigma = hs_mixed_state(3, rng);
    EXPECT_NEAR(contraction_coefficient(identity_channel(3), sigma, small_budget(4)).eta, 1.0, 1e-9);
    EXPECT_NEAR(contraction_coefficient(unitary_channel(random_unitary(3, rng)), sigma, small_budget(4)).eta, 1.0, 1e-9);
}

TEST(Contraction, TraceMapIsZero) {
    Rng rng(16);
    const ContractionReport r = contraction_coefficient(trace_map(2), hs_mixed_state(2, rng), small_budget(4));
    EXPECT_NEAR(r.eta, 0.0, 1e-12);
}

TEST(Contraction, DepolarizingAtMaximallyMixed) {
    const DensityOperator half = DensityOperator::maximally_mixed(2);
    for (int i = 1; i <= 9; ++i) {
        const double p = 0.1 * i;
        const ContractionReport r = contraction_coefficient(depolarizing(p), half, small_budget(4));
        EXPECT_NEAR(r.eta, (1 - p) * (1 - p), 1e-3) << p;
        EXPECT_NEAR(r.perturbative, (1 - p) * (1 - p), 1e-9) << p;
        EXPECT_FALSE(r.boundary_flag);
    }
}

TEST(Contraction, RandomChannelsBelowOne) {
    Rng rng(17);
    for (int i = 0; i < 10; ++i) {
        const Channel ch = random_channel(2, 2, 2, rng);
        const DensityOperator sigma = hs_mixed_state(2, rng);
        const ContractionReport r = contraction_coefficient(ch, sigma, small_budget(4));
        EXPECT_LE(r.eta, 1.0 + 1e-9);
        EXPECT_GE(r.eta, 0.0);
        // Any witness respects the ratio it reports.
        const DensityOperator w(r.witness);
        const double ratio = oracle::relative_entropy(ch.apply(w.matrix()), ch.apply(sigma.matrix())) /
                             oracle::relative_entropy(w.matrix(), sigma.matrix());
        EXPECT_LE(ratio, r.eta + 1e-6);
    }
}

TEST(Contraction, SingularSigmaIsFlagged) {
    CVector z0 = CVector::Zero(2);
    z0(0) = 1.0;
    EXPECT_TRUE(contraction_coefficient(depolarizing(0.2), DensityOperator::pure(z0), small_budget(2)).boundary_flag);
}

// ----------------------------------------------------------------- SDPI

TEST(Sdpi, EtaOneIsDpi) {
    Rng rng(18);
    for (int i = 0; i < 50; ++i) {
        const Channel ch = random_channel(2, 3, 2, rng);
        const PSDOperator sigma = random_pd(2, rng), omega = random_pd(3, rng);
        EXPECT_NEAR(sdpi_analytic_check(ch, sigma, 1.0, omega).gap, dpi_analytic_check(sigma, ch, omega).gap, 1e-10);
    }
}

TEST(Sdpi, UnitalChannelAtIdentity) {
    Rng rng(19);
    for (int i = 0; i < 100; ++i) {
        const Channel ch = random_unital_channel(2, 3, rng);
        const PSDOperator omega = random_pd(2, rng);
        const SdpiAnalyticReport r = sdpi_analytic_check(ch, PSDOperator::identity(2), 1.0, omega);
        EXPECT_NEAR(r.rhs, oracle::trace_re(omega.matrix()), 1e-10);
        EXPECT_LE(r.lhs, r.rhs + 1e-9);
    }
}

TEST(Sdpi, InvalidEta) {
    const Channel ch = depolarizing(0.5);
    const PSDOperator one = PSDOperator::identity(2);
    EXPECT_THROW(sdpi_analytic_check(ch, one, 0.0, one), InvalidEta);
    EXPECT_THROW(sdpi_analytic_check(ch, one, 1.5, one), InvalidEta);
    EXPECT_THROW(depolarizing_scalar_sdpi(0.5, -0.1), InvalidEta);
}

TEST(Sdpi, DepolarizingMatrixForm) {
    Rng rng(20);
    const DensityOperator half = DensityOperator::maximally_mixed(2);
    for (int i = 1; i <= 9; ++i) {
        const double p = 0.1 * i;
        for (int j = 0; j < 50; ++j) {
            const SdpiAnalyticReport r = sdpi_analytic_check(depolarizing(p), half, (1 - p) * (1 - p), random_pd(2, rng));
            EXPECT_GE(r.gap, -1e-9 * (1 + r.rhs)) << p;
        }
    }
}

TEST(Sdpi, ScalarGridOracle) {
    for (int i = 1; i <= 9; ++i) {
        const double p = 0.1 * i;
        const double eta = (1 - p) * (1 - p);
        const ScalarSdpiReport ok = depolarizing_scalar_sdpi(p, eta);
        EXPECT_EQ(ok.points, 1001);
        // Independent evaluation at the reported minimiser.
        const double t = ok.argmin_t, u = 1 - t;
        const double lhs = std::pow(t * u, p / 2) * (std::pow(t, 1 - p) + std::pow(u, 1 - p));
        const double rhs = std::pow(2.0, (eta - 1) / eta) * std::pow(std::pow(t, eta) + std::pow(u, eta), 1 / eta);
        EXPECT_NEAR(ok.min_gap, rhs - lhs, 1e-12);
        EXPECT_GE(ok.min_gap, -1e-12) << p;
        const double below = i < 9 ? eta - 1e-2 : eta / 2;
        EXPECT_LT(depolarizing_scalar_sdpi(p, below).min_gap, 0.0) << p;
    }
}

// ------------------------------------------------------ super-additivity

TEST(Superadditivity, ProductStateHasUnitConstant) {
    Rng rng(21);
    const DensityOperator sa = hs_mixed_state(2, rng), sb = hs_mixed_state(3, rng);
    const DensityOperator sigma(kron(sa.matrix(), sb.matrix()));
    EXPECT_NEAR(superadditivity_alpha(sigma, 2, 3), 1.0, 1e-10);
    const BLDatum d = superadditivity_datum(sigma, 2, 3);
    for (int i = 0; i < 50; ++i) {
        // With alpha = 1 the gap is exactly the mutual information.
        const DensityOperator rho = hs_mixed_state(6, rng);
        const Matrix ra = oracle::partial_trace(rho.matrix(), {2, 3}, {0});
        const Matrix rb = oracle::partial_trace(rho.matrix(), {2, 3}, {1});
        const double expected = oracle::relative_entropy(rho.matrix(), kron(ra, rb));
        EXPECT_NEAR(entropic_gap(d, rho), expected, 1e-8);
    }
    const SuperadditivityReport r = superadditivity_constant(sigma, 2, 3, 200, 1);
    EXPECT_NEAR(r.alpha, 1.0, 1e-10);
    EXPECT_EQ(r.entropic.verdict, Verdict::holds_on_samples);
    EXPECT_EQ(r.analytic.verdict, Verdict::holds_on_samples);
}

TEST(Superadditivity, ClassicalCorrelated) {
    const DensityOperator sigma(diag({0.4, 0.1, 0.1, 0.4}));
    // Marginals are 1/2; the normalised operator is diag(1.6, 0.4, 0.4, 1.6).
    EXPECT_NEAR(superadditivity_alpha(sigma, 2, 2), 1.0 / 2.2, 1e-12);
    const SuperadditivityReport r = superadditivity_constant(sigma, 2, 2, 500, 2);
    EXPECT_DOUBLE_EQ(r.alpha, r.beta);
    EXPECT_EQ(r.entropic.samples, 500);
    EXPECT_EQ(r.entropic.verdict, Verdict::holds_on_samples);
    EXPECT_EQ(r.analytic.verdict, Verdict::holds_on_samples);
}

TEST(Superadditivity, SingularMarginal) {
    CVector v = CVector::Zero(4);
    v(0) = 1.0;
    EXPECT_THROW(superadditivity_alpha(DensityOperator::pure(v), 2, 2), SingularMarginal);
    EXPECT_THROW(superadditivity_alpha(DensityOperator::maximally_mixed(4), 2, 3), DimensionMismatch);
}

// ------------------------------------------------------------- duality

class ApplicationDuality : public ::testing::TestWithParam<int> {};

BLDatum application_datum(int which) {
    switch (which) {
        case 0: return shearer_datum({2, 2}, {{0}, {1}}, 1);
        case 1: return shearer_datum({2, 2, 2}, {{0, 1}, {0, 2}, {1, 2}}, 2);
        case 2: return mu_datum(pauli_basis('X'), pauli_basis('Z'));
        case 3: return six_state_datum();
        case 4: return min_output_datum(depolarizing(0.3));
        case 5: return superadditivity_datum(DensityOperator(diag({0.4, 0.1, 0.1, 0.4})), 2, 2);
        default: {
            Rng rng(22);
            return testing_data::dpi_datum(rng, 3);
        }
    }
}

TEST_P(ApplicationDuality, EntropicAndAnalyticAgree) {
    const DualityReport r = duality_crosscheck(application_datum(GetParam()), small_budget());
    EXPECT_TRUE(r.agree) << r.entropic.c_est << " vs " << r.analytic.c_est;
}

INSTANTIATE_TEST_SUITE_P(Applications, ApplicationDuality, ::testing::Range(0, 7));

}  // namespace
}  // namespace qbl
