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

#include <cmath>
#include <numbers>

#include "oracle.hpp"
#include "qbl/channel.hpp"
#include "qbl/random.hpp"

namespace qbl {
namespace {

Matrix diag(std::initializer_list<double> v) {
    RealVector d(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) d(i++) = x;
    return d.cast<Complex>().asDiagonal();
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

TEST(HermitianOperator, SymmetrizesSmallDeviation) {
    Matrix m = diag({1.0, 2.0});
    m(0, 1) = Complex(1e-12, 0.0);
    const HermitianOperator h(m);
    EXPECT_EQ(max_abs(h.matrix() - h.matrix().adjoint()), 0.0);
}

TEST(HermitianOperator, RejectsNonHermitian) {
    Matrix m = diag({1.0, 2.0});
    m(0, 1) = 0.5;
    EXPECT_THROW(HermitianOperator{m}, NotHermitian);
    EXPECT_THROW(HermitianOperator(Matrix(2, 3)), DimensionMismatch);
}

TEST(PSDOperator, SupportRankAndSlack) {
    const PSDOperator p(diag({1.0, 0.0, -1e-12}));
    EXPECT_EQ(p.support_rank(), 1);
    EXPECT_THROW(PSDOperator(diag({1.0, -1e-3})), NotPositive);
}

TEST(DensityOperator, Renormalizes) {
    const DensityOperator rho(diag({2.0, 6.0}));
    EXPECT_NEAR(rho.trace(), 1.0, 1e-15);
    EXPECT_NEAR(rho.matrix()(1, 1).real(), 0.75, 1e-15);
    EXPECT_THROW(DensityOperator(Matrix::Zero(2, 2)), ZeroTrace);
}

TEST(MatrixLog, Examples) {
    EXPECT_LT(max_abs(matrix_log(PSDOperator::identity(2)).finite_part()), 1e-15);
    const double e = std::exp(1.0);
    EXPECT_LT(max_abs(matrix_log(PSDOperator(diag({e, e * e}))).finite_part() - diag({1.0, 2.0})), 1e-14);
    EXPECT_THROW(matrix_log(PSDOperator(Matrix::Zero(2, 2))), ZeroOperator);
}

TEST(MatrixLog, KernelFlag) {
    const ExtendedHermitian l = matrix_log(PSDOperator(diag({0.5, 0.0})));
    ASSERT_TRUE(l.has_kernel());
    EXPECT_EQ(l.finite_rank(), 1);
    EXPECT_NEAR(l.kernel_projector()(1, 1).real(), 1.0, 1e-14);
    EXPECT_NEAR(l.finite_part()(0, 0).real(), std::log(0.5), 1e-14);
}

TEST(MatrixLog, RoundTripAgainstPade) {
    Rng rng(11);
    for (int trial = 0; trial < 50; ++trial) {
        const PSDOperator a = random_pd(3, rng);
        const Matrix log_a = matrix_log(a).finite_part();
        EXPECT_LT(max_abs(log_a - oracle::logm(a.matrix())), 1e-9);
        EXPECT_LT(max_abs(matrix_exp(HermitianOperator(log_a)).matrix() - a.matrix()), 1e-9);
    }
}

TEST(MatrixLog, RoundTripIllConditioned) {
    Rng rng(12);
    for (int trial = 0; trial < 20; ++trial) {
        const Matrix u = random_unitary(4, rng);
        const Matrix a = u * diag({1.0, 1e-3, 1e-6, 1e-8}) * u.adjoint();
        const PSDOperator pa(a);
        const PSDOperator back = matrix_exp(HermitianOperator(matrix_log(pa).finite_part()));
        EXPECT_LT(max_abs(back.matrix() - a), 1e-9);
    }
}

TEST(MatrixExp, Examples) {
    EXPECT_LT(max_abs(matrix_exp(HermitianOperator::zero(2)).matrix() - Matrix::Identity(2, 2)), 1e-15);
    EXPECT_LT(max_abs(matrix_exp(HermitianOperator(diag({0.0, std::log(2.0)}))).matrix() - diag({1.0, 2.0})), 1e-14);
}

TEST(MatrixExp, SpectralMapping) {
    Rng rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const HermitianOperator h = random_hermitian(4, rng);
        const RealVector in = oracle::eigenvalues(h.matrix());
        const RealVector out = oracle::eigenvalues(matrix_exp(h).matrix());
        for (Index i = 0; i < in.size(); ++i) EXPECT_NEAR(out(i), std::exp(in(i)), 1e-10 * std::exp(in(i)));
        EXPECT_LT(max_abs(matrix_exp(h).matrix() - oracle::expm(h.matrix())), 1e-10);
    }
}

TEST(TraceExpSum, Examples) {
    EXPECT_NEAR(trace_exp_sum({ExtendedHermitian(HermitianOperator::zero(3))}), 3.0, 1e-14);
    const double l2 = std::log(2.0);
    const std::vector<ExtendedHermitian> hs = {HermitianOperator(diag({l2, 0.0})), HermitianOperator(diag({0.0, l2}))};
    EXPECT_NEAR(trace_exp_sum(hs), 4.0, 1e-13);
    EXPECT_THROW(trace_exp_sum({ExtendedHermitian(HermitianOperator::zero(2)), ExtendedHermitian(HermitianOperator::zero(3))}),
                 DimensionMismatch);
}

TEST(TraceExpSum, KernelsUnion) {
    // -inf on span(e1) in one term, on span(e2) in another: empty complement.
    const std::vector<ExtendedHermitian> disjoint = {matrix_log(PSDOperator(diag({0.0, 1.0}))),
                                                     matrix_log(PSDOperator(diag({1.0, 0.0})))};
    EXPECT_EQ(trace_exp_sum(disjoint), 0.0);
    const std::vector<ExtendedHermitian> shared = {matrix_log(PSDOperator(diag({2.0, 0.0}))),
                                                   HermitianOperator(diag({std::log(3.0), 5.0}))};
    EXPECT_NEAR(trace_exp_sum(shared), 6.0, 1e-13);
}

class GoldenThompson : public ::testing::TestWithParam<int> {};

TEST_P(GoldenThompson, RandomPairs) {
    const Index d = GetParam();
    Rng rng(100 + static_cast<std::uint64_t>(d));
    for (int trial = 0; trial < 200; ++trial) {
        const HermitianOperator h1 = random_hermitian(d, rng);
        const HermitianOperator h2 = random_hermitian(d, rng);
        const double lhs = trace_exp_sum({ExtendedHermitian(h1), ExtendedHermitian(h2)});
        const double rhs = oracle::trace_re(oracle::expm(h1.matrix()) * oracle::expm(h2.matrix()));
        EXPECT_LE(lhs, rhs + 1e-9) << "d=" << d << " trial " << trial;
    }
}

INSTANTIATE_TEST_SUITE_P(Dims, GoldenThompson, ::testing::Values(2, 3, 4, 8));

TEST(Schatten, Examples) {
    EXPECT_NEAR(schatten(PSDOperator::identity(4), 1.0), 4.0, 1e-14);
    EXPECT_NEAR(schatten(PSDOperator(diag({3.0, 4.0})), kInf), 4.0, 1e-14);
    EXPECT_NEAR(schatten(PSDOperator(diag({3.0, 4.0})), 2.0), 5.0, 1e-14);
    EXPECT_THROW(schatten(PSDOperator::identity(2), 0.0), InvalidExponent);
    EXPECT_THROW(schatten(PSDOperator::identity(2), -1.0), InvalidExponent);
}

TEST(Schatten, HalfSuperadditive) {
    Rng rng(21);
    for (int trial = 0; trial < 200; ++trial) {
        const PSDOperator a = random_pd(3, rng, 0.0);
        const PSDOperator b = random_pd(3, rng, 0.0);
        const PSDOperator s(Matrix(a.matrix() + b.matrix()));
        EXPECT_GE(schatten(s, 0.5), schatten(a, 0.5) + schatten(b, 0.5) - 1e-9);
    }
}

TEST(WeightedAntinorm, Examples) {
    Rng rng(31);
    const PSDOperator w = random_pd(3, rng);
    EXPECT_NEAR(weighted_antinorm(w, PSDOperator::identity(3), 1.0), w.trace(), 1e-12);
    const double a = 0.3, b = 1.7, s = 0.4, t = 2.5;
    EXPECT_NEAR(weighted_antinorm(PSDOperator(diag({a, b})), PSDOperator(diag({s, t})), 1.0), a * s + b * t, 1e-12);
    EXPECT_THROW(weighted_antinorm(w, PSDOperator::identity(3), 0.0), InvalidExponent);
}

TEST(WeightedAntinorm, NormFormMatchesTraceForm) {
    // (tr exp(p log w + log s))^{1/p} = ||exp(log w + (1/p) log s)||_p
    Rng rng(32);
    for (int trial = 0; trial < 50; ++trial) {
        const PSDOperator w = random_pd(3, rng);
        const PSDOperator s = random_pd(3, rng);
        for (double p : {0.3, 0.5, 1.0, 2.0}) {
            const Matrix m = oracle::expm(oracle::logm(w.matrix()) + (1.0 / p) * oracle::logm(s.matrix()));
            const Eigen::JacobiSVD<Matrix> svd(m);
            const double norm = std::pow(svd.singularValues().array().pow(p).sum(), 1.0 / p);
            EXPECT_NEAR(weighted_antinorm(w, s, p), norm, 1e-9 * norm);
            EXPECT_NEAR(weighted_antinorm(w, s, p), oracle::weighted_functional(w.matrix(), s.matrix(), p), 1e-9 * norm);
        }
    }
}

TEST(WeightedAntinorm, SuperadditiveForSmallP) {
    Rng rng(33);
    for (double p : {0.25, 0.5, 1.0}) {
        for (int trial = 0; trial < 200; ++trial) {
            const PSDOperator w1 = random_pd(2, rng, 0.01);
            const PSDOperator w2 = random_pd(2, rng, 0.01);
            const PSDOperator s = random_pd(2, rng);
            const PSDOperator sum(Matrix(w1.matrix() + w2.matrix()));
            EXPECT_GE(weighted_antinorm(sum, s, p),
                      weighted_antinorm(w1, s, p) + weighted_antinorm(w2, s, p) - 1e-9)
                << "p=" << p;
        }
    }
}

TEST(WeightedAntinorm, Homogeneous) {
    Rng rng(34);
    for (int trial = 0; trial < 100; ++trial) {
        const PSDOperator w = random_pd(3, rng);
        const PSDOperator s = random_pd(3, rng);
        const double alpha = std::exp(std::uniform_real_distribution<double>(-3.0, 3.0)(rng));
        for (double p : {0.5, 1.0, 3.0}) {
            const double base = weighted_antinorm(w, s, p);
            EXPECT_NEAR(weighted_antinorm(PSDOperator(Matrix(alpha * w.matrix())), s, p), alpha * base,
                        1e-10 * alpha * base);
        }
    }
}

TEST(WeightedAntinorm, ConvexityFailsAboveOne) {
    // Stored instances at p = 2: one breaks sub-additivity, one super-additivity.
    const auto fx = oracle::load_fixture("weighted_functional_p2.json");
    const double p = fx["p"].get<double>();
    for (const char* key : {"subadditivity_violation", "superadditivity_violation"}) {
        const auto& e = fx[key];
        const Matrix w = oracle::read_matrix(e["w"]);
        const Matrix w2 = oracle::read_matrix(e["w_prime"]);
        const Matrix s = oracle::read_matrix(e["sigma"]);
        const double sum = weighted_antinorm(PSDOperator(Matrix(w + w2)), PSDOperator(s), p);
        const double parts = weighted_antinorm(PSDOperator(w), PSDOperator(s), p) +
                             weighted_antinorm(PSDOperator(w2), PSDOperator(s), p);
        EXPECT_NEAR(sum, e["sum"].get<double>(), 1e-9 * sum);
        EXPECT_NEAR(parts, e["parts"].get<double>(), 1e-9 * parts);
        EXPECT_NEAR(sum, oracle::weighted_functional(w + w2, s, p), 1e-8 * sum);
        if (std::string(key) == "subadditivity_violation") {
            EXPECT_GT(sum, parts * (1.0 + 1e-3));
        } else {
            EXPECT_LT(sum, parts * (1.0 - 1e-3));
        }
    }
}

TEST(WeightedAntinorm, SearchFindsBothViolations) {
    Rng rng(7);
    bool sub = false;
    bool super = false;
    for (int i = 0; i < 20000 && !(sub && super); ++i) {
        const PSDOperator w1 = random_pd(2, rng, 0.0);
        const PSDOperator w2 = random_pd(2, rng, 0.0);
        const PSDOperator s = random_pd(2, rng, 0.0);
        const double a = weighted_antinorm(w1, s, 2.0) + weighted_antinorm(w2, s, 2.0);
        const double c = weighted_antinorm(PSDOperator(Matrix(w1.matrix() + w2.matrix())), s, 2.0);
        sub = sub || c > a * (1.0 + 1e-3);
        super = super || c < a * (1.0 - 1e-3);
    }
    EXPECT_TRUE(sub);
    EXPECT_TRUE(super);
}

TEST(LiebTriple, Examples) {
    const PSDOperator id = PSDOperator::identity(2);
    EXPECT_NEAR(lieb_triple_integral(id, id, id), 2.0, 1e-9);
    const PSDOperator a(diag({0.3, 2.0, 1.1}));
    const PSDOperator b(diag({1.5, 0.2, 0.7}));
    const PSDOperator c(diag({0.9, 4.0, 0.05}));
    EXPECT_NEAR(lieb_triple_integral(a, b, c), 0.3 * 1.5 * 0.9 + 2.0 * 0.2 * 4.0 + 1.1 * 0.7 * 0.05, 1e-9);
    EXPECT_THROW(lieb_triple_integral(id, id, PSDOperator(diag({1.0, 0.0}))), SingularC);
}

TEST(LiebTriple, ClosedFormAndBound) {
    Rng rng(41);
    std::uniform_int_distribution<Index> dim(2, 4);
    for (int trial = 0; trial < 200; ++trial) {
        const Index d = dim(rng);
        const PSDOperator a = random_pd(d, rng);
        const PSDOperator b = random_pd(d, rng);
        const PSDOperator c = random_pd(d, rng);
        const double integral = lieb_triple_integral(a, b, c);
        EXPECT_NEAR(integral, oracle::lieb_closed_form(a.matrix(), b.matrix(), c.matrix()), 1e-8);
        const double lhs = oracle::trace_re(
            oracle::expm(oracle::logm(a.matrix()) + oracle::logm(b.matrix()) + oracle::logm(c.matrix())));
        EXPECT_LE(lhs, integral + 1e-8);
    }
}

TEST(OperatorJensen, IdentityMap) {
    Rng rng(51);
    const LinearMap id = [](const Matrix& x) { return x; };
    const JensenResult r = operator_jensen_check(id, random_pd(3, rng));
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.min_eigenvalue, 0.0, 1e-12);
}

TEST(OperatorJensen, Pinching) {
    Rng rng(52);
    const Channel mz = measurement_channel(pauli_basis('Z'));
    const LinearMap m = [&](const Matrix& x) { return mz.apply_adjoint(x); };
    for (int trial = 0; trial < 100; ++trial) EXPECT_TRUE(operator_jensen_check(m, random_pd(2, rng)).holds);
}

TEST(OperatorJensen, FullDepolarizingDiagonal) {
    const LinearMap m = [](const Matrix& x) {
        return Matrix(x.trace() / static_cast<double>(x.rows()) * Matrix::Identity(x.rows(), x.cols()));
    };
    const JensenResult r = operator_jensen_check(m, PSDOperator(diag({1.0, 4.0})));
    EXPECT_TRUE(r.holds);
    EXPECT_NEAR(r.min_eigenvalue, std::log(2.5) - std::log(2.0), 1e-12);
}

TEST(OperatorJensen, RejectsNonUnital) {
    const LinearMap m = [](const Matrix& x) { return Matrix(2.0 * x); };
    EXPECT_THROW(operator_jensen_check(m, PSDOperator::identity(2)), NotUnital);
}

}  // namespace
}  // namespace qbl
