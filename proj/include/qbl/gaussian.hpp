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
 * Gaussian states of m bosonic modes as (covariance, mean), with the
 * quadrature ordering Q_1..Q_m, P_1..P_m and the anticommutator
 * convention in which the vacuum has covariance 1. Geometric BL data are
 * subspaces V_k of R^m with weights q_k such that sum_k q_k Pi_k = 1; the
 * marginal onto V_k acts on both the Q and the P sector.
 */

#ifndef QBL_GAUSSIAN_HPP
#define QBL_GAUSSIAN_HPP

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "qbl/random.hpp"

namespace qbl {

/// [[0, 1_m], [-1_m, 0]]
inline RealMatrix symplectic_form(Index m) {
    RealMatrix omega = RealMatrix::Zero(2 * m, 2 * m);
    omega.topRightCorner(m, m).setIdentity();
    omega.bottomLeftCorner(m, m) = -RealMatrix::Identity(m, m);
    return omega;
}

class GaussianState {
public:
    GaussianState(RealMatrix cov, RealVector mean, double slack = 1e-9) : cov_(std::move(cov)), mean_(std::move(mean)) {
        if (cov_.rows() != cov_.cols() || cov_.rows() % 2 != 0 || cov_.rows() == 0) {
            throw InvalidState("GaussianState: covariance must be 2m x 2m");
        }
        if (mean_.size() != cov_.rows()) throw DimensionMismatch("GaussianState: mean length");
        if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * std::max(1.0, cov_.cwiseAbs().maxCoeff())) {
            throw InvalidState("GaussianState: covariance is not symmetric");
        }
        cov_ = (0.5 * (cov_ + cov_.transpose())).eval();
        const Matrix test = cov_.cast<Complex>() + Complex(0.0, 1.0) * symplectic_form(modes()).cast<Complex>();
        const double lo = Eigen::SelfAdjointEigenSolver<Matrix>(test, Eigen::EigenvaluesOnly).eigenvalues()(0);
        if (lo < -slack) throw InvalidState("GaussianState: cov + i Omega has eigenvalue " + std::to_string(lo));
    }
    explicit GaussianState(RealMatrix cov) : GaussianState(cov, RealVector::Zero(cov.rows())) {}

    static GaussianState vacuum(Index m) { return GaussianState(RealMatrix::Identity(2 * m, 2 * m)); }
    /// Single mode with mean photon number nbar: cov = (2 nbar + 1) 1.
    static GaussianState thermal(double nbar) { return GaussianState((2.0 * nbar + 1.0) * RealMatrix::Identity(2, 2)); }

    Index modes() const { return cov_.rows() / 2; }
    const RealMatrix& cov() const { return cov_; }
    const RealVector& mean() const { return mean_; }

private:
    RealMatrix cov_;
    RealVector mean_;
};

class Subspace {
public:
    explicit Subspace(RealMatrix basis, double tol = 1e-10) : basis_(std::move(basis)) {
        if (basis_.cols() == 0 || basis_.cols() > basis_.rows()) throw DimensionMismatch("Subspace: bad basis shape");
        const RealMatrix g = basis_.transpose() * basis_;
        if ((g - RealMatrix::Identity(g.rows(), g.cols())).cwiseAbs().maxCoeff() > tol) {
            throw NotOrthonormal("Subspace: basis columns are not orthonormal");
        }
    }
    /// The line through (cos theta, sin theta) in R^2.
    static Subspace line(double theta) {
        RealMatrix b(2, 1);
        b << std::cos(theta), std::sin(theta);
        return Subspace(b);
    }
    static Subspace axis(Index m, Index i) {
        RealMatrix b = RealMatrix::Zero(m, 1);
        b(i, 0) = 1.0;
        return Subspace(b);
    }

    Index ambient() const { return basis_.rows(); }
    Index dim() const { return basis_.cols(); }
    const RealMatrix& basis() const { return basis_; }
    RealMatrix projector() const { return basis_ * basis_.transpose(); }

private:
    RealMatrix basis_;
};

/// Symplectic eigenvalues (ascending, clamped to >= 1): the positive
/// eigenvalues of i cov^{1/2} Omega cov^{1/2}.
inline RealVector symplectic_eigenvalues(const GaussianState& g) {
    const Index m = g.modes();
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(g.cov());
    const RealMatrix root = es.operatorSqrt();
    const Matrix h = Complex(0.0, 1.0) * (root * symplectic_form(m) * root).cast<Complex>();
    const RealVector ev = Eigen::SelfAdjointEigenSolver<Matrix>(0.5 * (h + h.adjoint()), Eigen::EigenvaluesOnly).eigenvalues();
    // Spectrum is {-nu_j, +nu_j}; the top m entries are the nu_j.
    return ev.tail(m).cwiseMax(1.0);
}

/// (x+1) log(x+1) - x log x with f(0) = 0.
inline double bosonic_entropy(double x) {
    if (x <= 0.0) return 0.0;
    return (x + 1.0) * std::log1p(x) - x * std::log(x);
}

inline double gaussian_entropy(const GaussianState& g) {
    double h = 0.0;
    const RealVector nu = symplectic_eigenvalues(g);
    for (Index j = 0; j < nu.size(); ++j) h += bosonic_entropy(0.5 * (nu(j) - 1.0));
    return h;
}

/// Restriction of (cov, mean) to V (+) V on the Q and P sectors.
inline GaussianState gaussian_marginal(const GaussianState& g, const Subspace& v) {
    require_same_dim(v.ambient(), g.modes(), "gaussian_marginal");
    const Index m = g.modes();
    const Index k = v.dim();
    RealMatrix emb = RealMatrix::Zero(2 * m, 2 * k);
    emb.topLeftCorner(m, k) = v.basis();
    emb.bottomRightCorner(m, k) = v.basis();
    return GaussianState(RealMatrix(emb.transpose() * g.cov() * emb), RealVector(emb.transpose() * g.mean()));
}

inline GaussianState heat_flow(const GaussianState& g, double t) {
    if (!(t >= 0.0)) throw NegativeTime("heat_flow: t must be non-negative");
    return GaussianState(RealMatrix(g.cov() + t * RealMatrix::Identity(g.cov().rows(), g.cov().cols())), g.mean());
}

struct GeometricCheck {
    bool ok = false;
    /// max |sum_k q_k Pi_k - 1|
    double residual = kInf;
    /// sum_k q_k dim V_k, equal to m for a valid datum
    double weighted_dimension = 0.0;
    Index ambient = 0;
    std::string diagnostic;
};

inline GeometricCheck geometric_datum_check(const std::vector<Subspace>& subspaces, const std::vector<double>& q,
                                            double tol = 1e-9) {
    GeometricCheck rep;
    if (subspaces.empty() || subspaces.size() != q.size()) {
        rep.diagnostic = "need one positive weight per subspace";
        return rep;
    }
    rep.ambient = subspaces.front().ambient();
    RealMatrix acc = RealMatrix::Zero(rep.ambient, rep.ambient);
    for (std::size_t k = 0; k < subspaces.size(); ++k) {
        if (subspaces[k].ambient() != rep.ambient) {
            rep.diagnostic = "subspace " + std::to_string(k) + " has a different ambient dimension";
            return rep;
        }
        if (!(q[k] > 0.0)) {
            rep.diagnostic = "q_" + std::to_string(k) + " is not positive";
            return rep;
        }
        acc += q[k] * subspaces[k].projector();
        rep.weighted_dimension += q[k] * static_cast<double>(subspaces[k].dim());
    }
    rep.residual = (acc - RealMatrix::Identity(rep.ambient, rep.ambient)).cwiseAbs().maxCoeff();
    rep.ok = rep.residual <= tol;
    if (!rep.ok) rep.diagnostic = "sum_k q_k Pi_k deviates from the identity by " + std::to_string(rep.residual);
    return rep;
}

/// sum_k q_k H(marginal_k) - H(g).
inline double geometric_bl_deficit(const GaussianState& g, const std::vector<Subspace>& subspaces,
                                   const std::vector<double>& q) {
    const GeometricCheck chk = geometric_datum_check(subspaces, q);
    if (!chk.ok) throw InvalidDatum("geometric_bl_deficit: " + chk.diagnostic);
    require_same_dim(chk.ambient, g.modes(), "geometric_bl_deficit");
    double acc = -gaussian_entropy(g);
    for (std::size_t k = 0; k < subspaces.size(); ++k) acc += q[k] * gaussian_entropy(gaussian_marginal(g, subspaces[k]));
    return acc;
}

struct TrajectoryPoint {
    double t = 0.0;
    double h_total = 0.0;
    std::vector<double> h_marginals;
    double deficit = 0.0;
};

inline std::vector<TrajectoryPoint> deficit_trajectory(const GaussianState& g, const std::vector<Subspace>& subspaces,
                                                       const std::vector<double>& q, const std::vector<double>& t_grid) {
    const GeometricCheck chk = geometric_datum_check(subspaces, q);
    if (!chk.ok) throw InvalidDatum("deficit_trajectory: " + chk.diagnostic);
    require_same_dim(chk.ambient, g.modes(), "deficit_trajectory");
    std::vector<TrajectoryPoint> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        const GaussianState gt = heat_flow(g, t);
        TrajectoryPoint pt;
        pt.t = t;
        pt.h_total = gaussian_entropy(gt);
        pt.deficit = -pt.h_total;
        for (std::size_t k = 0; k < subspaces.size(); ++k) {
            pt.h_marginals.push_back(gaussian_entropy(gaussian_marginal(gt, subspaces[k])));
            pt.deficit += q[k] * pt.h_marginals.back();
        }
        out.push_back(std::move(pt));
    }
    return out;
}

/// True when each step changes the deficit by at most +slack.
inline bool monotone_non_increasing(const std::vector<TrajectoryPoint>& traj, double slack = 1e-7) {
    for (std::size_t i = 1; i < traj.size(); ++i) {
        if (traj[i].deficit > traj[i - 1].deficit + slack) return false;
    }
    return true;
}

/// n points log-spaced on [lo, hi], preceded by 0.
inline std::vector<double> log_time_grid(double lo, double hi, int n) {
    std::vector<double> out{0.0};
    for (int i = 0; i < n; ++i) out.push_back(lo * std::pow(hi / lo, n == 1 ? 1.0 : static_cast<double>(i) / (n - 1)));
    return out;
}

/// Orthogonal symplectic [[X, -Y], [Y, X]] from a Haar unitary X + iY.
inline RealMatrix random_passive_symplectic(Index m, Rng& rng) {
    const Matrix u = random_unitary(m, rng);
    RealMatrix s(2 * m, 2 * m);
    s << u.real(), -u.imag(), u.imag(), u.real();
    return s;
}

/// Single-mode squeezers diag(e^r, e^-r) on each (Q_j, P_j).
inline RealMatrix squeezer(const RealVector& r) {
    const Index m = r.size();
    RealMatrix s = RealMatrix::Zero(2 * m, 2 * m);
    for (Index j = 0; j < m; ++j) {
        s(j, j) = std::exp(r(j));
        s(m + j, m + j) = std::exp(-r(j));
    }
    return s;
}

/// O_1 Z O_2 with passive O_i and squeezing |r_j| <= max_squeeze.
inline RealMatrix random_symplectic(Index m, Rng& rng, double max_squeeze = 1.0) {
    std::uniform_real_distribution<double> u(-max_squeeze, max_squeeze);
    RealVector r(m);
    for (Index j = 0; j < m; ++j) r(j) = u(rng);
    return random_passive_symplectic(m, rng) * squeezer(r) * random_passive_symplectic(m, rng);
}

/// S diag(nu, nu) S^T with symplectic eigenvalues nu_j in [1, 1 + max_thermal].
inline GaussianState random_gaussian_state(Index m, Rng& rng, double max_squeeze = 1.0, double max_thermal = 3.0) {
    std::uniform_real_distribution<double> u(0.0, max_thermal);
    RealVector nu(2 * m);
    for (Index j = 0; j < m; ++j) nu(j) = nu(m + j) = 1.0 + u(rng);
    const RealMatrix s = random_symplectic(m, rng, max_squeeze);
    const RealMatrix cov = s * nu.asDiagonal() * s.transpose();
    return GaussianState(RealMatrix(0.5 * (cov + cov.transpose())));
}

/// Three lines in R^2 at 0, 120 and 240 degrees with q = 2/3 each.
inline std::vector<Subspace> mercedes_star() {
    const double pi = std::numbers::pi;
    return {Subspace::line(0.0), Subspace::line(2.0 * pi / 3.0), Subspace::line(4.0 * pi / 3.0)};
}

}  // namespace qbl

#endif  // QBL_GAUSSIAN_HPP
