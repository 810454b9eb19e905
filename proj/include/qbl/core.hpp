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

#ifndef QBL_CORE_HPP
#define QBL_CORE_HPP

#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace qbl {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Every tolerance used by the library. Functions take one by const
/// reference with the defaults below, so tests can tighten or loosen a
/// single knob without touching call sites.
struct NumericPolicy {
    /// Relative deviation from Hermiticity accepted on input before the
    /// matrix is symmetrized; anything larger is an error.
    double hermitian_input = 1e-8;
    /// Relative threshold for the support: eps_supp = support * max(1, lambda_max).
    double support = 1e-10;
    /// Accepted absolute deviation of a density operator's trace from 1.
    double trace = 1e-10;
    /// Trace-preservation check on Kraus families.
    double trace_preserving = 1e-10;
    /// Negative eigenvalue slack for PSD certificates (Choi, Jensen).
    double psd_slack = 1e-9;
    /// ||(1 - P_tau) P_omega||_inf bound declaring omega << tau.
    double support_inclusion = 1e-8;
    /// Absolute tolerance of the adaptive quadrature.
    double quadrature = 1e-9;
    /// Orthonormality check on bases and isometries.
    double orthonormal = 1e-10;
    /// A gap >= -membership counts as "inequality holds".
    double membership = 1e-9;
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// One type per failure kind so callers can catch precisely.
struct DimensionMismatch : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotPositive : Error { using Error::Error; };
struct ZeroOperator : Error { using Error::Error; };
struct ZeroTrace : Error { using Error::Error; };
struct InvalidExponent : Error { using Error::Error; };
struct SingularC : Error { using Error::Error; };
struct NotUnital : Error { using Error::Error; };
struct BadPartition : Error { using Error::Error; };
struct NotOrthonormal : Error { using Error::Error; };
struct InvalidProbability : Error { using Error::Error; };
struct NotTracePreserving : Error { using Error::Error; };
struct NotCompletelyPositive : Error { using Error::Error; };
struct Diverged : Error { using Error::Error; };
struct CoverViolation : Error { using Error::Error; };
struct SingularMarginal : Error { using Error::Error; };
struct InvalidState : Error { using Error::Error; };
struct NegativeTime : Error { using Error::Error; };
struct InvalidDatum : Error { using Error::Error; };
struct InvalidEta : Error { using Error::Error; };

inline void require_same_dim(Index a, Index b, const char* what) {
    if (a != b) {
        throw DimensionMismatch(std::string(what) + ": dimension " + std::to_string(a) +
                                " vs " + std::to_string(b));
    }
}

/// Converts a value in nats to bits.
inline double to_bits(double nats) { return nats / std::log(2.0); }

}  // namespace qbl

#endif  // QBL_CORE_HPP
