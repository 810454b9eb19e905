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

// Named problems bundled with the tool, each with the verdict `qbl verify`
// is expected to reach on it.

#ifndef QBL_PRESETS_HPP
#define QBL_PRESETS_HPP

#include <string>
#include <vector>

#include "qbl/io.hpp"

namespace qbl::presets {

struct Entry {
    std::string name;
    std::string description;
    /// Expected exit code of `qbl verify` (0 holds, 2 violated).
    int expected_verify = 0;
};

inline const std::vector<Entry>& catalog() {
    static const std::vector<Entry> entries = {
        {"dpi-qubit", "data processing, depolarizing(0.3) at a diagonal qubit state", 0},
        {"dpi-random-qubit", "data processing, fixed random qubit channel and state", 0},
        {"mu-pauli-xz", "Maassen-Uffink for Pauli X and Z measurements (bits)", 0},
        {"six-state", "three Pauli measurements on a qubit (bits)", 0},
        {"minout-depol-0.5", "minimum output entropy of depolarizing(0.5)", 0},
        {"shearer-3qubit-pairs", "Shearer / Loomis-Whitney, 3 qubits, all pairs, p = 2", 0},
        {"subadditivity", "two qubits, singletons, p = 1", 0},
        {"conditional-shearer-bell", "conditional Shearer with a repeated subset on a Bell state", 2},
        {"superadditivity-classical", "super-additivity at a correlated diagonal two-qubit state", 0},
        {"mercedes-star", "geometric Gaussian datum, three lines at 120 degrees, squeezed state", 0},
        {"coordinate-axes", "geometric Gaussian datum, coordinate axes, product state", 0},
        {"depolarizing-contraction", "contraction coefficient of depolarizing(0.5) at 1/2", 0},
    };
    return entries;
}

inline bool exists(const std::string& name) {
    for (const Entry& e : catalog()) {
        if (e.name == name) return true;
    }
    return false;
}

namespace detail {

inline PSDOperator diag_psd(std::initializer_list<double> v) {
    RealVector d(static_cast<Index>(v.size()));
    Index i = 0;
    for (double x : v) d(i++) = x;
    return PSDOperator(Matrix(d.cast<Complex>().asDiagonal()));
}

inline io::Problem datum_problem(BLDatum d) {
    io::Problem p;
    p.type = "bl_datum";
    p.datum = std::move(d);
    return p;
}

inline GaussianState squeezed_two_mode() {
    // One squeezed and one thermal mode, then rotated so the state is correlated.
    RealVector r(2);
    r << 0.8, -0.3;
    const double th = 0.4;
    RealMatrix rot(2, 2);
    rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
    RealMatrix passive = RealMatrix::Zero(4, 4);
    passive.topLeftCorner(2, 2) = rot;
    passive.bottomRightCorner(2, 2) = rot;
    const RealMatrix s = passive * squeezer(r);
    RealVector nu(4);
    nu << 1.0, 1.5, 1.0, 1.5;
    return GaussianState(RealMatrix(s * nu.asDiagonal() * s.transpose()));
}

}  // namespace detail

/// Builds the named preset (throws SpecError for unknown names).
inline io::Problem build(const std::string& name) {
    io::Problem p;
    if (name == "dpi-qubit") {
        const Channel ch = depolarizing(0.3);
        const PSDOperator sigma = detail::diag_psd({0.7, 0.3});
        p = detail::datum_problem(BLDatum{{1.0}, {ch}, sigma, pushforward_sigmas({ch}, sigma), 0.0, name, "nats"});
    } else if (name == "dpi-random-qubit") {
        Rng rng(2026);
        const Channel ch = random_channel(2, 2, 2, rng);
        const PSDOperator sigma = random_pd(2, rng);
        p = detail::datum_problem(BLDatum{{1.0}, {ch}, sigma, pushforward_sigmas({ch}, sigma), 0.0, name, "nats"});
    } else if (name == "mu-pauli-xz") {
        BLDatum d = mu_datum(pauli_basis('X'), pauli_basis('Z'));
        d.label = name;
        p = detail::datum_problem(std::move(d));
    } else if (name == "six-state") {
        BLDatum d = six_state_datum();
        d.label = name;
        p = detail::datum_problem(std::move(d));
    } else if (name == "minout-depol-0.5") {
        BLDatum d = min_output_datum(depolarizing(0.5));
        d.c = -binary_entropy(0.25);
        d.label = name;
        p = detail::datum_problem(std::move(d));
    } else if (name == "shearer-3qubit-pairs") {
        BLDatum d = shearer_datum({2, 2, 2}, {{0, 1}, {0, 2}, {1, 2}}, 2);
        d.label = name;
        p = detail::datum_problem(std::move(d));
    } else if (name == "subadditivity") {
        BLDatum d = shearer_datum({2, 2}, {{0}, {1}}, 1);
        d.label = name;
        p = detail::datum_problem(std::move(d));
    } else if (name == "conditional-shearer-bell") {
        p.type = "conditional_shearer";
        p.conditional_shearer = io::ConditionalShearerProblem{{2, 2}, 2, {{0}, {0}, {1}}, 1, bell_with_pure_ancilla()};
    } else if (name == "superadditivity-classical") {
        const DensityOperator sigma(detail::diag_psd({0.4, 0.1, 0.1, 0.4}).matrix());
        BLDatum d = superadditivity_datum(sigma, 2, 2);
        d.label = name;
        p = detail::datum_problem(std::move(d));
    } else if (name == "mercedes-star") {
        p.type = "gaussian";
        p.gaussian = io::GaussianProblem{detail::squeezed_two_mode(), mercedes_star(), {2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0},
                                         log_time_grid(1e-2, 1e2, 25)};
    } else if (name == "coordinate-axes") {
        RealMatrix cov = RealMatrix::Zero(4, 4);
        cov.diagonal() << 2.0, 3.0, 0.5, 3.0;  // mode 1 squeezed, mode 2 thermal
        p.type = "gaussian";
        p.gaussian = io::GaussianProblem{GaussianState(cov), {Subspace::axis(2, 0), Subspace::axis(2, 1)}, {1.0, 1.0},
                                         log_time_grid(1e-2, 1e2, 25)};
    } else if (name == "depolarizing-contraction") {
        p.type = "channel_task";
        p.channel_task = io::ChannelTask{depolarizing(0.5), DensityOperator::maximally_mixed(2)};
    } else {
        throw io::SpecError("", "unknown preset \"" + name + "\"");
    }
    p.name = name;
    return p;
}

}  // namespace qbl::presets

#endif  // QBL_PRESETS_HPP
