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

// qbl: verify BL inequalities, estimate optimal constants, run Gaussian
// heat-flow trajectories and contraction coefficients.
//
// Exit codes: 0 no violation, 1 input error, 2 violation found.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "qbl/presets.hpp"

namespace {

using qbl::io::Json;

constexpr int kOk = 0;
constexpr int kInputError = 1;
constexpr int kViolated = 2;

struct Common {
    std::string spec;
    std::uint64_t seed = 0;
    std::string out;
    bool json_stdout = false;
    bool no_meta = false;
};

std::uint64_t default_seed() {
    if (const char* s = std::getenv("QBL_SEED")) {
        try {
            return std::stoull(s);
        } catch (...) {
            std::cerr << "warning: ignoring non-numeric QBL_SEED\n";
        }
    }
    return 0;
}

qbl::io::Problem resolve(const std::string& spec) {
    if (std::filesystem::exists(spec)) return qbl::io::load_problem(spec);
    if (qbl::presets::exists(spec)) {
        // Round-trip through JSON so presets take the same path as files.
        return qbl::io::read_problem(qbl::io::to_json(qbl::presets::build(spec)));
    }
    throw qbl::io::SpecError("", "\"" + spec + "\" is neither a file nor a preset (see `qbl presets`)");
}

qbl::OptimizerBudget parse_budget(const std::string& text, std::uint64_t seed) {
    qbl::OptimizerBudget b;
    b.seed = seed;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw qbl::io::SpecError("--budget", "expected key=value, got \"" + item + "\"");
        const std::string key = item.substr(0, eq);
        const std::string val = item.substr(eq + 1);
        try {
            if (key == "restarts") {
                b.restarts = std::stoi(val);
            } else if (key == "iters") {
                b.max_iterations = std::stoi(val);
            } else if (key == "tol") {
                b.tolerance = std::stod(val);
            } else if (key == "threads") {
                b.threads = static_cast<unsigned>(std::stoul(val));
            } else {
                throw qbl::io::SpecError("--budget", "unknown key \"" + key + "\"");
            }
        } catch (const std::invalid_argument&) {
            throw qbl::io::SpecError("--budget", "bad value for " + key);
        }
    }
    if (b.restarts < 1 || b.max_iterations < 1) throw qbl::io::SpecError("--budget", "restarts and iters must be >= 1");
    return b;
}

void emit(const Common& c, Json report) {
    if (!c.no_meta) {
        const auto now = std::chrono::system_clock::now().time_since_epoch();
        report["meta"] = {{"tool", "qbl"},
                          {"version", "0.1.0"},
                          {"seed", c.seed},
                          {"unix_time", std::chrono::duration_cast<std::chrono::seconds>(now).count()}};
    }
    const std::string text = report.dump(2) + "\n";
    if (c.json_stdout) std::cout << text;
    if (!c.out.empty()) {
        std::ofstream f(c.out);
        if (!f) throw qbl::io::SpecError("--out", "cannot write " + c.out);
        f << text;
    }
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream f(path);
    if (!f) throw qbl::io::SpecError("--out", "cannot write " + path);
    f << text;
}

std::string fmt(double x) { return qbl::io::format_number(x); }

// ------------------------------------------------------------------ verify

int cmd_verify(const Common& c, const std::string& form, int samples) {
    const qbl::io::Problem p = resolve(c.spec);
    Json report;
    report["spec"] = c.spec;
    bool violated = false;
    std::optional<qbl::BLDatum> datum = p.datum;
    if (p.channel_task) {
        // Plain data processing at sigma: q = 1, sigma_1 = E(sigma), C = 0.
        const auto& t = *p.channel_task;
        datum = qbl::BLDatum{{1.0}, {t.channel}, qbl::PSDOperator(t.sigma.matrix()),
                             qbl::pushforward_sigmas({t.channel}, qbl::PSDOperator(t.sigma.matrix())), 0.0, "dpi", "nats"};
    }
    if (datum) {
        if (!datum->c) throw qbl::io::SpecError("/c", "verify needs a constant; use `qbl constant` to estimate it");
        Json forms = Json::array();
        std::vector<qbl::Form> todo;
        if (form == "entropic" || form == "both") todo.push_back(qbl::Form::entropic);
        if (form == "analytic" || form == "both") todo.push_back(qbl::Form::analytic);
        for (qbl::Form f : todo) {
            qbl::SamplerConfig cfg;
            cfg.form = f;
            cfg.samples = samples;
            cfg.seed = c.seed;
            const qbl::VerificationReport r = qbl::bl_membership(*datum, cfg);
            violated = violated || r.verdict == qbl::Verdict::violated;
            std::cout << qbl::to_string(f) << ": worst gap " << fmt(r.worst_gap) << " " << r.units << " over " << r.samples
                      << " samples, " << qbl::to_string(r.verdict) << "\n";
            forms.push_back(qbl::io::to_json(r));
        }
        report["reports"] = std::move(forms);
    } else if (p.conditional_shearer) {
        const auto& cs = *p.conditional_shearer;
        const qbl::ConditionalShearerReport r = qbl::conditional_shearer_gap(cs.rho, cs.dims_a, cs.dim_b, cs.subsets, cs.p);
        violated = !r.holds;
        std::cout << "conditional Shearer: lhs " << fmt(r.lhs) << ", rhs " << fmt(r.rhs) << ", gap " << fmt(r.gap) << " "
                  << r.units << (violated ? ", violated" : ", holds") << "\n";
        report["report"] = qbl::io::to_json(r);
        if (violated) report["report"]["witness"] = qbl::io::to_json(cs.rho.matrix());
    } else if (p.gaussian) {
        const auto& g = *p.gaussian;
        const double d = qbl::geometric_bl_deficit(g.state, g.subspaces, g.q);
        violated = d < -1e-8;
        std::cout << "geometric BL deficit " << fmt(d) << " nats" << (violated ? ", violated" : ", holds") << "\n";
        report["report"] = {{"deficit", qbl::io::number(d)}, {"units", "nats"}};
    } else {
        throw qbl::io::SpecError("/type", "verify cannot handle this problem type");
    }
    report["verdict"] = violated ? "violated" : "holds_on_samples";
    emit(c, std::move(report));
    return violated ? kViolated : kOk;
}

// ---------------------------------------------------------------- constant

int cmd_constant(const Common& c, const std::string& budget_text) {
    const qbl::io::Problem p = resolve(c.spec);
    if (!p.datum) throw qbl::io::SpecError("/type", "constant takes a bl_datum problem");
    const qbl::OptimizerBudget budget = parse_budget(budget_text, c.seed);
    const qbl::DualityReport r = qbl::duality_crosscheck(*p.datum, budget);
    std::cout << "C_ent " << fmt(r.entropic.c_est) << " nats (" << fmt(qbl::to_bits(r.entropic.c_est)) << " bits)\n"
              << "C_ana " << fmt(r.analytic.c_est) << " nats (" << fmt(qbl::to_bits(r.analytic.c_est)) << " bits)\n"
              << "|difference| " << fmt(r.difference) << " vs tolerance " << fmt(r.tolerance) << ": "
              << (r.agree ? "agree" : "DISAGREE") << "\n"
              << "(estimates are lower bounds on the optimal constant)\n";
    Json report = qbl::io::to_json(r);
    report["spec"] = c.spec;
    report["budget"] = {{"restarts", budget.restarts}, {"iters", budget.max_iterations}, {"tol", budget.tolerance}};
    emit(c, std::move(report));
    return kOk;
}

// ---------------------------------------------------------------- gaussian

std::vector<double> parse_grid(const std::string& text) {
    // "lo:hi:n" (log-spaced, with t = 0 prepended) or a comma list.
    if (text.find(':') != std::string::npos) {
        std::stringstream ss(text);
        std::string a, b, n;
        std::getline(ss, a, ':');
        std::getline(ss, b, ':');
        std::getline(ss, n, ':');
        try {
            const double lo = std::stod(a);
            const double hi = std::stod(b);
            const int count = std::stoi(n);
            if (!(lo > 0.0 && hi > lo && count >= 1)) throw std::invalid_argument("range");
            return qbl::log_time_grid(lo, hi, count);
        } catch (const std::exception&) {
            throw qbl::io::SpecError("--t-grid", "expected lo:hi:n with 0 < lo < hi");
        }
    }
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            throw qbl::io::SpecError("--t-grid", "bad number \"" + item + "\"");
        }
    }
    return out;
}

int cmd_gaussian(const Common& c, const std::string& grid_text) {
    const qbl::io::Problem p = resolve(c.spec);
    if (!p.gaussian) throw qbl::io::SpecError("/type", "gaussian takes a gaussian problem");
    const auto& g = *p.gaussian;
    const qbl::GeometricCheck chk = qbl::geometric_datum_check(g.subspaces, g.q);
    if (!chk.ok) {
        throw qbl::io::SpecError("/subspaces", "not a geometric datum: " + chk.diagnostic + " (sum q_k dim V_k = " +
                                                   fmt(chk.weighted_dimension) + ")");
    }
    const std::vector<double> grid = grid_text.empty() ? g.t_grid : parse_grid(grid_text);
    const auto traj = qbl::deficit_trajectory(g.state, g.subspaces, g.q, grid);
    write_text(c.out, qbl::io::trajectory_csv(traj));
    const bool mono = qbl::monotone_non_increasing(traj);
    std::cerr << "deficit " << fmt(traj.front().deficit) << " -> " << fmt(traj.back().deficit)
              << (mono ? ", non-increasing" : ", NOT monotone") << "\n";
    bool negative = false;
    for (const auto& pt : traj) negative = negative || pt.deficit < -1e-8;
    return negative || !mono ? kViolated : kOk;
}

// ------------------------------------------------------------- contraction

int cmd_contraction(const Common& c, const std::string& budget_text, const std::string& sweep) {
    const qbl::OptimizerBudget budget = parse_budget(budget_text, c.seed);
    if (!sweep.empty()) {
        // Depolarizing sweep at the maximally mixed state.
        std::vector<double> ps = parse_grid(sweep.find(':') != std::string::npos ? "" : sweep);
        if (sweep.find(':') != std::string::npos) {
            std::stringstream ss(sweep);
            std::string a, b, n;
            std::getline(ss, a, ':');
            std::getline(ss, b, ':');
            std::getline(ss, n, ':');
            const double lo = std::stod(a), hi = std::stod(b);
            const int count = std::stoi(n);
            ps.clear();
            for (int i = 0; i < count; ++i) ps.push_back(count == 1 ? lo : lo + (hi - lo) * i / (count - 1));
        }
        std::vector<std::vector<double>> rows;
        for (double p : ps) {
            const qbl::ContractionReport r =
                qbl::contraction_coefficient(qbl::depolarizing(p), qbl::DensityOperator::maximally_mixed(2), budget);
            rows.push_back({p, r.eta, (1.0 - p) * (1.0 - p), r.perturbative, r.ascent});
        }
        write_text(c.out, qbl::io::to_csv({"p", "eta", "one_minus_p_squared", "perturbative", "ascent"}, rows));
        return kOk;
    }
    const qbl::io::Problem p = resolve(c.spec);
    if (!p.channel_task) throw qbl::io::SpecError("/type", "contraction takes a channel_task problem");
    const qbl::ContractionReport r = qbl::contraction_coefficient(p.channel_task->channel, p.channel_task->sigma, budget);
    std::cout << "eta " << fmt(r.eta) << " (perturbative " << fmt(r.perturbative) << ", ascent " << fmt(r.ascent) << ")"
              << (r.boundary_flag ? " [sigma or E(sigma) singular]" : "") << "\n";
    Json report = qbl::io::to_json(r);
    report["spec"] = c.spec;
    emit(c, std::move(report));
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"qbl: quantum Brascamp-Lieb inequalities"};
    app.require_subcommand(1);
    Common common;
    common.seed = default_seed();

    auto add_common = [&](CLI::App* sub, bool json_out) {
        sub->add_option("spec", common.spec, "problem JSON file or preset name")->required();
        sub->add_option("--seed", common.seed, "base seed (default: $QBL_SEED or 0)");
        if (json_out) {
            sub->add_option("--out", common.out, "write the JSON report here");
            sub->add_flag("--json", common.json_stdout, "print the JSON report to stdout");
            sub->add_flag("--no-meta", common.no_meta, "omit timestamp and tool metadata from the report");
        }
    };

    std::string form = "entropic";
    int samples = 1000;
    auto* verify = app.add_subcommand("verify", "sample states or operators and report the worst gap");
    add_common(verify, true);
    verify->add_option("--form", form, "entropic | analytic | both")
        ->check(CLI::IsMember({"entropic", "analytic", "both"}));
    verify->add_option("--samples", samples, "samples per form")->check(CLI::PositiveNumber);

    std::string budget = "restarts=32,iters=500";
    auto* constant = app.add_subcommand("constant", "estimate the optimal constant from both forms");
    add_common(constant, true);
    constant->add_option("--budget", budget, "restarts=N,iters=N[,tol=x,threads=N]");

    std::string grid;
    auto* gaussian = app.add_subcommand("gaussian", "heat-flow deficit trajectory as CSV");
    gaussian->add_option("spec", common.spec, "problem JSON file or preset name")->required();
    gaussian->add_option("--t-grid", grid, "lo:hi:n (log-spaced, plus t=0) or comma list");
    gaussian->add_option("--out", common.out, "CSV file (default stdout)");

    std::string sweep;
    std::string cbudget = "restarts=8,iters=300";
    auto* contraction = app.add_subcommand("contraction", "contraction coefficient of a channel at a state");
    contraction->add_option("spec", common.spec, "channel_task JSON file or preset name");
    contraction->add_option("--seed", common.seed, "base seed (default: $QBL_SEED or 0)");
    contraction->add_option("--budget", cbudget, "restarts=N,iters=N");
    contraction->add_option("--p-sweep", sweep, "depolarizing sweep lo:hi:n or comma list; writes CSV");
    contraction->add_option("--out", common.out, "report / CSV destination");
    contraction->add_flag("--json", common.json_stdout, "print the JSON report to stdout");
    contraction->add_flag("--no-meta", common.no_meta, "omit metadata");

    auto* list = app.add_subcommand("presets", "list bundled presets");
    std::string show_name;
    auto* show = app.add_subcommand("show", "print a preset as a JSON problem spec");
    show->add_option("name", show_name, "preset name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (*verify) return cmd_verify(common, form, samples);
        if (*constant) return cmd_constant(common, budget);
        if (*gaussian) return cmd_gaussian(common, grid);
        if (*contraction) {
            if (common.spec.empty() && sweep.empty()) throw qbl::io::SpecError("", "give a spec or --p-sweep");
            return cmd_contraction(common, cbudget, sweep);
        }
        if (*list) {
            for (const auto& e : qbl::presets::catalog()) {
                std::cout << e.name << "\t" << e.description << "\t(verify exit " << e.expected_verify << ")\n";
            }
            return kOk;
        }
        if (*show) {
            std::cout << qbl::io::to_json(qbl::presets::build(show_name)).dump(2) << "\n";
            return kOk;
        }
    } catch (const qbl::io::SpecError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const qbl::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kOk;
}
