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
 * JSON problem specs and reports. Complex matrices are arrays of rows,
 * each entry a [re, im] pair (a bare number is read as a real entry).
 * Non-finite reals are written as the strings "inf", "-inf" and "nan".
 *
 *   {"type": "bl_datum", "channels": [{"kraus": [M, ...], "signs": [...]}],
 *    "sigma": M, "sigmas": [M, ...], "q": [...], "c": number | null,
 *    "units": "nats" | "bits"}
 *   {"type": "gaussian", "cov": R, "mean": [...], "subspaces": [R, ...],
 *    "q": [...], "t_grid": [...]}
 *   {"type": "channel_task", "channel": {...}, "sigma": M}
 *   {"type": "conditional_shearer", "dims_a": [...], "dim_b": d,
 *    "subsets": [[...], ...], "p": p, "rho": M}
 */

#ifndef QBL_IO_HPP
#define QBL_IO_HPP

#include <cstdio>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "qbl/applications.hpp"
#include "qbl/gaussian.hpp"

namespace qbl::io {

using Json = nlohmann::json;

/// Malformed input; `path` is the JSON pointer of the offending field.
class SpecError : public Error {
public:
    SpecError(std::string path, const std::string& what)
        : Error("at " + (path.empty() ? std::string("/") : path) + ": " + what), path_(std::move(path)) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

// ----------------------------------------------------------------- numbers

inline Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

inline double read_number(const Json& j, const std::string& path) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return kInf;
        if (s == "-inf") return -kInf;
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw SpecError(path, "expected a number");
}

/// 12 significant digits, period decimal separator.
inline std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

// ---------------------------------------------------------------- matrices

inline Json to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const RealMatrix& m) {
    Json rows = Json::array();
    for (Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline Json to_json(const RealVector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

inline Json to_json(const CVector& v) {
    Json out = Json::array();
    for (Index i = 0; i < v.size(); ++i) out.push_back(Json::array({v(i).real(), v(i).imag()}));
    return out;
}

inline const Json& field(const Json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw SpecError(path, "expected an object");
    if (!j.contains(key)) throw SpecError(path + "/" + key, "missing field");
    return j.at(key);
}

inline Complex read_entry(const Json& e, const std::string& path) {
    if (e.is_number()) return {e.get<double>(), 0.0};
    if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        return {e[0].get<double>(), e[1].get<double>()};
    }
    throw SpecError(path, "expected [re, im] or a real number");
}

inline Matrix read_matrix(const Json& j, const std::string& path) {
    if (!j.is_array() || j.empty()) throw SpecError(path, "expected a non-empty array of rows");
    const Index rows = static_cast<Index>(j.size());
    Index cols = -1;
    Matrix m;
    for (Index i = 0; i < rows; ++i) {
        const Json& row = j[static_cast<std::size_t>(i)];
        const std::string rp = path + "/" + std::to_string(i);
        if (!row.is_array() || row.empty()) throw SpecError(rp, "expected a non-empty row");
        if (cols < 0) {
            cols = static_cast<Index>(row.size());
            m.resize(rows, cols);
        } else if (static_cast<Index>(row.size()) != cols) {
            throw SpecError(rp, "row length " + std::to_string(row.size()) + " differs from " + std::to_string(cols));
        }
        for (Index c = 0; c < cols; ++c) m(i, c) = read_entry(row[static_cast<std::size_t>(c)], rp + "/" + std::to_string(c));
    }
    return m;
}

inline RealMatrix read_real_matrix(const Json& j, const std::string& path) {
    const Matrix m = read_matrix(j, path);
    if (m.imag().cwiseAbs().maxCoeff() > 0.0) throw SpecError(path, "expected a real matrix");
    return m.real();
}

inline std::vector<double> read_reals(const Json& j, const std::string& path) {
    if (!j.is_array()) throw SpecError(path, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(read_number(j[i], path + "/" + std::to_string(i)));
    return out;
}

inline std::vector<Index> read_indices(const Json& j, const std::string& path) {
    if (!j.is_array()) throw SpecError(path, "expected an array of integers");
    std::vector<Index> out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_number_integer()) throw SpecError(path + "/" + std::to_string(i), "expected an integer");
        out.push_back(j[i].get<Index>());
    }
    return out;
}

/// Runs a constructor, re-throwing library errors with the JSON path attached.
template <class F>
auto at_path(const std::string& path, F f) -> decltype(f()) {
    try {
        return f();
    } catch (const SpecError&) {
        throw;
    } catch (const Error& e) {
        throw SpecError(path, e.what());
    }
}

// ---------------------------------------------------------------- channels

inline Json to_json(const Channel& ch) {
    Json j;
    Json kraus = Json::array();
    for (const Matrix& k : ch.kraus()) kraus.push_back(to_json(k));
    j["kraus"] = std::move(kraus);
    if (ch.is_positive_only()) j["signs"] = ch.signs();
    if (!ch.label().empty()) j["label"] = ch.label();
    return j;
}

inline Channel read_channel(const Json& j, const std::string& path) {
    const Json& kj = field(j, "kraus", path);
    if (!kj.is_array() || kj.empty()) throw SpecError(path + "/kraus", "expected a non-empty array of matrices");
    std::vector<Matrix> kraus;
    for (std::size_t i = 0; i < kj.size(); ++i) kraus.push_back(read_matrix(kj[i], path + "/kraus/" + std::to_string(i)));
    const std::string label = j.contains("label") && j["label"].is_string() ? j["label"].get<std::string>() : "";
    if (j.contains("signs")) {
        std::vector<double> signs = read_reals(j["signs"], path + "/signs");
        return at_path(path, [&] { return Channel::positive_only(std::move(kraus), std::move(signs), label); });
    }
    return at_path(path, [&] { return Channel(std::move(kraus), label); });
}

// ------------------------------------------------------------------- datum

inline Json to_json(const BLDatum& d) {
    Json j;
    j["type"] = "bl_datum";
    if (!d.label.empty()) j["label"] = d.label;
    Json ch = Json::array();
    for (const Channel& c : d.channels) ch.push_back(to_json(c));
    j["channels"] = std::move(ch);
    j["sigma"] = to_json(d.sigma.matrix());
    Json s = Json::array();
    for (const PSDOperator& x : d.sigmas) s.push_back(to_json(x.matrix()));
    j["sigmas"] = std::move(s);
    j["q"] = d.q;
    j["c"] = d.c ? number(*d.c) : Json(nullptr);
    j["units"] = d.units;
    return j;
}

inline BLDatum read_datum(const Json& j, const std::string& path = "") {
    const Json& cj = field(j, "channels", path);
    if (!cj.is_array() || cj.empty()) throw SpecError(path + "/channels", "expected a non-empty array");
    std::vector<Channel> channels;
    for (std::size_t i = 0; i < cj.size(); ++i) channels.push_back(read_channel(cj[i], path + "/channels/" + std::to_string(i)));
    const Matrix sm = read_matrix(field(j, "sigma", path), path + "/sigma");
    PSDOperator sigma = at_path(path + "/sigma", [&] { return PSDOperator(sm); });
    const Json& sj = field(j, "sigmas", path);
    if (!sj.is_array()) throw SpecError(path + "/sigmas", "expected an array of matrices");
    std::vector<PSDOperator> sigmas;
    for (std::size_t i = 0; i < sj.size(); ++i) {
        const std::string sp = path + "/sigmas/" + std::to_string(i);
        const Matrix m = read_matrix(sj[i], sp);
        sigmas.push_back(at_path(sp, [&] { return PSDOperator(m); }));
    }
    std::vector<double> q = read_reals(field(j, "q", path), path + "/q");
    std::optional<double> c;
    if (j.contains("c") && !j["c"].is_null()) c = read_number(j["c"], path + "/c");
    BLDatum d{std::move(q), std::move(channels), std::move(sigma), std::move(sigmas), c,
              j.value("label", std::string()), j.value("units", std::string("nats"))};
    if (d.units != "nats" && d.units != "bits") throw SpecError(path + "/units", "expected \"nats\" or \"bits\"");
    if (d.q.size() != d.channels.size()) throw SpecError(path + "/q", "need one q per channel");
    if (d.sigmas.size() != d.channels.size()) throw SpecError(path + "/sigmas", "need one sigma_k per channel");
    for (std::size_t k = 0; k < d.q.size(); ++k) {
        if (!(d.q[k] > 0.0)) throw SpecError(path + "/q/" + std::to_string(k), "q_k must be positive");
        if (d.channels[k].dim_in() != d.sigma.dim()) {
            throw SpecError(path + "/channels/" + std::to_string(k), "input dimension differs from sigma");
        }
        if (d.sigmas[k].dim() != d.channels[k].dim_out()) {
            throw SpecError(path + "/sigmas/" + std::to_string(k), "dimension differs from the channel output");
        }
    }
    at_path(path, [&] {
        d.validate();
        return 0;
    });
    return d;
}

// ---------------------------------------------------------------- problems

struct GaussianProblem {
    GaussianState state = GaussianState::vacuum(1);
    std::vector<Subspace> subspaces;
    std::vector<double> q;
    std::vector<double> t_grid;
};

struct ChannelTask {
    Channel channel = identity_channel(2);
    DensityOperator sigma = DensityOperator::maximally_mixed(2);
};

struct ConditionalShearerProblem {
    std::vector<Index> dims_a;
    Index dim_b = 1;
    std::vector<std::vector<Index>> subsets;
    int p = 1;
    DensityOperator rho = DensityOperator::maximally_mixed(1);
};

struct Problem {
    std::string type;
    std::string name;
    std::optional<BLDatum> datum;
    std::optional<GaussianProblem> gaussian;
    std::optional<ChannelTask> channel_task;
    std::optional<ConditionalShearerProblem> conditional_shearer;
};

inline Json to_json(const GaussianProblem& g) {
    Json j;
    j["type"] = "gaussian";
    j["cov"] = to_json(g.state.cov());
    j["mean"] = to_json(g.state.mean());
    Json subs = Json::array();
    for (const Subspace& s : g.subspaces) subs.push_back(to_json(s.basis()));
    j["subspaces"] = std::move(subs);
    j["q"] = g.q;
    j["t_grid"] = g.t_grid;
    return j;
}

inline Json to_json(const ChannelTask& t) {
    Json j;
    j["type"] = "channel_task";
    j["channel"] = to_json(t.channel);
    j["sigma"] = to_json(t.sigma.matrix());
    return j;
}

inline Json to_json(const ConditionalShearerProblem& c) {
    Json j;
    j["type"] = "conditional_shearer";
    j["dims_a"] = c.dims_a;
    j["dim_b"] = c.dim_b;
    j["subsets"] = c.subsets;
    j["p"] = c.p;
    j["rho"] = to_json(c.rho.matrix());
    return j;
}

inline Json to_json(const Problem& p) {
    Json j;
    if (p.datum) j = to_json(*p.datum);
    if (p.gaussian) j = to_json(*p.gaussian);
    if (p.channel_task) j = to_json(*p.channel_task);
    if (p.conditional_shearer) j = to_json(*p.conditional_shearer);
    if (!p.name.empty()) j["preset"] = p.name;
    return j;
}

inline GaussianProblem read_gaussian(const Json& j, const std::string& path = "") {
    const RealMatrix cov = read_real_matrix(field(j, "cov", path), path + "/cov");
    RealVector mean = RealVector::Zero(cov.rows());
    if (j.contains("mean")) {
        const std::vector<double> m = read_reals(j["mean"], path + "/mean");
        if (static_cast<Index>(m.size()) != cov.rows()) throw SpecError(path + "/mean", "length differs from cov");
        for (std::size_t i = 0; i < m.size(); ++i) mean(static_cast<Index>(i)) = m[i];
    }
    GaussianProblem g{at_path(path + "/cov", [&] { return GaussianState(cov, mean); }), {}, {}, {}};
    const Json& sj = field(j, "subspaces", path);
    if (!sj.is_array() || sj.empty()) throw SpecError(path + "/subspaces", "expected a non-empty array of bases");
    for (std::size_t i = 0; i < sj.size(); ++i) {
        const std::string sp = path + "/subspaces/" + std::to_string(i);
        const RealMatrix b = read_real_matrix(sj[i], sp);
        g.subspaces.push_back(at_path(sp, [&] { return Subspace(b); }));
    }
    g.q = read_reals(field(j, "q", path), path + "/q");
    if (j.contains("t_grid")) {
        g.t_grid = read_reals(j["t_grid"], path + "/t_grid");
    } else {
        g.t_grid = log_time_grid(1e-2, 1e2, 25);
    }
    return g;
}

inline ChannelTask read_channel_task(const Json& j, const std::string& path = "") {
    Channel ch = read_channel(field(j, "channel", path), path + "/channel");
    const Matrix s = read_matrix(field(j, "sigma", path), path + "/sigma");
    DensityOperator sigma = at_path(path + "/sigma", [&] { return DensityOperator(s); });
    if (sigma.dim() != ch.dim_in()) throw SpecError(path + "/sigma", "dimension differs from the channel input");
    return ChannelTask{std::move(ch), std::move(sigma)};
}

inline ConditionalShearerProblem read_conditional_shearer(const Json& j, const std::string& path = "") {
    ConditionalShearerProblem c;
    c.dims_a = read_indices(field(j, "dims_a", path), path + "/dims_a");
    const Json& db = field(j, "dim_b", path);
    if (!db.is_number_integer() || db.get<Index>() < 1) throw SpecError(path + "/dim_b", "expected a positive integer");
    c.dim_b = db.get<Index>();
    const Json& sj = field(j, "subsets", path);
    if (!sj.is_array()) throw SpecError(path + "/subsets", "expected an array of index arrays");
    for (std::size_t i = 0; i < sj.size(); ++i) c.subsets.push_back(read_indices(sj[i], path + "/subsets/" + std::to_string(i)));
    const Json& pj = field(j, "p", path);
    if (!pj.is_number_integer() || pj.get<int>() < 1) throw SpecError(path + "/p", "expected a positive integer");
    c.p = pj.get<int>();
    const Matrix r = read_matrix(field(j, "rho", path), path + "/rho");
    c.rho = at_path(path + "/rho", [&] { return DensityOperator(r); });
    Index total = c.dim_b;
    for (Index d : c.dims_a) total *= d;
    if (c.rho.dim() != total) throw SpecError(path + "/rho", "dimension differs from prod(dims_a) * dim_b");
    return c;
}

inline Problem read_problem(const Json& j) {
    Problem p;
    const Json& t = field(j, "type", "");
    if (!t.is_string()) throw SpecError("/type", "expected a string");
    p.type = t.get<std::string>();
    p.name = j.value("preset", std::string());
    if (p.type == "bl_datum") {
        p.datum = read_datum(j);
    } else if (p.type == "gaussian") {
        p.gaussian = read_gaussian(j);
    } else if (p.type == "channel_task") {
        p.channel_task = read_channel_task(j);
    } else if (p.type == "conditional_shearer") {
        p.conditional_shearer = read_conditional_shearer(j);
    } else {
        throw SpecError("/type", "unknown problem type \"" + p.type + "\"");
    }
    return p;
}

inline Problem load_problem(const std::string& file) {
    std::ifstream in(file);
    if (!in) throw SpecError("", "cannot open " + file);
    Json j;
    try {
        j = Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw SpecError("", std::string("invalid JSON: ") + e.what());
    }
    return read_problem(j);
}

// ----------------------------------------------------------------- reports

inline Json trace_json(const std::vector<std::pair<int, double>>& trace) {
    Json out = Json::array();
    for (const auto& [it, v] : trace) out.push_back(Json::array({it, number(v)}));
    return out;
}

inline Json to_json(const VerificationReport& r) {
    Json j;
    j["form"] = to_string(r.form);
    j["worst_gap"] = number(r.worst_gap);
    Json w = Json::array();
    for (const Matrix& m : r.witness) w.push_back(to_json(m));
    j["witness"] = std::move(w);
    j["samples"] = r.samples;
    j["optimizer_trace"] = trace_json(r.optimizer_trace);
    j["verdict"] = to_string(r.verdict);
    j["units"] = r.units;
    return j;
}

inline Json to_json(const ConstantEstimate& e) {
    Json j;
    j["form"] = to_string(e.form);
    j["c_est"] = number(e.c_est);
    j["c_est_bits"] = number(to_bits(e.c_est));
    j["bound"] = "lower bound on the optimal constant";
    Json w = Json::array();
    for (const Matrix& m : e.witness) w.push_back(to_json(m));
    j["witness"] = std::move(w);
    j["optimizer_trace"] = trace_json(e.trace);
    Json rs = Json::array();
    for (const RestartRecord& r : e.restarts) {
        rs.push_back({{"restart", r.restart},
                      {"seed", r.seed},
                      {"primary", number(r.primary)},
                      {"secondary", number(r.secondary)},
                      {"iterations", r.iterations}});
    }
    j["restarts"] = std::move(rs);
    return j;
}

inline Json to_json(const DualityReport& r) {
    return {{"entropic", to_json(r.entropic)},
            {"analytic", to_json(r.analytic)},
            {"difference", number(r.difference)},
            {"tolerance", number(r.tolerance)},
            {"agree", r.agree}};
}

inline Json to_json(const ConditionalShearerReport& r) {
    return {{"lhs", number(r.lhs)}, {"rhs", number(r.rhs)}, {"gap", number(r.gap)}, {"holds", r.holds}, {"units", r.units}};
}

inline Json to_json(const ContractionReport& r) {
    Json j{{"eta", number(r.eta)},
           {"perturbative", number(r.perturbative)},
           {"ascent", number(r.ascent)},
           {"boundary_flag", r.boundary_flag}};
    if (r.witness.size()) j["witness"] = to_json(r.witness);
    return j;
}

/// Writes rows as CSV with a header; numbers with 12 significant digits.
inline std::string to_csv(const std::vector<std::string>& header, const std::vector<std::vector<double>>& rows) {
    std::ostringstream out;
    for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
    out << "\n";
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_number(row[i]);
        out << "\n";
    }
    return out.str();
}

inline std::string trajectory_csv(const std::vector<TrajectoryPoint>& traj) {
    std::vector<std::string> header{"t", "H_total"};
    const std::size_t n = traj.empty() ? 0 : traj.front().h_marginals.size();
    for (std::size_t k = 0; k < n; ++k) header.push_back("H_marginal_" + std::to_string(k + 1));
    header.push_back("deficit");
    std::vector<std::vector<double>> rows;
    for (const TrajectoryPoint& p : traj) {
        std::vector<double> row{p.t, p.h_total};
        row.insert(row.end(), p.h_marginals.begin(), p.h_marginals.end());
        row.push_back(p.deficit);
        rows.push_back(std::move(row));
    }
    return to_csv(header, rows);
}

}  // namespace qbl::io

#endif  // QBL_IO_HPP
