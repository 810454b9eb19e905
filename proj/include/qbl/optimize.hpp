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

#ifndef QBL_OPTIMIZE_HPP
#define QBL_OPTIMIZE_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

#include "qbl/core.hpp"

namespace qbl {

/// Restart count, per-run iteration cap and objective tolerance shared by
/// every multi-start search. Restart r is seeded with seed + r.
struct OptimizerBudget {
    int restarts = 32;
    int max_iterations = 500;
    double tolerance = 1e-9;
    std::uint64_t seed = 0;
    /// 0 = one worker per hardware thread.
    unsigned threads = 0;
};

struct AscentOptions {
    int max_iterations = 500;
    double tolerance = 1e-9;
    double fd_step = 1e-5;
};

struct AscentResult {
    RealVector x;
    double value = -kInf;
    int iterations = 0;
    std::vector<std::pair<int, double>> trace;
};

/// Central-difference gradient; one-sided where a neighbour is not finite.
template <class F>
RealVector fd_gradient(F& f, const RealVector& x, double fx, double h) {
    RealVector g(x.size());
    RealVector probe = x;
    for (Index i = 0; i < x.size(); ++i) {
        probe(i) = x(i) + h;
        const double up = f(probe);
        probe(i) = x(i) - h;
        const double down = f(probe);
        probe(i) = x(i);
        if (std::isfinite(up) && std::isfinite(down)) {
            g(i) = (up - down) / (2.0 * h);
        } else if (std::isfinite(up)) {
            g(i) = (up - fx) / h;
        } else if (std::isfinite(down)) {
            g(i) = (fx - down) / h;
        } else {
            g(i) = 0.0;
        }
    }
    return g;
}

/// Maximizes f by BFGS on finite-difference gradients with a backtracking
/// (Armijo) line search. Non-finite values count as -inf.
template <class F>
AscentResult maximize(F f, RealVector x0, const AscentOptions& opt = {}) {
    auto eval = [&](const RealVector& x) {
        const double v = f(x);
        return std::isfinite(v) ? v : -kInf;
    };
    const Index n = x0.size();
    AscentResult res;
    res.x = std::move(x0);
    res.value = eval(res.x);
    if (!std::isfinite(res.value)) return res;
    RealMatrix inv_h = RealMatrix::Identity(n, n);
    RealVector g = fd_gradient(eval, res.x, res.value, opt.fd_step);
    int stalled = 0;
    for (int it = 1; it <= opt.max_iterations; ++it) {
        res.iterations = it;
        RealVector dir = inv_h * g;
        double slope = g.dot(dir);
        if (!(slope > 0.0)) {
            inv_h.setIdentity();
            dir = g;
            slope = g.squaredNorm();
        }
        if (slope < 1e-30) break;
        double step = 1.0;
        double next = -kInf;
        RealVector candidate;
        for (int k = 0; k < 60; ++k) {
            candidate = res.x + step * dir;
            next = eval(candidate);
            if (next >= res.value + 1e-4 * step * slope) break;
            step *= 0.5;
        }
        if (!(next >= res.value)) {
            if (inv_h.isIdentity()) break;
            inv_h.setIdentity();
            continue;
        }
        const RealVector g_next = fd_gradient(eval, candidate, next, opt.fd_step);
        const RealVector s = candidate - res.x;
        const RealVector y = g - g_next;  // gradient change of -f
        const double sy = s.dot(y);
        if (sy > 1e-14) {
            const RealVector hy = inv_h * y;
            const double rho = 1.0 / sy;
            inv_h += (rho * rho * y.dot(hy) + rho) * s * s.transpose() - rho * (hy * s.transpose() + s * hy.transpose());
        }
        const double improvement = next - res.value;
        res.x = candidate;
        res.value = next;
        g = g_next;
        res.trace.emplace_back(it, res.value);
        if (improvement <= opt.tolerance * (1.0 + std::abs(res.value))) {
            if (++stalled >= 3) break;
        } else {
            stalled = 0;
        }
    }
    return res;
}

/// Runs job(r) for r in [0, count) on a worker pool and returns results in
/// restart order, so the reduction is independent of scheduling.
template <class Job>
auto run_restarts(int count, unsigned threads, Job job) -> std::vector<decltype(job(0))> {
    using Result = decltype(job(0));
    std::vector<Result> results(static_cast<std::size_t>(std::max(0, count)));
    if (count <= 0) return results;
    unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, static_cast<unsigned>(count));
    if (workers <= 1) {
        for (int r = 0; r < count; ++r) results[static_cast<std::size_t>(r)] = job(r);
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (int r = next++; r < count; r = next++) results[static_cast<std::size_t>(r)] = job(r);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return results;
}

}  // namespace qbl

#endif  // QBL_OPTIMIZE_HPP
