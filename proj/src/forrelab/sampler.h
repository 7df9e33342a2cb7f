// Copyright 2026 The Forrelab Authors
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

#ifndef FORRELAB_SAMPLER_H
#define FORRELAB_SAMPLER_H

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "forrelab/covariance.h"
#include "forrelab/report.h"
#include "forrelab/rng.h"
#include "json.hpp"

namespace forrelab {

constexpr size_t DEFAULT_DT_DIVISOR = 1024;

/// 1 / (8 ln N).
double default_epsilon(size_t dim);

struct SamplerConfig {
    /// Time horizon; tau <= epsilon.
    double epsilon = 0;
    /// Euler-Maruyama step.
    double dt = 0;
    /// Per-coordinate Brownian-bridge crossing test between grid points.
    bool bridge_correction = false;
    uint64_t seed = 0;
    /// Parallel workers; 0 selects std::thread::hardware_concurrency().
    /// Results do not depend on this value.
    size_t workers = 0;

    /// epsilon = 1/(8 ln N), dt = epsilon / dt_divisor.
    static SamplerConfig standard(size_t dim, size_t dt_divisor = DEFAULT_DT_DIVISOR);
    static SamplerConfig with_epsilon(double epsilon, size_t dt_divisor = DEFAULT_DT_DIVISOR);

    /// Throws DomainError unless 0 < dt <= epsilon.
    void validate() const;
    size_t steps() const;
    nlohmann::json to_json() const;
};

/// One draw of the stopped process.
struct StoppedSample {
    std::vector<double> x_tau;
    double tau = 0;
    /// True iff the path was stopped by leaving the cube before epsilon.
    bool exited = false;
    /// Trapezoid-rule time integral of the supplied integrand along the path.
    std::optional<double> path_accumulator;
};

/// Function of the current state integrated along the path.
using PathIntegrand = std::function<double(std::span<const double>)>;

/// Simulates dX = sigma dB from X_0 = 0 with Euler-Maruyama steps until the
/// first grid time at which a coordinate leaves [-1/2, 1/2] (or, with the
/// bridge correction, is judged to have crossed between grid points), or
/// until epsilon. Offending coordinates are clamped onto the boundary.
StoppedSample sample_stopped_path(
    const CovarianceSpec &spec, const SamplerConfig &config, Rng &rng, const PathIntegrand *integrand = nullptr);

/// Stopping times of one Brownian path observed on the grid with step
/// config.dt and on the grid with step 2 config.dt.
struct HalvingPair {
    double tau_fine;
    double tau_coarse;
};

HalvingPair sample_halving_pair(const CovarianceSpec &spec, const SamplerConfig &config, Rng &rng);

/// Runs fn(path_index, rng) for path_index in [0, count) on `workers`
/// threads, where rng = stream_rng(seed, path_index). Output order is the path
/// order, so results are independent of the worker count.
template <class Fn>
auto map_streams(size_t count, uint64_t seed, size_t workers, Fn &&fn)
    -> std::vector<std::invoke_result_t<Fn &, size_t, Rng &>> {
    using Result = std::invoke_result_t<Fn &, size_t, Rng &>;
    std::vector<Result> out(count);
    if (workers == 0) {
        workers = std::max<size_t>(1, std::thread::hardware_concurrency());
    }
    workers = std::min(workers, std::max<size_t>(count, 1));
    std::atomic<size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto work = [&]() {
        constexpr size_t CHUNK = 64;
        try {
            while (true) {
                size_t begin = next.fetch_add(CHUNK);
                if (begin >= count) {
                    return;
                }
                size_t end = std::min(count, begin + CHUNK);
                for (size_t p = begin; p < end; p++) {
                    Rng rng = stream_rng(seed, p);
                    out[p] = fn(p, rng);
                }
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) {
                failure = std::current_exception();
            }
            next = count;
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(workers);
        for (size_t w = 0; w < workers; w++) {
            threads.emplace_back(work);
        }
        for (auto &t : threads) {
            t.join();
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
    return out;
}

/// `count` independent stopped paths; path p is drawn from stream p of config.seed.
std::vector<StoppedSample> sample_paths(
    const CovarianceSpec &spec, const SamplerConfig &config, size_t count, const PathIntegrand *integrand = nullptr);

/// Independent rounding: z_i = +1 with probability (1 + x_i) / 2.
/// Throws DomainError if some |x_i| > 1.
std::vector<int> boolean_round(std::span<const double> x, Rng &rng);

/// 2 exp(-1 / (4 epsilon)): tail bound for a standard 1-D Brownian motion
/// reaching |B| >= 1/2 before time epsilon / 2.
double one_dimensional_exit_bound(double epsilon);

/// Estimates Pr[tau <= epsilon/2] for `spec` and the exit probability of a
/// standard 1-D Brownian motion from [-1/2, 1/2] by time epsilon/2, and
/// compares them with N * 2e^{-1/(4 eps)}, 2e^{-1/(4 eps)} and 1/2.
ExperimentReport exit_probability_report(const CovarianceSpec &spec, const SamplerConfig &config, size_t samples);

/// CSV header and row for the path dump format:
/// stream,tau,exited,x1..xN[,z1..zN]
std::string path_csv_header(size_t dim, bool with_bits);
std::string path_csv_row(
    size_t stream, const StoppedSample &sample, const std::vector<int> *bits = nullptr);

}  // namespace forrelab

#endif
