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

#include "forrelab/sampler.h"

#include <chrono>
#include <cmath>
#include <sstream>
#include <string>

#include "forrelab/errors.h"

namespace forrelab {

namespace {

constexpr double BARRIER = 0.5;

// Below this exponent exp() is exactly 0, so no uniform is drawn.
constexpr double MIN_CROSSING_EXPONENT = -745;

bool crossed_between(double gap0, double gap1, double v, Rng &rng) {
    double e = -2 * gap0 * gap1 / v;
    return e > MIN_CROSSING_EXPONENT && uniform01(rng) < std::exp(e);
}

/// next = x + increment, clamped. Returns whether the path left the cube
/// during the step.
bool advance(
    std::span<const double> x,
    std::span<const double> increment,
    std::span<const double> variance,
    double h,
    bool bridge_correction,
    Rng &rng,
    std::span<double> next) {
    size_t dim = x.size();
    bool exited = false;
    for (size_t i = 0; i < dim; i++) {
        next[i] = x[i] + increment[i];
        if (!std::isfinite(next[i])) {
            throw std::logic_error("non-finite state in path simulation");
        }
        if (next[i] > BARRIER) {
            next[i] = BARRIER;
            exited = true;
        } else if (next[i] < -BARRIER) {
            next[i] = -BARRIER;
            exited = true;
        }
    }
    if (exited || !bridge_correction) {
        return exited;
    }
    for (size_t i = 0; i < dim; i++) {
        double v = variance[i] * h;
        if (v <= 0) {
            continue;
        }
        if (crossed_between(BARRIER - x[i], BARRIER - next[i], v, rng)) {
            next[i] = BARRIER;
            exited = true;
        } else if (crossed_between(BARRIER + x[i], BARRIER + next[i], v, rng)) {
            next[i] = -BARRIER;
            exited = true;
        }
    }
    return exited;
}

std::vector<double> diagonal(const CovarianceSpec &spec) {
    std::vector<double> out(spec.dim());
    for (size_t i = 0; i < spec.dim(); i++) {
        out[i] = spec.entry(i, i);
    }
    return out;
}

}  // namespace

double default_epsilon(size_t dim) {
    if (dim < 2) {
        throw DomainError("1/(8 ln N) needs N >= 2");
    }
    return 1.0 / (8.0 * std::log(static_cast<double>(dim)));
}

SamplerConfig SamplerConfig::standard(size_t dim, size_t dt_divisor) {
    return with_epsilon(default_epsilon(dim), dt_divisor);
}

SamplerConfig SamplerConfig::with_epsilon(double epsilon, size_t dt_divisor) {
    if (dt_divisor == 0) {
        throw DomainError("dt divisor must be positive");
    }
    SamplerConfig config;
    config.epsilon = epsilon;
    config.dt = epsilon / static_cast<double>(dt_divisor);
    config.validate();
    return config;
}

void SamplerConfig::validate() const {
    if (!(epsilon > 0) || !std::isfinite(epsilon)) {
        throw DomainError("epsilon must be positive and finite");
    }
    if (!(dt > 0) || dt > epsilon) {
        throw DomainError("dt must satisfy 0 < dt <= epsilon");
    }
}

size_t SamplerConfig::steps() const {
    // The tolerance absorbs rounding in epsilon / (epsilon / k).
    return static_cast<size_t>(std::ceil(epsilon / dt - 1e-9));
}

nlohmann::json SamplerConfig::to_json() const {
    return nlohmann::json{
        {"epsilon", epsilon},
        {"dt", dt},
        {"bridge_correction", bridge_correction},
        {"seed", seed},
    };
}

StoppedSample sample_stopped_path(
    const CovarianceSpec &spec, const SamplerConfig &config, Rng &rng, const PathIntegrand *integrand) {
    config.validate();
    size_t dim = spec.dim();
    size_t steps = config.steps();

    StoppedSample out;
    std::vector<double> x(dim, 0.0);
    std::vector<double> next(dim);
    std::vector<double> noise(dim);
    std::vector<double> increment(dim);
    std::vector<double> variance = diagonal(spec);

    double accumulator = 0;
    double g_prev = integrand ? (*integrand)(x) : 0.0;
    double t = 0;
    for (size_t k = 0; k < steps; k++) {
        bool last = k + 1 == steps;
        double t_next = last ? config.epsilon : static_cast<double>(k + 1) * config.dt;
        double h = t_next - t;
        double root_h = std::sqrt(h);
        for (double &g : noise) {
            g = standard_normal(rng);
        }
        spec.apply_sqrt(noise, increment);

        for (size_t i = 0; i < dim; i++) {
            increment[i] *= root_h;
        }
        bool exited = advance(x, increment, variance, h, config.bridge_correction, rng, next);

        if (integrand) {
            double g_next = (*integrand)(next);
            accumulator += 0.5 * h * (g_prev + g_next);
            g_prev = g_next;
        }
        x.swap(next);
        t = t_next;
        if (exited) {
            out.exited = true;
            break;
        }
    }
    out.tau = t;
    out.x_tau = std::move(x);
    if (integrand) {
        out.path_accumulator = accumulator;
    }
    return out;
}

HalvingPair sample_halving_pair(const CovarianceSpec &spec, const SamplerConfig &config, Rng &rng) {
    config.validate();
    size_t dim = spec.dim();
    size_t steps = config.steps();
    std::vector<double> variance = diagonal(spec);
    std::vector<double> noise(dim), increment(dim), coarse_increment(dim, 0.0);
    std::vector<double> fine(dim, 0.0), fine_next(dim), coarse(dim, 0.0), coarse_next(dim);

    HalvingPair out{config.epsilon, config.epsilon};
    bool fine_done = false, coarse_done = false;
    double t = 0, coarse_t = 0;
    for (size_t k = 0; k < steps && !(fine_done && coarse_done); k++) {
        bool last = k + 1 == steps;
        double t_next = last ? config.epsilon : static_cast<double>(k + 1) * config.dt;
        double h = t_next - t;
        double root_h = std::sqrt(h);
        for (double &g : noise) {
            g = standard_normal(rng);
        }
        spec.apply_sqrt(noise, increment);
        for (size_t i = 0; i < dim; i++) {
            increment[i] *= root_h;
            coarse_increment[i] += increment[i];
        }
        if (!fine_done && advance(fine, increment, variance, h, config.bridge_correction, rng, fine_next)) {
            fine_done = true;
            out.tau_fine = t_next;
        }
        fine.swap(fine_next);
        t = t_next;

        // The coarse path sees the sum of each pair of fine increments.
        if (!coarse_done && (k % 2 == 1 || last)) {
            double coarse_h = t_next - coarse_t;
            if (advance(coarse, coarse_increment, variance, coarse_h, config.bridge_correction, rng, coarse_next)) {
                coarse_done = true;
                out.tau_coarse = t_next;
            }
            coarse.swap(coarse_next);
            coarse_t = t_next;
        }
        if (k % 2 == 1 || last) {
            std::fill(coarse_increment.begin(), coarse_increment.end(), 0.0);
        }
    }
    return out;
}

std::vector<StoppedSample> sample_paths(
    const CovarianceSpec &spec, const SamplerConfig &config, size_t count, const PathIntegrand *integrand) {
    config.validate();
    return map_streams(count, config.seed, config.workers, [&](size_t, Rng &rng) {
        return sample_stopped_path(spec, config, rng, integrand);
    });
}

std::vector<int> boolean_round(std::span<const double> x, Rng &rng) {
    for (double v : x) {
        if (!(std::abs(v) <= 1)) {
            throw DomainError("rounding input must lie in [-1, 1]^N");
        }
    }
    std::vector<int> z(x.size());
    for (size_t i = 0; i < x.size(); i++) {
        z[i] = uniform01(rng) < 0.5 * (1 + x[i]) ? 1 : -1;
    }
    return z;
}

double one_dimensional_exit_bound(double epsilon) {
    return 2 * std::exp(-1 / (4 * epsilon));
}

ExperimentReport exit_probability_report(const CovarianceSpec &spec, const SamplerConfig &config, size_t samples) {
    auto start = std::chrono::steady_clock::now();
    config.validate();
    if (samples == 0) {
        throw DomainError("samples must be positive");
    }
    double half = config.epsilon / 2;

    struct Row {
        double early;
        double exited;
    };
    auto rows = map_streams(samples, config.seed, config.workers, [&](size_t, Rng &rng) {
        auto s = sample_stopped_path(spec, config, rng);
        return Row{s.exited && s.tau <= half ? 1.0 : 0.0, s.exited ? 1.0 : 0.0};
    });

    // Standard 1-D Brownian motion over [0, epsilon/2] on the same time grid.
    auto line = CovarianceSpec::dense({1.0}, 1);
    SamplerConfig line_config = config;
    line_config.epsilon = half;
    line_config.dt = std::min(config.dt, half);
    line_config.seed = splitmix64(config.seed ^ 0x1D1D1D1DULL);
    auto line_hits = map_streams(samples, line_config.seed, config.workers, [&](size_t, Rng &rng) {
        return sample_stopped_path(line, line_config, rng).exited ? 1.0 : 0.0;
    });

    MeanAccumulator early;
    MeanAccumulator exited;
    for (const auto &r : rows) {
        early.add(r.early);
        exited.add(r.exited);
    }
    Estimate early_e = early.estimate();
    Estimate line_e = estimate_of(line_hits);

    double per_coordinate = one_dimensional_exit_bound(config.epsilon);
    double union_bound = static_cast<double>(spec.dim()) * per_coordinate;

    ExperimentReport report;
    report.name = "exit_probability";
    report.parameters = config.to_json();
    report.parameters["N"] = spec.dim();
    if (spec.is_forrelation()) {
        report.parameters["n"] = spec.half();
    }
    report.samples = samples;
    report.add_estimate("exit_before_half_eps", early_e);
    report.add_estimate("exit_any", exited.estimate());
    report.add_estimate("line_exit_before_half_eps", line_e);
    report.estimates["bound_line_exit"] = per_coordinate;
    report.estimates["bound_union"] = union_bound;
    report.bound = 0.5;

    // Upper-bound claims pass when the estimate is within SE_MARGIN standard
    // errors of the bound; they fail only on a violation beyond noise.
    Verdict v = early_e.mean <= 0.5 + SE_MARGIN * early_e.se ? Verdict::Pass : Verdict::Fail;
    v = combine(v, line_e.mean <= per_coordinate + SE_MARGIN * line_e.se ? Verdict::Pass : Verdict::Fail);
    report.verdict = v;
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

std::string path_csv_header(size_t dim, bool with_bits) {
    std::string out = "stream,tau,exited";
    for (size_t i = 1; i <= dim; i++) {
        out += ",x" + std::to_string(i);
    }
    if (with_bits) {
        for (size_t i = 1; i <= dim; i++) {
            out += ",z" + std::to_string(i);
        }
    }
    return out;
}

std::string path_csv_row(size_t stream, const StoppedSample &sample, const std::vector<int> *bits) {
    std::ostringstream out;
    out.precision(17);
    out << stream << ',' << sample.tau << ',' << (sample.exited ? 1 : 0);
    for (double v : sample.x_tau) {
        out << ',' << v;
    }
    if (bits) {
        for (int b : *bits) {
            out << ',' << b;
        }
    }
    return out.str();
}

}  // namespace forrelab
