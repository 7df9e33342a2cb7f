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

#include "forrelab/verifier.h"

#include <bit>
#include <chrono>
#include <cmath>
#include <string>

#include "forrelab/errors.h"
#include "forrelab/forrelation.h"
#include "forrelab/restriction.h"
#include "forrelab/wht.h"

namespace forrelab {

namespace {

double seconds_since(std::chrono::steady_clock::time_point start) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_dims(const BooleanFunction &f, const CovarianceSpec &spec) {
    if (f.n_vars() != spec.dim()) {
        throw DimensionError(
            "function has " + std::to_string(f.n_vars()) + " variables but the covariance is " +
            std::to_string(spec.dim()) + "-dimensional");
    }
}

// Upper-bound claims: pass within the margin, fail beyond it.
Verdict upper_bound_verdict(const Estimate &e, double bound) {
    if (e.count < 2) {
        return Verdict::Inconclusive;
    }
    return e.mean <= bound + SE_MARGIN * e.se ? Verdict::Pass : Verdict::Fail;
}

// Lower-bound claims are certified only when the whole margin clears the bound.
Verdict lower_bound_verdict(const Estimate &e, double bound) {
    if (e.mean - SE_MARGIN * e.se >= bound) {
        return Verdict::Pass;
    }
    if (e.mean + SE_MARGIN * e.se < bound) {
        return Verdict::Fail;
    }
    return Verdict::Inconclusive;
}

}  // namespace

double verify_restriction_lemma(const BooleanFunction &f, std::span<const double> x) {
    size_t n = f.n_vars();
    if (x.size() != n) {
        throw DimensionError("anchor length does not match the function");
    }
    if (n > MAX_LEMMA_VARS) {
        throw CapacityError("restriction lemma check supports N <= 10");
    }
    RestrictionDistribution dist(std::vector<double>(x.begin(), x.end()));
    auto family = dist.enumerate();
    std::vector<double> zero(n, 0.0);

    size_t pairs = n * (n - (n > 0)) / 2;
    std::vector<double> rhs(pairs, 0.0);
    for (const auto &[rho, prob] : family) {
        auto restricted = restrict(f, rho);
        size_t k = 0;
        for (size_t i = 0; i < n; i++) {
            for (size_t j = i + 1; j < n; j++) {
                SubsetMask pair = (SubsetMask{1} << i) | (SubsetMask{1} << j);
                rhs[k++] += prob * partial_derivative(restricted, pair, zero);
            }
        }
    }
    double worst = 0;
    size_t k = 0;
    for (size_t i = 0; i < n; i++) {
        for (size_t j = i + 1; j < n; j++) {
            SubsetMask pair = (SubsetMask{1} << i) | (SubsetMask{1} << j);
            double lhs = partial_derivative(f, pair, x);
            worst = std::max(worst, std::abs(lhs - 4 * rhs[k++]));
        }
    }
    return worst;
}

BooleanFunction generator_polynomial(const BooleanFunction &f, const CovarianceSpec &spec) {
    check_dims(f, spec);
    size_t n = f.n_vars();
    std::vector<double> origin(n, 0.0);
    std::vector<double> interior(n, 0.25);
    double scale = 0;
    for (double c : f.coefficients()) {
        scale += std::abs(c);
    }
    for (size_t i = 0; i < n; i++) {
        for (const auto &point : {origin, interior}) {
            double d2 = same_variable_second_difference(f, i, point);
            if (std::abs(d2) > 1e-9 * std::max(1.0, scale)) {
                throw std::logic_error("function is not multilinear in variable " + std::to_string(i + 1));
            }
        }
    }

    auto coeffs = f.coefficients();
    std::vector<double> out(coeffs.size(), 0.0);
    for (size_t s = 0; s < coeffs.size(); s++) {
        if (coeffs[s] == 0 || std::popcount(s) < 2) {
            continue;
        }
        for (size_t a = s; a; a &= a - 1) {
            size_t i = std::countr_zero(a);
            for (size_t b = a & (a - 1); b; b &= b - 1) {
                size_t j = std::countr_zero(b);
                // (1/2)(Sigma_ij + Sigma_ji) = Sigma_ij.
                out[s & ~((size_t{1} << i) | (size_t{1} << j))] += spec.entry(i, j) * coeffs[s];
            }
        }
    }
    return BooleanFunction::from_coefficients(std::move(out));
}

std::vector<DynkinPathRecord> dynkin_path_records(
    const BooleanFunction &f, const CovarianceSpec &spec, const SamplerConfig &config, size_t samples) {
    check_dims(f, spec);
    config.validate();
    auto generator = generator_polynomial(f, spec);
    PathIntegrand integrand = [&generator](std::span<const double> x) {
        return eval_multilinear(generator, x);
    };
    return map_streams(samples, config.seed, config.workers, [&](size_t, Rng &rng) {
        auto s = sample_stopped_path(spec, config, rng, &integrand);
        return DynkinPathRecord{s.tau, eval_multilinear(f, s.x_tau), *s.path_accumulator};
    });
}

ExperimentReport verify_dynkin(
    const BooleanFunction &f, const CovarianceSpec &spec, const SamplerConfig &config, size_t samples) {
    auto start = std::chrono::steady_clock::now();
    if (samples == 0) {
        throw DomainError("samples must be positive");
    }
    std::vector<double> origin(f.n_vars(), 0.0);
    double f0 = eval_multilinear(f, origin);

    struct Sums {
        Estimate lhs, rhs, gap, tau;
    };
    auto summarize = [&](const SamplerConfig &cfg) {
        auto records = dynkin_path_records(f, spec, cfg, samples);
        MeanAccumulator lhs, rhs, gap, tau;
        for (const auto &r : records) {
            lhs.add(r.f_value - f0);
            rhs.add(r.accumulator);
            gap.add(r.f_value - f0 - r.accumulator);
            tau.add(r.tau);
        }
        return Sums{lhs.estimate(), rhs.estimate(), gap.estimate(), tau.estimate()};
    };
    Sums fine = summarize(config);
    SamplerConfig coarse_config = config;
    coarse_config.dt = std::min(config.epsilon, 2 * config.dt);
    Sums coarse = summarize(coarse_config);
    double allowance = std::abs(coarse.gap.mean - fine.gap.mean);

    ExperimentReport report;
    report.name = "dynkin";
    report.parameters = config.to_json();
    report.parameters["N"] = spec.dim();
    report.parameters["covariance"] = spec.to_json();
    report.parameters["function"] = f.to_json();
    report.samples = samples;
    report.add_estimate("lhs", fine.lhs);
    report.add_estimate("rhs", fine.rhs);
    report.add_estimate("gap_paired", fine.gap);
    report.add_estimate("tau", fine.tau);
    report.estimates["se_combined"] = combined_se(fine.lhs, fine.rhs);
    report.estimates["gap_coarse"] = coarse.gap.mean;
    report.estimates["discretization_allowance"] = allowance;

    double tolerance = SE_MARGIN * combined_se(fine.lhs, fine.rhs) + allowance;
    report.bound = tolerance;
    if (samples < 2) {
        report.verdict = Verdict::Inconclusive;
    } else {
        report.verdict = std::abs(fine.lhs.mean - fine.rhs.mean) <= tolerance ? Verdict::Pass : Verdict::Fail;
    }
    report.wall_time_s = seconds_since(start);
    return report;
}

ExperimentReport verify_main_theorem_on(
    const BooleanFunction &f,
    const CovarianceSpec &spec,
    const SamplerConfig &config,
    std::span<const StoppedSample> samples,
    std::optional<double> t) {
    auto start = std::chrono::steady_clock::now();
    check_dims(f, spec);
    double level2 = t ? *t : max_restricted_level2_mass(f);
    double bound = 2 * config.epsilon * spec.gamma() * level2;
    double mean_uniform = f.coefficient(0);

    MeanAccumulator acc;
    for (const auto &s : samples) {
        acc.add(eval_multilinear(f, s.x_tau));
    }
    Estimate value = acc.estimate();
    Estimate deviation{std::abs(value.mean - mean_uniform), value.se, value.count};

    ExperimentReport report;
    report.name = "main_theorem";
    report.parameters = config.to_json();
    report.parameters["N"] = spec.dim();
    report.parameters["gamma"] = spec.gamma();
    report.parameters["t"] = level2;
    report.parameters["t_source"] = t ? "supplied" : "exhaustive";
    report.samples = samples.size();
    report.bound = bound;
    report.add_estimate("f", value);
    report.add_estimate("deviation", deviation);
    report.estimates["f_uniform"] = mean_uniform;
    report.verdict = upper_bound_verdict(deviation, bound);
    report.wall_time_s = seconds_since(start);
    return report;
}

ExperimentReport verify_main_theorem(
    const BooleanFunction &f,
    const CovarianceSpec &spec,
    const SamplerConfig &config,
    size_t samples,
    std::optional<double> t) {
    auto start = std::chrono::steady_clock::now();
    check_dims(f, spec);
    bool supplied = t.has_value();
    if (!supplied) {
        t = max_restricted_level2_mass(f);
    }
    auto paths = sample_paths(spec, config, samples);
    auto report = verify_main_theorem_on(f, spec, config, paths, t);
    report.parameters["t_source"] = supplied ? "supplied" : "exhaustive";
    report.wall_time_s = seconds_since(start);
    return report;
}

ExperimentReport verify_proposition(const CovarianceSpec &spec, const SamplerConfig &config, size_t samples) {
    auto start = std::chrono::steady_clock::now();
    if (!spec.is_forrelation()) {
        throw DomainError("the proposition concerns the forrelation covariance");
    }
    if (samples == 0) {
        throw DomainError("samples must be positive");
    }
    config.validate();
    size_t n = spec.half();
    double eps = config.epsilon;

    struct Row {
        double phi, tau, early;
    };
    auto rows = map_streams(samples, config.seed, config.workers, [&](size_t, Rng &rng) {
        auto s = sample_stopped_path(spec, config, rng);
        std::span<const double> xs(s.x_tau);
        return Row{phi(xs.first(n), xs.subspan(n)), s.tau, s.exited && s.tau <= eps / 2 ? 1.0 : 0.0};
    });
    MeanAccumulator phi_acc, tau_acc, early_acc, markov_acc, slack_acc;
    for (const auto &r : rows) {
        phi_acc.add(r.phi);
        tau_acc.add(r.tau);
        early_acc.add(r.early);
        double markov = eps / 2 * (1 - r.early);
        markov_acc.add(markov);
        slack_acc.add(r.tau - markov);
    }
    Estimate phi_e = phi_acc.estimate();
    Estimate tau_e = tau_acc.estimate();
    Estimate early_e = early_acc.estimate();
    Estimate markov_e = markov_acc.estimate();
    Estimate slack_e = slack_acc.estimate();
    double bound = eps / 4;

    ExperimentReport report;
    report.name = "proposition";
    report.parameters = config.to_json();
    report.parameters["n"] = n;
    report.parameters["N"] = spec.dim();
    report.samples = samples;
    report.bound = bound;
    report.add_estimate("phi", phi_e);
    report.add_estimate("tau", tau_e);
    report.add_estimate("exit_before_half_eps", early_e);
    report.add_estimate("markov_lower_bound", markov_e);
    report.add_estimate("markov_slack", slack_e);
    report.estimates["bound_eps_over_4"] = bound;
    report.estimates["se_phi_minus_tau_combined"] = combined_se(phi_e, tau_e);
    report.estimates["bound_union_exit"] = static_cast<double>(spec.dim()) * one_dimensional_exit_bound(eps);
    report.estimates["bound_2_over_N"] = 2.0 / static_cast<double>(spec.dim());

    Verdict v = lower_bound_verdict(phi_e, bound);
    v = combine(v, lower_bound_verdict(tau_e, bound));
    v = combine(
        v,
        std::abs(phi_e.mean - tau_e.mean) <= SE_MARGIN * combined_se(phi_e, tau_e) ? Verdict::Pass : Verdict::Fail);
    v = combine(v, slack_e.mean >= -SE_MARGIN * slack_e.se ? Verdict::Pass : Verdict::Fail);
    v = combine(v, upper_bound_verdict(early_e, 0.5));
    report.verdict = v;
    report.wall_time_s = seconds_since(start);
    return report;
}

double tal_bound_parameter(double ell, int d, double N, double c, int k) {
    if (d < 1 || k < 1) {
        throw DomainError("Tal bound needs d >= 1 and k >= 1");
    }
    if (!(N > 1)) {
        throw DomainError("Tal bound needs N > 1");
    }
    return std::pow(c * std::pow(std::log(N), ell), static_cast<double>((d - 1) * k));
}

double main_theorem_bound(size_t n, double t) {
    exact_log2(n);
    double eps = default_epsilon(2 * n);
    double gamma = 1.0 / std::sqrt(static_cast<double>(n));
    return 2 * eps * gamma * t;
}

ExperimentReport sweep_report(const SweepOptions &options) {
    auto start = std::chrono::steady_clock::now();
    if (options.ns.empty()) {
        throw DomainError("sweep needs at least one n");
    }
    nlohmann::json rows = nlohmann::json::array();
    Verdict v = Verdict::Pass;
    double previous_bound = std::numeric_limits<double>::infinity();
    bool decreasing = true;
    for (size_t n : options.ns) {
        auto spec = CovarianceSpec::forrelation(n);
        double big_n = static_cast<double>(spec.dim());
        double eps = default_epsilon(spec.dim());
        double t = tal_bound_parameter(options.ell, options.depth, big_n, options.c, 2);
        double bound = main_theorem_bound(n, t);
        decreasing = decreasing && bound < previous_bound;
        previous_bound = bound;

        nlohmann::json row{
            {"n", n},
            {"N", spec.dim()},
            {"epsilon", eps},
            {"bound_eps_over_4", eps / 4},
            {"t", t},
            {"bound_main", bound},
            {"bound_main_times_sqrt_N", bound * std::sqrt(big_n)},
        };
        if (n <= options.mc_max_n && options.samples > 0) {
            auto config = SamplerConfig::standard(spec.dim(), options.dt_divisor);
            config.seed = splitmix64(options.seed ^ n);
            config.workers = options.workers;
            auto rep = verify_proposition(spec, config, options.samples);
            row["mean_phi"] = rep.estimates["mean_phi"];
            row["se_phi"] = rep.estimates["se_phi"];
            row["mean_tau"] = rep.estimates["mean_tau"];
            row["verdict"] = verdict_name(rep.verdict);
            v = combine(v, rep.verdict);
        } else {
            row["mean_phi"] = nullptr;
            row["se_phi"] = nullptr;
            row["mean_tau"] = nullptr;
            row["verdict"] = nullptr;
        }
        rows.push_back(std::move(row));
    }
    ExperimentReport report;
    report.name = "sweep";
    report.parameters = {
        {"ns", options.ns},
        {"seed", options.seed},
        {"mc_max_n", options.mc_max_n},
        {"dt_divisor", options.dt_divisor},
        {"ell", options.ell},
        {"depth", options.depth},
        {"c", options.c},
        {"k", 2},
    };
    report.samples = options.samples;
    report.estimates["rows"] = std::move(rows);
    report.estimates["bound_decreasing"] = decreasing;
    report.verdict = combine(v, decreasing ? Verdict::Pass : Verdict::Fail);
    report.wall_time_s = seconds_since(start);
    return report;
}

}  // namespace forrelab
