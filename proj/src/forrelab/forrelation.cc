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

#include "forrelab/forrelation.h"

#include <chrono>
#include <cmath>
#include <string>

#include "forrelab/errors.h"
#include "forrelab/wht.h"

namespace forrelab {

namespace {

void check_pair(size_t x_size, size_t y_size) {
    if (x_size != y_size) {
        throw DimensionError("x and y must have the same length");
    }
    exact_log2(x_size);
}

void check_signs(std::span<const int> v) {
    for (int s : v) {
        if (s != 1 && s != -1) {
            throw DomainError("forrelation query inputs must be +-1, got " + std::to_string(s));
        }
    }
}

}  // namespace

double phi(std::span<const double> x, std::span<const double> y) {
    check_pair(x.size(), y.size());
    thread_local std::vector<double> hy;
    hy.assign(y.begin(), y.end());
    wht_in_place(hy);
    double dot = 0;
    for (size_t i = 0; i < x.size(); i++) {
        dot += x[i] * hy[i];
    }
    return dot / static_cast<double>(x.size());
}

double phi(std::span<const int> x, std::span<const int> y) {
    std::vector<double> xd(x.begin(), x.end());
    std::vector<double> yd(y.begin(), y.end());
    return phi(xd, yd);
}

double accept_probability(std::span<const int> x, std::span<const int> y) {
    check_pair(x.size(), y.size());
    check_signs(x);
    check_signs(y);
    return 0.5 * (1 + phi(x, y));
}

bool sample_acceptance(std::span<const int> x, std::span<const int> y, Rng &rng) {
    return uniform01(rng) < accept_probability(x, y);
}

StateVector::StateVector(size_t num_qubits) : num_qubits_(num_qubits) {
    if (num_qubits > MAX_QUBITS) {
        throw CapacityError("state vector supports at most 20 qubits");
    }
    amps_.assign(size_t{1} << num_qubits, 0.0);
    amps_[0] = 1.0;
}

void StateVector::apply_hadamard(size_t qubit) {
    if (qubit >= num_qubits_) {
        throw DimensionError("qubit index out of range");
    }
    constexpr double INV_SQRT2 = 0.70710678118654752440;
    size_t mask = size_t{1} << qubit;
    for (size_t i = 0; i < amps_.size(); i++) {
        if (i & mask) {
            continue;
        }
        double a0 = amps_[i];
        double a1 = amps_[i | mask];
        amps_[i] = (a0 + a1) * INV_SQRT2;
        amps_[i | mask] = (a0 - a1) * INV_SQRT2;
    }
}

void StateVector::apply_hadamard_all() {
    for (size_t q = 0; q < num_qubits_; q++) {
        apply_hadamard(q);
    }
}

void StateVector::apply_phase_oracle(std::span<const int> signs) {
    if (signs.size() != amps_.size()) {
        throw DimensionError("phase oracle length must be 2^m");
    }
    for (size_t i = 0; i < amps_.size(); i++) {
        if (signs[i] < 0) {
            amps_[i] = -amps_[i];
        }
    }
}

double statevector_amplitude(std::span<const int> x, std::span<const int> y) {
    check_pair(x.size(), y.size());
    check_signs(x);
    check_signs(y);
    size_t m = exact_log2(x.size());
    if (m > StateVector::MAX_QUBITS) {
        throw CapacityError("state vector supports at most 20 qubits");
    }
    StateVector state(m);
    state.apply_hadamard_all();
    state.apply_phase_oracle(y);
    state.apply_hadamard_all();
    state.apply_phase_oracle(x);
    state.apply_hadamard_all();
    return state.amplitudes()[0];
}

ExperimentReport advantage_experiment(
    const CovarianceSpec &spec, const SamplerConfig &config, size_t samples, bool with_rounding) {
    auto start = std::chrono::steady_clock::now();
    if (!spec.is_forrelation()) {
        throw DomainError("advantage experiment needs the forrelation covariance");
    }
    if (samples == 0) {
        throw DomainError("samples must be positive");
    }
    config.validate();
    size_t n = spec.half();

    struct Row {
        double phi;
        double tau;
        double phi_bits;
        double accept_bits;
        double early;
    };
    auto rows = map_streams(samples, config.seed, config.workers, [&](size_t, Rng &rng) {
        auto s = sample_stopped_path(spec, config, rng);
        std::span<const double> xs(s.x_tau);
        Row r{};
        r.phi = phi(xs.first(n), xs.subspan(n));
        r.tau = s.tau;
        r.early = s.exited && s.tau <= config.epsilon / 2 ? 1.0 : 0.0;
        if (with_rounding) {
            auto z = boolean_round(s.x_tau, rng);
            std::span<const int> zs(z);
            r.phi_bits = phi(zs.first(n), zs.subspan(n));
            r.accept_bits = sample_acceptance(zs.first(n), zs.subspan(n), rng) ? 1.0 : 0.0;
        }
        return r;
    });

    MeanAccumulator phi_acc, tau_acc, diff_acc, bits_acc, accept_acc, early_acc;
    for (const auto &r : rows) {
        phi_acc.add(r.phi);
        tau_acc.add(r.tau);
        diff_acc.add(r.phi - r.tau);
        early_acc.add(r.early);
        if (with_rounding) {
            bits_acc.add(r.phi_bits);
            accept_acc.add(r.accept_bits);
        }
    }
    Estimate phi_e = phi_acc.estimate();
    Estimate tau_e = tau_acc.estimate();
    double bound = config.epsilon / 4;

    auto null_report = uniform_null_experiment(n, samples, splitmix64(config.seed ^ 0xA5A5A5A5ULL), config.workers);

    ExperimentReport report;
    report.name = "advantage";
    report.parameters = config.to_json();
    report.parameters["n"] = n;
    report.parameters["N"] = spec.dim();
    report.parameters["rounding"] = with_rounding;
    report.samples = samples;
    report.bound = bound;
    report.add_estimate("phi", phi_e);
    report.add_estimate("tau", tau_e);
    report.add_estimate("phi_minus_tau", diff_acc.estimate());
    report.add_estimate("exit_before_half_eps", early_acc.estimate());
    report.estimates["bound_eps_over_4"] = bound;
    report.estimates["mean_phi_uniform"] = null_report.estimates["mean_phi_uniform"];
    report.estimates["se_phi_uniform"] = null_report.estimates["se_phi_uniform"];
    report.estimates["mean_accept_uniform"] = null_report.estimates["mean_accept_uniform"];
    report.estimates["se_accept_uniform"] = null_report.estimates["se_accept_uniform"];

    double identity_gap = std::abs(phi_e.mean - tau_e.mean);
    double identity_se = combined_se(phi_e, tau_e);
    Verdict v;
    if (phi_e.mean - SE_MARGIN * phi_e.se >= bound && identity_gap <= SE_MARGIN * identity_se) {
        v = Verdict::Pass;
    } else if (phi_e.mean + SE_MARGIN * phi_e.se < bound || identity_gap > SE_MARGIN * identity_se) {
        v = Verdict::Fail;
    } else {
        v = Verdict::Inconclusive;
    }
    if (with_rounding) {
        Estimate bits_e = bits_acc.estimate();
        Estimate accept_e = accept_acc.estimate();
        report.add_estimate("phi_rounded", bits_e);
        report.add_estimate("accept_rounded", accept_e);
        Estimate accept_null{null_report.estimates["mean_accept_uniform"].get<double>(),
                             null_report.estimates["se_accept_uniform"].get<double>(), samples};
        Estimate advantage{accept_e.mean - accept_null.mean, combined_se(accept_e, accept_null), samples};
        report.add_estimate("acceptance_advantage", advantage);
        report.estimates["bound_eps_over_8"] = config.epsilon / 8;
    }
    v = combine(v, null_report.verdict);
    report.verdict = v;
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

ExperimentReport uniform_null_experiment(size_t n, size_t samples, uint64_t seed, size_t workers) {
    auto start = std::chrono::steady_clock::now();
    exact_log2(n);
    if (samples == 0) {
        throw DomainError("samples must be positive");
    }
    struct Row {
        double phi;
        double accept;
    };
    auto rows = map_streams(samples, seed, workers, [&](size_t, Rng &rng) {
        std::vector<int> x(n), y(n);
        for (auto &v : x) {
            v = (rng() >> 63) ? 1 : -1;
        }
        for (auto &v : y) {
            v = (rng() >> 63) ? 1 : -1;
        }
        return Row{phi(x, y), sample_acceptance(x, y, rng) ? 1.0 : 0.0};
    });
    MeanAccumulator phi_acc, accept_acc;
    for (const auto &r : rows) {
        phi_acc.add(r.phi);
        accept_acc.add(r.accept);
    }
    Estimate phi_e = phi_acc.estimate();
    Estimate accept_e = accept_acc.estimate();

    ExperimentReport report;
    report.name = "uniform_null";
    report.parameters = {{"n", n}, {"seed", seed}};
    report.samples = samples;
    report.add_estimate("phi_uniform", phi_e);
    report.add_estimate("accept_uniform", accept_e);
    bool ok = std::abs(phi_e.mean) <= SE_MARGIN * phi_e.se && std::abs(accept_e.mean - 0.5) <= SE_MARGIN * accept_e.se;
    report.verdict = ok ? Verdict::Pass : Verdict::Fail;
    report.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return report;
}

}  // namespace forrelab
