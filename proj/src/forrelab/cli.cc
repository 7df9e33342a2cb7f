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

#include "forrelab/cli.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "forrelab/boolean_function.h"
#include "forrelab/covariance.h"
#include "forrelab/errors.h"
#include "forrelab/forrelation.h"
#include "forrelab/report.h"
#include "forrelab/sampler.h"
#include "forrelab/verifier.h"
#include "forrelab/wht.h"

namespace forrelab {

namespace {

constexpr int EXIT_CANT_CREATE = 73;
constexpr size_t MAX_INLINE_TRUTH_TABLE_VARS = 16;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
    int code;
    InputError(const std::string &what, int code) : std::runtime_error(what), code(code) {
    }
};

struct RunConfig {
    size_t n = 0;
    std::optional<double> epsilon;
    size_t dt_divisor = DEFAULT_DT_DIVISOR;
    size_t samples = 100000;
    uint64_t seed = 0;
    bool bridge = false;
    size_t workers = 0;
    std::string output;
    bool no_timestamp = false;
    std::string dump_paths;

    std::string function_file;
    std::vector<int> truth_table;
    std::optional<double> gamma;
    std::optional<double> t;

    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> anchor;
    size_t shots = 0;

    bool round = false;
    bool no_rounding = false;

    std::string n_range;
    size_t mc_max_n = 256;
    double ell = 1;
    int depth = 2;
    double c = 1;
};

uint64_t default_seed() {
    if (const char *env = std::getenv("FORRELAB_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception &) {
        }
    }
    return 0;
}

void add_sampling_options(CLI::App *cmd, RunConfig &cfg) {
    cmd->add_option("--epsilon", cfg.epsilon, "Time horizon (default 1/(8 ln N))");
    cmd->add_option("--dt-divisor", cfg.dt_divisor, "Steps per horizon: dt = epsilon / divisor")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--samples", cfg.samples, "Number of sampled paths")->check(CLI::PositiveNumber);
    cmd->add_option("--seed", cfg.seed, "Master seed (default $FORRELAB_SEED or 0)");
    cmd->add_flag("--bridge", cfg.bridge, "Brownian-bridge exit correction between grid points");
    cmd->add_option("--workers", cfg.workers, "Worker threads (0 = all cores); results do not depend on it");
}

void add_output_options(CLI::App *cmd, RunConfig &cfg) {
    cmd->add_option("--output", cfg.output, "Write the report to this file instead of stdout");
    cmd->add_flag("--no-timestamp", cfg.no_timestamp, "Omit timestamp and wall time (byte-comparable output)");
}

void add_function_options(CLI::App *cmd, RunConfig &cfg) {
    auto *file = cmd->add_option(
        "--function", cfg.function_file, "JSON function file: {\"n\": N, \"coeffs\": [...]} or {\"truth_table\": [...]}");
    auto *table = cmd->add_option(
                          "--truth-table",
                          cfg.truth_table,
                          "Inline +-1 truth table (row bit i = 1 means x_i = -1), N <= 16")
                      ->delimiter(',');
    file->excludes(table);
}

BooleanFunction load_function(const RunConfig &cfg) {
    if (!cfg.function_file.empty()) {
        std::ifstream in(cfg.function_file);
        if (!in) {
            throw InputError("cannot read function file '" + cfg.function_file + "'", EXIT_NO_INPUT);
        }
        try {
            return BooleanFunction::from_json(nlohmann::json::parse(in));
        } catch (const std::exception &e) {
            throw InputError("bad function file '" + cfg.function_file + "': " + e.what(), EXIT_BAD_DATA);
        }
    }
    if (!cfg.truth_table.empty()) {
        if (cfg.truth_table.size() > (size_t{1} << MAX_INLINE_TRUTH_TABLE_VARS)) {
            throw UsageError("inline truth tables support N <= 16");
        }
        return BooleanFunction::from_truth_table(cfg.truth_table);
    }
    throw UsageError("one of --function or --truth-table is required");
}

SamplerConfig sampler_config(const RunConfig &cfg, size_t dim) {
    SamplerConfig config = cfg.epsilon ? SamplerConfig::with_epsilon(*cfg.epsilon, cfg.dt_divisor)
                                       : SamplerConfig::standard(dim, cfg.dt_divisor);
    config.bridge_correction = cfg.bridge;
    config.seed = cfg.seed;
    config.workers = cfg.workers;
    return config;
}

CovarianceSpec forrelation_spec(size_t n) {
    if (n == 0 || !is_power_of_two(n)) {
        throw UsageError("--n must be a power of two");
    }
    return CovarianceSpec::forrelation(n);
}

// Covariance for a function on N variables: equicorrelated with --gamma, or
// the forrelation matrix with n = N / 2.
CovarianceSpec covariance_for(const RunConfig &cfg, size_t dim) {
    if (cfg.gamma) {
        return CovarianceSpec::equicorrelated(dim, *cfg.gamma);
    }
    if (dim < 2 || dim % 2 != 0 || !is_power_of_two(dim / 2)) {
        throw UsageError("function must have N = 2n variables (n a power of two), or pass --gamma");
    }
    return CovarianceSpec::forrelation(dim / 2);
}

std::vector<size_t> parse_range(const std::string &text) {
    auto dots = text.find("..");
    size_t lo, hi;
    try {
        if (dots == std::string::npos) {
            lo = hi = std::stoull(text);
        } else {
            lo = std::stoull(text.substr(0, dots));
            hi = std::stoull(text.substr(dots + 2));
        }
    } catch (const std::exception &) {
        throw UsageError("--n expects N or LO..HI, got '" + text + "'");
    }
    if (!is_power_of_two(lo) || !is_power_of_two(hi) || lo > hi) {
        throw UsageError("sweep bounds must be powers of two with LO <= HI");
    }
    std::vector<size_t> out;
    for (size_t n = lo; n <= hi; n *= 2) {
        out.push_back(n);
    }
    return out;
}

std::vector<int> to_signs(const std::vector<double> &v, const char *name) {
    std::vector<int> out;
    for (double d : v) {
        if (d != 1 && d != -1) {
            throw UsageError(std::string(name) + " entries must be +-1 for this subcommand");
        }
        out.push_back(static_cast<int>(d));
    }
    return out;
}

int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return EXIT_PASS;
        case Verdict::Fail:
            return EXIT_FAIL;
        case Verdict::Inconclusive:
            return EXIT_INCONCLUSIVE;
    }
    return EXIT_INCONCLUSIVE;
}

std::string render(const nlohmann::json &j) {
    return j.dump(2) + "\n";
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content)) {
        throw InputError("cannot write '" + path + "'", EXIT_CANT_CREATE);
    }
}

std::string paths_csv(const CovarianceSpec &spec, const SamplerConfig &config, size_t samples, bool with_bits) {
    struct Row {
        StoppedSample sample;
        std::vector<int> bits;
    };
    auto rows = map_streams(samples, config.seed, config.workers, [&](size_t, Rng &rng) {
        Row r{sample_stopped_path(spec, config, rng), {}};
        if (with_bits) {
            r.bits = boolean_round(r.sample.x_tau, rng);
        }
        return r;
    });
    std::string out = path_csv_header(spec.dim(), with_bits) + "\n";
    for (size_t p = 0; p < rows.size(); p++) {
        out += path_csv_row(p, rows[p].sample, with_bits ? &rows[p].bits : nullptr) + "\n";
    }
    return out;
}

std::string dynkin_csv(const BooleanFunction &f, const CovarianceSpec &spec, const SamplerConfig &config, size_t samples) {
    std::ostringstream out;
    out.precision(17);
    out << "stream,tau,f_value,accumulator\n";
    auto records = dynkin_path_records(f, spec, config, samples);
    for (size_t p = 0; p < records.size(); p++) {
        out << p << ',' << records[p].tau << ',' << records[p].f_value << ',' << records[p].accumulator << '\n';
    }
    return out.str();
}

struct Outcome {
    std::string text;
    int code = EXIT_PASS;
    std::string dump;
};

Outcome report_outcome(const ExperimentReport &report, const RunConfig &cfg) {
    return {render(report.to_json(!cfg.no_timestamp)), exit_code(report.verdict), {}};
}

Outcome run_sample(const RunConfig &cfg) {
    auto spec = forrelation_spec(cfg.n);
    auto config = sampler_config(cfg, spec.dim());
    return {paths_csv(spec, config, cfg.samples, cfg.round), EXIT_PASS, {}};
}

Outcome run_phi(const RunConfig &cfg) {
    if (cfg.x.size() != cfg.y.size()) {
        throw UsageError("--x and --y must have the same length");
    }
    if (cfg.n != 0 && cfg.n != cfg.x.size()) {
        throw UsageError("--n does not match the length of --x");
    }
    nlohmann::json j{{"phi", phi(std::span<const double>(cfg.x), std::span<const double>(cfg.y))}};
    return {render(j), EXIT_PASS, {}};
}

Outcome run_accept(const RunConfig &cfg) {
    if (cfg.n != 0 && cfg.n != cfg.x.size()) {
        throw UsageError("--n does not match the length of --x");
    }
    auto x = to_signs(cfg.x, "--x");
    auto y = to_signs(cfg.y, "--y");
    nlohmann::json j{
        {"phi", phi(x, y)},
        {"amplitude", statevector_amplitude(x, y)},
        {"accept_probability", accept_probability(x, y)},
    };
    if (cfg.shots > 0) {
        auto hits = map_streams(cfg.shots, cfg.seed, cfg.workers, [&](size_t, Rng &rng) {
            return sample_acceptance(x, y, rng) ? 1 : 0;
        });
        size_t accepted = 0;
        for (int h : hits) {
            accepted += static_cast<size_t>(h);
        }
        j["shots"] = cfg.shots;
        j["accepted"] = accepted;
        j["seed"] = cfg.seed;
    }
    return {render(j), EXIT_PASS, {}};
}

Outcome run_verify_lemma(const RunConfig &cfg) {
    auto f = load_function(cfg);
    size_t dim = f.n_vars();
    std::vector<std::vector<double>> anchors;
    std::string anchor_source;
    if (!cfg.anchor.empty()) {
        anchors.push_back(cfg.anchor);
        anchor_source = "supplied";
    } else if (dim <= 4) {
        static constexpr double GRID[5] = {-0.5, -0.25, 0.0, 0.25, 0.5};
        size_t total = 1;
        for (size_t i = 0; i < dim; i++) {
            total *= 5;
        }
        for (size_t code = 0; code < total; code++) {
            std::vector<double> a(dim);
            size_t rest = code;
            for (size_t i = 0; i < dim; i++) {
                a[i] = GRID[rest % 5];
                rest /= 5;
            }
            anchors.push_back(std::move(a));
        }
        anchor_source = "grid5";
    } else {
        Rng rng = stream_rng(cfg.seed, 0);
        for (size_t k = 0; k < 25; k++) {
            std::vector<double> a(dim);
            for (auto &v : a) {
                v = uniform01(rng) - 0.5;
            }
            anchors.push_back(std::move(a));
        }
        anchor_source = "random25";
    }
    constexpr double TOL = 1e-9;
    double worst = 0;
    for (const auto &a : anchors) {
        worst = std::max(worst, verify_restriction_lemma(f, a));
    }
    ExperimentReport report;
    report.name = "restriction_lemma";
    report.parameters = {{"N", dim}, {"anchors", anchors.size()}, {"anchor_source", anchor_source}, {"seed", cfg.seed}};
    report.samples = anchors.size();
    report.bound = TOL;
    report.estimates["max_residual"] = worst;
    report.verdict = worst < TOL ? Verdict::Pass : Verdict::Fail;
    return report_outcome(report, cfg);
}

Outcome run_verify_dynkin(const RunConfig &cfg) {
    auto f = load_function(cfg);
    auto spec = covariance_for(cfg, f.n_vars());
    auto config = sampler_config(cfg, spec.dim());
    auto out = report_outcome(verify_dynkin(f, spec, config, cfg.samples), cfg);
    if (!cfg.dump_paths.empty()) {
        out.dump = dynkin_csv(f, spec, config, cfg.samples);
    }
    return out;
}

Outcome run_verify_main(const RunConfig &cfg) {
    auto f = load_function(cfg);
    auto spec = covariance_for(cfg, f.n_vars());
    auto config = sampler_config(cfg, spec.dim());
    if (!cfg.t && f.n_vars() > 12) {
        throw UsageError("N > 12: the exhaustive restriction search is unavailable, pass --t");
    }
    auto out = report_outcome(verify_main_theorem(f, spec, config, cfg.samples, cfg.t), cfg);
    if (!cfg.dump_paths.empty()) {
        out.dump = paths_csv(spec, config, cfg.samples, false);
    }
    return out;
}

Outcome run_verify_prop(const RunConfig &cfg) {
    auto spec = forrelation_spec(cfg.n);
    auto config = sampler_config(cfg, spec.dim());
    auto out = report_outcome(verify_proposition(spec, config, cfg.samples), cfg);
    if (!cfg.dump_paths.empty()) {
        out.dump = paths_csv(spec, config, cfg.samples, false);
    }
    return out;
}

Outcome run_advantage(const RunConfig &cfg) {
    auto spec = forrelation_spec(cfg.n);
    auto config = sampler_config(cfg, spec.dim());
    auto out = report_outcome(advantage_experiment(spec, config, cfg.samples, !cfg.no_rounding), cfg);
    if (!cfg.dump_paths.empty()) {
        out.dump = paths_csv(spec, config, cfg.samples, false);
    }
    return out;
}

Outcome run_sweep(const RunConfig &cfg) {
    SweepOptions options;
    options.ns = parse_range(cfg.n_range);
    options.samples = cfg.samples;
    options.seed = cfg.seed;
    options.workers = cfg.workers;
    options.dt_divisor = cfg.dt_divisor;
    options.mc_max_n = cfg.mc_max_n;
    options.ell = cfg.ell;
    options.depth = cfg.depth;
    options.c = cfg.c;
    return report_outcome(sweep_report(options), cfg);
}

}  // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err) {
    RunConfig cfg;
    cfg.seed = default_seed();

    CLI::App app{"Stopped correlated Brownian motion and forrelation verification toolkit", "forrelab"};
    app.require_subcommand(1);

    auto *sample = app.add_subcommand(
        "sample",
        "Draw stopped paths X_tau of dX = sigma dB (Sigma = [[I, H], [H, I]]), stopped on leaving "
        "[-1/2, 1/2]^N or at epsilon. Writes CSV: stream,tau,exited,x1..xN[,z1..zN].");
    sample->add_option("--n", cfg.n, "Half dimension n (power of two), N = 2n")->required();
    sample->add_flag("--round", cfg.round, "Append independently rounded +-1 bits z_i");
    add_sampling_options(sample, cfg);
    sample->add_option("--output", cfg.output, "Write CSV to this file instead of stdout");

    auto *phi_cmd = app.add_subcommand("phi", "Forrelation statistic phi(x, y) = (1/n) x^T H y.");
    phi_cmd->add_option("--n", cfg.n, "Length of x and y (power of two)");
    phi_cmd->add_option("--x", cfg.x, "Comma-separated x")->required()->delimiter(',');
    phi_cmd->add_option("--y", cfg.y, "Comma-separated y")->required()->delimiter(',');
    phi_cmd->add_option("--output", cfg.output, "Write JSON to this file instead of stdout");

    auto *accept = app.add_subcommand(
        "accept",
        "Acceptance probability (1 + phi)/2 of the one-query forrelation algorithm, cross-checked "
        "against the amplitude <0|H D_x H D_y H|0> from a state-vector simulation.");
    accept->add_option("--n", cfg.n, "Length of x and y (power of two)");
    accept->add_option("--x", cfg.x, "Comma-separated +-1 x")->required()->delimiter(',');
    accept->add_option("--y", cfg.y, "Comma-separated +-1 y")->required()->delimiter(',');
    accept->add_option("--shots", cfg.shots, "Also sample this many runs of the algorithm");
    accept->add_option("--seed", cfg.seed, "Seed for --shots");
    accept->add_option("--workers", cfg.workers, "Worker threads (0 = all cores)");
    accept->add_option("--output", cfg.output, "Write JSON to this file instead of stdout");

    auto *lemma = app.add_subcommand(
        "verify-lemma",
        "Restriction identity d_ij f(x) = 4 E_{rho ~ R_x}[d_ij f_rho(0)] by enumerating all 3^N "
        "restrictions (N <= 10); passes when the max residual is below 1e-9.");
    add_function_options(lemma, cfg);
    lemma->add_option("--anchor", cfg.anchor, "Anchor x in [-1/2,1/2]^N (default: 5-point grid for N <= 4)")
        ->delimiter(',');
    lemma->add_option("--seed", cfg.seed, "Seed for random anchors when N > 4");
    add_output_options(lemma, cfg);

    auto *dynkin = app.add_subcommand(
        "verify-dynkin",
        "Dynkin's formula E[f(X_tau)] - f(0) = E[int_0^tau A f(X_s) ds] with A f = (1/2) sum_ij "
        "Sigma_ij d_ij f, by Monte Carlo with a trapezoid-rule path integral.");
    add_function_options(dynkin, cfg);
    dynkin->add_option("--gamma", cfg.gamma, "Use unit-diagonal Sigma with all off-diagonal entries gamma");
    add_sampling_options(dynkin, cfg);
    add_output_options(dynkin, cfg);
    dynkin->add_option("--dump-paths", cfg.dump_paths, "Write per-path CSV stream,tau,f_value,accumulator");

    auto *main_cmd = app.add_subcommand(
        "verify-main",
        "Stopped-process Fourier bound |E[f(X_tau)] - E[f(U)]| <= 2 epsilon gamma t, with t the "
        "maximum level-2 Fourier mass over all restrictions of f (exhaustive for N <= 12).");
    add_function_options(main_cmd, cfg);
    main_cmd->add_option("--gamma", cfg.gamma, "Use unit-diagonal Sigma with all off-diagonal entries gamma");
    main_cmd->add_option("--t", cfg.t, "Supply t instead of computing it");
    add_sampling_options(main_cmd, cfg);
    add_output_options(main_cmd, cfg);
    main_cmd->add_option("--dump-paths", cfg.dump_paths, "Write the sampled paths as CSV");

    auto *prop = app.add_subcommand(
        "verify-prop",
        "Forrelation lower bound: E[phi(x, y)] = E[tau] >= (eps/2) Pr[tau > eps/2] >= eps/4 with "
        "Pr[tau <= eps/2] <= 1/2, at epsilon = 1/(8 ln N).");
    prop->add_option("--n", cfg.n, "Half dimension n (power of two), N = 2n")->required();
    add_sampling_options(prop, cfg);
    add_output_options(prop, cfg);
    prop->add_option("--dump-paths", cfg.dump_paths, "Write the sampled paths as CSV");

    auto *adv = app.add_subcommand(
        "advantage",
        "Distinguisher demo: mean phi and sampled acceptance on the stopped distribution (cube "
        "points and rounded bits) against uniform +-1 inputs; expects advantage >= eps/8.");
    adv->add_option("--n", cfg.n, "Half dimension n (power of two), N = 2n")->required();
    adv->add_flag("--no-rounding", cfg.no_rounding, "Skip the rounded-bit columns");
    add_sampling_options(adv, cfg);
    add_output_options(adv, cfg);
    adv->add_option("--dump-paths", cfg.dump_paths, "Write the sampled paths as CSV");

    auto *sweep = app.add_subcommand(
        "sweep",
        "Per-n table of mean phi against eps/4 and of the bound 2 eps gamma t with "
        "t = (c ln^ell N)^{2(d-1)}, which should decay like polylog(N)/sqrt(N).");
    sweep->add_option("--n", cfg.n_range, "Range LO..HI of powers of two")->required();
    sweep->add_option("--mc-max-n", cfg.mc_max_n, "Largest n that gets Monte Carlo columns");
    sweep->add_option("--ell", cfg.ell, "Circuit size exponent (gates <= ln^ell N)");
    sweep->add_option("--depth", cfg.depth, "Circuit depth d")->check(CLI::PositiveNumber);
    sweep->add_option("--c", cfg.c, "Universal constant c");
    add_sampling_options(sweep, cfg);
    add_output_options(sweep, cfg);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &e) {
        app.exit(e, out, err);
        return EXIT_PASS;
    } catch (const CLI::CallForAllHelp &e) {
        app.exit(e, out, err);
        return EXIT_PASS;
    } catch (const CLI::ParseError &e) {
        app.exit(e, out, err);
        return EXIT_USAGE;
    }

    try {
        Outcome outcome;
        if (app.got_subcommand(sample)) {
            outcome = run_sample(cfg);
        } else if (app.got_subcommand(phi_cmd)) {
            outcome = run_phi(cfg);
        } else if (app.got_subcommand(accept)) {
            outcome = run_accept(cfg);
        } else if (app.got_subcommand(lemma)) {
            outcome = run_verify_lemma(cfg);
        } else if (app.got_subcommand(dynkin)) {
            outcome = run_verify_dynkin(cfg);
        } else if (app.got_subcommand(main_cmd)) {
            outcome = run_verify_main(cfg);
        } else if (app.got_subcommand(prop)) {
            outcome = run_verify_prop(cfg);
        } else if (app.got_subcommand(adv)) {
            outcome = run_advantage(cfg);
        } else {
            outcome = run_sweep(cfg);
        }
        if (!cfg.dump_paths.empty()) {
            write_file(cfg.dump_paths, outcome.dump);
        }
        if (cfg.output.empty()) {
            out << outcome.text;
        } else {
            write_file(cfg.output, outcome.text);
        }
        return outcome.code;
    } catch (const InputError &e) {
        err << "error: " << e.what() << "\n";
        return e.code;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const DimensionError &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const DomainError &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    } catch (const CapacityError &e) {
        err << "error: " << e.what() << "\n";
        return EXIT_USAGE;
    }
}

}  // namespace forrelab
