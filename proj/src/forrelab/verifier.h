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

#ifndef FORRELAB_VERIFIER_H
#define FORRELAB_VERIFIER_H

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "forrelab/boolean_function.h"
#include "forrelab/covariance.h"
#include "forrelab/report.h"
#include "forrelab/sampler.h"

namespace forrelab {

/// Largest N accepted by verify_restriction_lemma (3^N restrictions).
constexpr size_t MAX_LEMMA_VARS = 10;

/// max over i != j of |d_ij f(x) - 4 sum_rho P[rho] d_ij f_rho(0)| with rho
/// ranging over all 3^N restrictions drawn from R_x. Throws DomainError if x
/// leaves [-1/2, 1/2]^N and CapacityError for N > 10.
double verify_restriction_lemma(const BooleanFunction &f, std::span<const double> x);

/// The generator A f = (1/2) sum_{i != j} Sigma_ij d_ij f as a multilinear
/// polynomial. Diagonal terms are omitted after checking that every
/// same-variable second difference of f vanishes (throws std::logic_error
/// otherwise).
BooleanFunction generator_polynomial(const BooleanFunction &f, const CovarianceSpec &spec);

/// Per-path values used by the Dynkin check.
struct DynkinPathRecord {
    double tau;
    double f_value;
    double accumulator;
};

std::vector<DynkinPathRecord> dynkin_path_records(
    const BooleanFunction &f, const CovarianceSpec &spec, const SamplerConfig &config, size_t samples);

/// Compares E[f(X_tau)] - f(0) with E[int_0^tau A f(X_s) ds] (trapezoid rule
/// on the sampling grid). Passes when they agree within SE_MARGIN combined
/// standard errors plus a discretization allowance |d(2 dt) - d(dt)|, where
/// d(h) is the mean gap at step h on the same random streams.
ExperimentReport verify_dynkin(
    const BooleanFunction &f, const CovarianceSpec &spec, const SamplerConfig &config, size_t samples);

/// Checks |E[f(X_tau)] - f_hat(empty)| <= 2 epsilon gamma t. When `t` is not
/// supplied it is max_restricted_level2_mass(f) (CapacityError for N > 12).
ExperimentReport verify_main_theorem(
    const BooleanFunction &f,
    const CovarianceSpec &spec,
    const SamplerConfig &config,
    size_t samples,
    std::optional<double> t = std::nullopt);

/// Same check on already drawn samples of the stopped process.
ExperimentReport verify_main_theorem_on(
    const BooleanFunction &f,
    const CovarianceSpec &spec,
    const SamplerConfig &config,
    std::span<const StoppedSample> samples,
    std::optional<double> t = std::nullopt);

/// Chain of claims for the forrelation covariance: E[phi] = E[tau],
/// E[tau] >= (eps/2) Pr[tau > eps/2], Pr[tau <= eps/2] <= 1/2, and hence
/// E[phi] >= eps/4.
ExperimentReport verify_proposition(const CovarianceSpec &spec, const SamplerConfig &config, size_t samples);

/// (c * ln^ell N)^{(d-1) k}. Throws DomainError unless d >= 1 and k >= 1.
double tal_bound_parameter(double ell, int d, double N, double c, int k);

/// 2 epsilon gamma t at the forrelation parameters for N = 2n:
/// epsilon = 1/(8 ln N), gamma = 1/sqrt(n).
double main_theorem_bound(size_t n, double t);

struct SweepOptions {
    std::vector<size_t> ns;
    size_t samples = 0;
    uint64_t seed = 0;
    size_t workers = 0;
    size_t dt_divisor = DEFAULT_DT_DIVISOR;
    /// Monte Carlo columns are filled only for n <= mc_max_n.
    size_t mc_max_n = 256;
    double ell = 1;
    int depth = 2;
    double c = 1;
};

/// Per-n table: epsilon, eps/4, mean phi (Monte Carlo), the level-2 Tal
/// parameter t and the bound 2 eps gamma t. Passes when every Monte Carlo row
/// satisfies mean phi >= eps/4 and the bound times sqrt(N) / polylog is
/// consistent with a polylog(N)/sqrt(N) decay (strictly decreasing in n).
ExperimentReport sweep_report(const SweepOptions &options);

}  // namespace forrelab

#endif
