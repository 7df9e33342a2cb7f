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

#ifndef FORRELAB_REPORT_H
#define FORRELAB_REPORT_H

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "json.hpp"

namespace forrelab {

/// Width of every statistical margin, in standard errors.
constexpr double SE_MARGIN = 4.0;

enum class Verdict {
    Pass,
    Fail,
    Inconclusive,
};

std::string_view verdict_name(Verdict v);
/// Worst of two verdicts: Fail > Inconclusive > Pass.
Verdict combine(Verdict a, Verdict b);

/// Sample mean and standard error of the mean.
struct Estimate {
    double mean = 0;
    double se = 0;
    size_t count = 0;
};

/// Sequential accumulator (Welford). Reductions in this library always add
/// values in path-index order so results do not depend on the worker count.
class MeanAccumulator {
   public:
    void add(double x);
    Estimate estimate() const;
    size_t count() const {
        return count_;
    }

   private:
    size_t count_ = 0;
    double mean_ = 0;
    double m2_ = 0;
};

Estimate estimate_of(std::span<const double> values);

/// Standard error of the difference of two independent estimates.
double combined_se(const Estimate &a, const Estimate &b);

struct ExperimentReport {
    std::string name;
    /// Echo of the configuration (flattened into the JSON output).
    nlohmann::json parameters = nlohmann::json::object();
    /// Point estimates and their standard errors (flattened into the JSON output).
    nlohmann::json estimates = nlohmann::json::object();
    std::optional<double> bound;
    Verdict verdict = Verdict::Inconclusive;
    size_t samples = 0;
    double wall_time_s = 0;

    /// Records "mean_<key>" and "se_<key>".
    void add_estimate(const std::string &key, const Estimate &e);

    /// Flat JSON object: name, verdict, pass, samples, bound, every parameter
    /// and estimate, and (when `with_timing`) wall_time_s and timestamp.
    nlohmann::json to_json(bool with_timing = true) const;
};

}  // namespace forrelab

#endif
