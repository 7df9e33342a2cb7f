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

#include "forrelab/report.h"

#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>

namespace forrelab {

std::string_view verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass:
            return "pass";
        case Verdict::Fail:
            return "fail";
        case Verdict::Inconclusive:
            return "inconclusive";
    }
    return "inconclusive";
}

Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::Fail || b == Verdict::Fail) {
        return Verdict::Fail;
    }
    if (a == Verdict::Inconclusive || b == Verdict::Inconclusive) {
        return Verdict::Inconclusive;
    }
    return Verdict::Pass;
}

void MeanAccumulator::add(double x) {
    count_++;
    double delta = x - mean_;
    mean_ += delta / static_cast<double>(count_);
    m2_ += delta * (x - mean_);
}

Estimate MeanAccumulator::estimate() const {
    Estimate e;
    e.count = count_;
    e.mean = mean_;
    if (count_ > 1) {
        double var = m2_ / static_cast<double>(count_ - 1);
        e.se = std::sqrt(var / static_cast<double>(count_));
    } else {
        e.se = std::numeric_limits<double>::infinity();
    }
    return e;
}

Estimate estimate_of(std::span<const double> values) {
    MeanAccumulator acc;
    for (double v : values) {
        acc.add(v);
    }
    return acc.estimate();
}

double combined_se(const Estimate &a, const Estimate &b) {
    return std::hypot(a.se, b.se);
}

void ExperimentReport::add_estimate(const std::string &key, const Estimate &e) {
    estimates["mean_" + key] = e.mean;
    estimates["se_" + key] = e.se;
}

nlohmann::json ExperimentReport::to_json(bool with_timing) const {
    nlohmann::json j = nlohmann::json::object();
    j["name"] = name;
    j["verdict"] = verdict_name(verdict);
    j["pass"] = verdict == Verdict::Pass;
    j["samples"] = samples;
    j["bound"] = bound ? nlohmann::json(*bound) : nlohmann::json(nullptr);
    for (const auto &[k, v] : parameters.items()) {
        j[k] = v;
    }
    for (const auto &[k, v] : estimates.items()) {
        j[k] = v;
    }
    if (with_timing) {
        j["wall_time_s"] = wall_time_s;
        std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
        std::tm utc{};
        gmtime_r(&now, &utc);
        char buf[32];
        std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &utc);
        j["timestamp"] = buf;
    }
    return j;
}

}  // namespace forrelab
