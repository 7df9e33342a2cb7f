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

#include "forrelab/restriction.h"

#include <cmath>

#include "forrelab/errors.h"

namespace forrelab {

namespace {

constexpr size_t MAX_VARS = 24;
constexpr size_t MAX_ENUMERATED_VARS = 12;

}  // namespace

Restriction::Restriction(std::vector<Fix> values) : values_(std::move(values)) {
    if (values_.size() > MAX_VARS) {
        throw CapacityError("restrictions support at most 24 variables");
    }
    for (size_t i = 0; i < values_.size(); i++) {
        if (values_[i] == Fix::Free) {
            free_ |= SubsetMask{1} << i;
        } else if (values_[i] == Fix::Minus) {
            minus_ |= SubsetMask{1} << i;
        }
    }
}

Restriction Restriction::all_free(size_t n_vars) {
    return Restriction(std::vector<Fix>(n_vars, Fix::Free));
}

Restriction Restriction::from_string(std::string_view text) {
    std::vector<Fix> values;
    values.reserve(text.size());
    for (char c : text) {
        switch (c) {
            case '+':
                values.push_back(Fix::Plus);
                break;
            case '-':
                values.push_back(Fix::Minus);
                break;
            case '*':
                values.push_back(Fix::Free);
                break;
            default:
                throw DomainError(std::string("bad restriction character '") + c + "'");
        }
    }
    return Restriction(std::move(values));
}

std::vector<size_t> Restriction::free_indices() const {
    std::vector<size_t> out;
    for (size_t i = 0; i < values_.size(); i++) {
        if (values_[i] == Fix::Free) {
            out.push_back(i);
        }
    }
    return out;
}

std::vector<double> Restriction::merge(std::span<const double> x) const {
    if (x.size() != values_.size()) {
        throw DimensionError("point and restriction lengths differ");
    }
    std::vector<double> out(x.size());
    for (size_t i = 0; i < x.size(); i++) {
        out[i] = values_[i] == Fix::Free ? x[i] : static_cast<double>(static_cast<int8_t>(values_[i]));
    }
    return out;
}

std::string Restriction::str() const {
    std::string out;
    for (Fix v : values_) {
        out += v == Fix::Plus ? '+' : v == Fix::Minus ? '-' : '*';
    }
    return out;
}

RestrictionDistribution::RestrictionDistribution(std::vector<double> anchor) : anchor_(std::move(anchor)) {
    if (anchor_.size() > MAX_VARS) {
        throw CapacityError("restrictions support at most 24 variables");
    }
    for (double a : anchor_) {
        if (!(std::abs(a) <= 0.5)) {
            throw DomainError("restriction anchor must lie in [-1/2, 1/2]^N");
        }
    }
}

FixProbabilities RestrictionDistribution::probabilities(size_t i) const {
    double a = anchor_.at(i);
    return {0.25 + a / 2, 0.25 - a / 2, 0.5};
}

Restriction RestrictionDistribution::sample(Rng &rng) const {
    std::vector<Fix> values(anchor_.size());
    for (size_t i = 0; i < anchor_.size(); i++) {
        auto p = probabilities(i);
        double u = uniform01(rng);
        if (u < p.free) {
            values[i] = Fix::Free;
        } else if (u < p.free + p.plus) {
            values[i] = Fix::Plus;
        } else {
            values[i] = Fix::Minus;
        }
    }
    return Restriction(std::move(values));
}

std::vector<WeightedRestriction> RestrictionDistribution::enumerate() const {
    size_t n = anchor_.size();
    if (n > MAX_ENUMERATED_VARS) {
        throw CapacityError("restriction enumeration supports at most 12 variables");
    }
    size_t total = 1;
    for (size_t i = 0; i < n; i++) {
        total *= 3;
    }
    static constexpr Fix ORDER[3] = {Fix::Minus, Fix::Free, Fix::Plus};
    std::vector<WeightedRestriction> out;
    out.reserve(total);
    std::vector<Fix> values(n);
    for (size_t code = 0; code < total; code++) {
        size_t rest = code;
        double prob = 1;
        for (size_t i = 0; i < n; i++) {
            values[i] = ORDER[rest % 3];
            rest /= 3;
            auto p = probabilities(i);
            prob *= values[i] == Fix::Free ? p.free : values[i] == Fix::Plus ? p.plus : p.minus;
        }
        out.push_back({Restriction(values), prob});
    }
    return out;
}

}  // namespace forrelab
