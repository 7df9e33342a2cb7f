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

#ifndef FORRELAB_RESTRICTION_H
#define FORRELAB_RESTRICTION_H

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forrelab/rng.h"

namespace forrelab {

/// Bitmask over variables; bit i <-> variable i+1.
using SubsetMask = uint32_t;

enum class Fix : int8_t {
    Minus = -1,
    Free = 0,
    Plus = 1,
};

/// A partial assignment rho in {-1, +1, *}^N.
class Restriction {
   public:
    Restriction() = default;
    explicit Restriction(std::vector<Fix> values);

    static Restriction all_free(size_t n_vars);
    /// Parses strings such as "+-*" ('+', '-', '*').
    static Restriction from_string(std::string_view text);

    size_t size() const {
        return values_.size();
    }
    Fix operator[](size_t i) const {
        return values_[i];
    }
    std::span<const Fix> values() const {
        return values_;
    }
    /// Mask of the '*' coordinates.
    SubsetMask free_mask() const {
        return free_;
    }
    /// Mask of the coordinates fixed to -1.
    SubsetMask minus_mask() const {
        return minus_;
    }
    std::vector<size_t> free_indices() const;

    /// Point obtained by writing `x` into the free coordinates and the fixed
    /// values elsewhere.
    std::vector<double> merge(std::span<const double> x) const;

    std::string str() const;

    bool operator==(const Restriction &other) const = default;

   private:
    std::vector<Fix> values_;
    SubsetMask free_ = 0;
    SubsetMask minus_ = 0;
};

struct FixProbabilities {
    double plus;
    double minus;
    double free;
};

struct WeightedRestriction {
    Restriction restriction;
    double probability;
};

/// Product distribution R_x over restrictions anchored at x in [-1/2, 1/2]^N:
/// coordinate i is +1 w.p. 1/4 + x_i/2, -1 w.p. 1/4 - x_i/2, free w.p. 1/2.
class RestrictionDistribution {
   public:
    /// Throws DomainError if the anchor leaves the cube.
    explicit RestrictionDistribution(std::vector<double> anchor);

    size_t size() const {
        return anchor_.size();
    }
    std::span<const double> anchor() const {
        return anchor_;
    }
    FixProbabilities probabilities(size_t i) const;

    Restriction sample(Rng &rng) const;

    /// All 3^N restrictions with their probabilities (N <= 12).
    std::vector<WeightedRestriction> enumerate() const;

   private:
    std::vector<double> anchor_;
};

inline Restriction sample_restriction(const RestrictionDistribution &dist, Rng &rng) {
    return dist.sample(rng);
}

inline std::vector<WeightedRestriction> enumerate_restrictions(const RestrictionDistribution &dist) {
    return dist.enumerate();
}

}  // namespace forrelab

#endif
