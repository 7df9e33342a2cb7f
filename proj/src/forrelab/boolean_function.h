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

#ifndef FORRELAB_BOOLEAN_FUNCTION_H
#define FORRELAB_BOOLEAN_FUNCTION_H

#include <cstddef>
#include <span>
#include <vector>

#include "forrelab/restriction.h"
#include "json.hpp"

namespace forrelab {

/// A real multilinear polynomial in N variables, stored as its dense table of
/// Fourier coefficients indexed by subset bitmask (bit i <-> variable i+1):
///
///     f(x) = sum_S coeffs[S] * prod_{i in S} x_i
///
/// Truth tables use the encoding: bit i of the row index is 1 iff x_i = -1.
class BooleanFunction {
   public:
    static constexpr size_t MAX_VARS = 24;

    BooleanFunction() = default;

    /// Coefficients from a +-1 truth table (length 2^N). Throws DomainError on
    /// any entry other than -1 or +1.
    static BooleanFunction from_truth_table(std::span<const int> table);
    /// Coefficients from an arbitrary real-valued table on the hypercube.
    static BooleanFunction from_values(std::span<const double> table);
    static BooleanFunction from_coefficients(std::vector<double> coeffs);
    static BooleanFunction constant(size_t n_vars, double value);
    /// The character chi_S(x) = prod_{i in S} x_i.
    static BooleanFunction character(size_t n_vars, SubsetMask subset);

    size_t n_vars() const {
        return n_vars_;
    }
    std::span<const double> coefficients() const {
        return coeffs_;
    }
    double coefficient(SubsetMask subset) const {
        return coeffs_.at(subset);
    }

    /// Values at every hypercube point, in truth-table order.
    std::vector<double> values() const;

    nlohmann::json to_json() const;
    static BooleanFunction from_json(const nlohmann::json &j);

    bool operator==(const BooleanFunction &other) const = default;

   private:
    BooleanFunction(size_t n_vars, std::vector<double> coeffs);

    size_t n_vars_ = 0;
    std::vector<double> coeffs_{0.0};
};

/// Hypercube point for truth-table row `index`.
std::vector<double> hypercube_point(size_t n_vars, size_t index);

double eval_multilinear(const BooleanFunction &f, std::span<const double> x);

/// f_rho, kept over all N variables with zero coefficients outside free(rho).
BooleanFunction restrict(const BooleanFunction &f, const Restriction &rho);

/// d_S f(x) of the multilinear expansion, from the coefficient table.
double partial_derivative(const BooleanFunction &f, SubsetMask subset, std::span<const double> x);

/// d_S f(x) by iterated forward differences with step h. Exact for any h != 0
/// because f is affine in each variable.
double finite_difference_derivative(
    const BooleanFunction &f, SubsetMask subset, std::span<const double> x, double h = 1.0);

/// Second difference of f along a single coordinate. Vanishes identically for
/// multilinear f.
double same_variable_second_difference(const BooleanFunction &f, size_t i, std::span<const double> x, double h = 1.0);

/// sum_{|S| = k} |coeffs[S]|.
double level_mass(const BooleanFunction &f, size_t k);

/// max over all rho in {-1, +1, *}^N of level_mass(f_rho, 2). Exhaustive over
/// the 3^N restrictions; throws CapacityError for N > 12.
double max_restricted_level2_mass(const BooleanFunction &f);

/// Lower bound on max_restricted_level2_mass from `trials` random restrictions
/// (each coordinate uniform over {-1, +1, *}), for N beyond the exhaustive cap.
double sampled_restricted_level2_mass(const BooleanFunction &f, size_t trials, Rng &rng);

}  // namespace forrelab

#endif
