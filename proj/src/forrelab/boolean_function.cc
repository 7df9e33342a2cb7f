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

#include "forrelab/boolean_function.h"

#include <bit>
#include <cmath>
#include <string>

#include "forrelab/errors.h"
#include "forrelab/wht.h"

namespace forrelab {

namespace {

constexpr size_t MAX_EXHAUSTIVE_VARS = 12;

void check_point(const BooleanFunction &f, std::span<const double> x) {
    if (x.size() != f.n_vars()) {
        throw DimensionError(
            "point has " + std::to_string(x.size()) + " coordinates, function has " + std::to_string(f.n_vars()));
    }
}

double level2_mass_of_table(std::span<const double> table) {
    double total = 0;
    for (size_t s = 0; s < table.size(); s++) {
        if (std::popcount(s) == 2) {
            total += std::abs(table[s]);
        }
    }
    return total;
}

// Substitutes value `sign` for the variable at bit position `p` of a table
// over `table.size()` = 2^m variables, returning a table over m - 1 variables
// whose positions above p shift down by one.
void fix_variable(std::span<const double> table, size_t p, double sign, std::vector<double> &out) {
    size_t low = size_t{1} << p;
    out.assign(table.size() / 2, 0.0);
    for (size_t s = 0; s < table.size(); s++) {
        size_t target = (s & (low - 1)) | ((s >> 1) & ~(low - 1));
        out[target] += (s & low) ? sign * table[s] : table[s];
    }
}

// Variable i always sits at bit position i: the variables below it are still
// undecided and the decided free variables above it keep their relative order.
void max_level2_recurse(std::span<const double> table, size_t i, std::vector<std::vector<double>> &scratch, double &best) {
    if (i == 0) {
        best = std::max(best, level2_mass_of_table(table));
        return;
    }
    size_t var = i - 1;
    max_level2_recurse(table, var, scratch, best);
    auto &reduced = scratch[var];
    for (double sign : {-1.0, 1.0}) {
        fix_variable(table, var, sign, reduced);
        max_level2_recurse(reduced, var, scratch, best);
    }
}

}  // namespace

BooleanFunction::BooleanFunction(size_t n_vars, std::vector<double> coeffs)
    : n_vars_(n_vars), coeffs_(std::move(coeffs)) {
}

BooleanFunction BooleanFunction::from_values(std::span<const double> table) {
    size_t n = exact_log2(table.size());
    if (n > MAX_VARS) {
        throw CapacityError("at most 24 variables are supported");
    }
    std::vector<double> coeffs(table.begin(), table.end());
    wht_unnormalized_in_place(coeffs);
    double scale = std::ldexp(1.0, -static_cast<int>(n));
    for (double &c : coeffs) {
        c *= scale;
    }
    return BooleanFunction(n, std::move(coeffs));
}

BooleanFunction BooleanFunction::from_truth_table(std::span<const int> table) {
    std::vector<double> values(table.size());
    for (size_t i = 0; i < table.size(); i++) {
        if (table[i] != 1 && table[i] != -1) {
            throw DomainError("truth table entries must be -1 or +1, got " + std::to_string(table[i]));
        }
        values[i] = table[i];
    }
    return from_values(values);
}

BooleanFunction BooleanFunction::from_coefficients(std::vector<double> coeffs) {
    size_t n = exact_log2(coeffs.size());
    if (n > MAX_VARS) {
        throw CapacityError("at most 24 variables are supported");
    }
    for (double c : coeffs) {
        if (!std::isfinite(c)) {
            throw DomainError("coefficients must be finite");
        }
    }
    return BooleanFunction(n, std::move(coeffs));
}

BooleanFunction BooleanFunction::constant(size_t n_vars, double value) {
    if (n_vars > MAX_VARS) {
        throw CapacityError("at most 24 variables are supported");
    }
    std::vector<double> coeffs(size_t{1} << n_vars, 0.0);
    coeffs[0] = value;
    return BooleanFunction(n_vars, std::move(coeffs));
}

BooleanFunction BooleanFunction::character(size_t n_vars, SubsetMask subset) {
    auto f = constant(n_vars, 0.0);
    f.coeffs_.at(subset) = 1.0;
    return f;
}

std::vector<double> BooleanFunction::values() const {
    std::vector<double> out(coeffs_);
    wht_unnormalized_in_place(out);
    return out;
}

nlohmann::json BooleanFunction::to_json() const {
    return nlohmann::json{{"n", n_vars_}, {"coeffs", coeffs_}};
}

BooleanFunction BooleanFunction::from_json(const nlohmann::json &j) {
    if (!j.is_object()) {
        throw DomainError("boolean function JSON must be an object");
    }
    if (j.contains("coeffs")) {
        auto f = from_coefficients(j.at("coeffs").get<std::vector<double>>());
        if (j.contains("n") && j.at("n").get<size_t>() != f.n_vars()) {
            throw DimensionError("\"n\" does not match the coefficient count");
        }
        return f;
    }
    if (j.contains("truth_table")) {
        auto f = from_truth_table(j.at("truth_table").get<std::vector<int>>());
        if (j.contains("n") && j.at("n").get<size_t>() != f.n_vars()) {
            throw DimensionError("\"n\" does not match the truth table length");
        }
        return f;
    }
    throw DomainError("boolean function JSON needs \"coeffs\" or \"truth_table\"");
}

std::vector<double> hypercube_point(size_t n_vars, size_t index) {
    std::vector<double> x(n_vars);
    for (size_t i = 0; i < n_vars; i++) {
        x[i] = ((index >> i) & 1) ? -1.0 : 1.0;
    }
    return x;
}

double eval_multilinear(const BooleanFunction &f, std::span<const double> x) {
    check_point(f, x);
    thread_local std::vector<double> scratch;
    auto coeffs = f.coefficients();
    scratch.assign(coeffs.begin(), coeffs.end());
    for (size_t i = f.n_vars(); i-- > 0;) {
        size_t half = size_t{1} << i;
        for (size_t s = 0; s < half; s++) {
            scratch[s] += x[i] * scratch[s + half];
        }
    }
    return scratch[0];
}

BooleanFunction restrict(const BooleanFunction &f, const Restriction &rho) {
    if (rho.size() != f.n_vars()) {
        throw DimensionError("restriction length does not match the function");
    }
    auto coeffs = f.coefficients();
    std::vector<double> out(coeffs.size(), 0.0);
    SubsetMask free = rho.free_mask();
    SubsetMask minus = rho.minus_mask();
    for (size_t s = 0; s < coeffs.size(); s++) {
        double c = coeffs[s];
        if (std::popcount(static_cast<SubsetMask>(s) & minus) & 1) {
            c = -c;
        }
        out[s & free] += c;
    }
    return BooleanFunction::from_coefficients(std::move(out));
}

double partial_derivative(const BooleanFunction &f, SubsetMask subset, std::span<const double> x) {
    check_point(f, x);
    auto coeffs = f.coefficients();
    if (subset >= coeffs.size()) {
        throw DimensionError("derivative subset mentions a variable beyond N");
    }
    double total = 0;
    for (size_t s = 0; s < coeffs.size(); s++) {
        if ((s & subset) != subset || coeffs[s] == 0) {
            continue;
        }
        double term = coeffs[s];
        for (size_t rest = s & ~static_cast<size_t>(subset); rest; rest &= rest - 1) {
            term *= x[std::countr_zero(rest)];
        }
        total += term;
    }
    return total;
}

double finite_difference_derivative(
    const BooleanFunction &f, SubsetMask subset, std::span<const double> x, double h) {
    check_point(f, x);
    if (h == 0) {
        throw DomainError("finite difference step must be nonzero");
    }
    if (subset >> f.n_vars()) {
        throw DimensionError("derivative subset mentions a variable beyond N");
    }
    std::vector<double> point(x.begin(), x.end());
    int order = std::popcount(subset);
    double total = 0;
    // Enumerate T subset of S; sign (-1)^{|S|-|T|}.
    for (SubsetMask t = subset;; t = (t - 1) & subset) {
        for (size_t i = 0; i < point.size(); i++) {
            point[i] = x[i] + (((t >> i) & 1) ? h : 0.0);
        }
        double v = eval_multilinear(f, point);
        total += ((order - std::popcount(t)) & 1) ? -v : v;
        if (t == 0) {
            break;
        }
    }
    return total / std::pow(h, order);
}

double same_variable_second_difference(const BooleanFunction &f, size_t i, std::span<const double> x, double h) {
    check_point(f, x);
    if (i >= x.size()) {
        throw DimensionError("variable index beyond N");
    }
    std::vector<double> plus(x.begin(), x.end());
    std::vector<double> minus(x.begin(), x.end());
    plus[i] += h;
    minus[i] -= h;
    return (eval_multilinear(f, plus) - 2 * eval_multilinear(f, x) + eval_multilinear(f, minus)) / (h * h);
}

double level_mass(const BooleanFunction &f, size_t k) {
    auto coeffs = f.coefficients();
    double total = 0;
    for (size_t s = 0; s < coeffs.size(); s++) {
        if (static_cast<size_t>(std::popcount(s)) == k) {
            total += std::abs(coeffs[s]);
        }
    }
    return total;
}

double max_restricted_level2_mass(const BooleanFunction &f) {
    if (f.n_vars() > MAX_EXHAUSTIVE_VARS) {
        throw CapacityError(
            "exhaustive restriction search supports N <= 12; use the sampled lower bound for N = " +
            std::to_string(f.n_vars()));
    }
    std::vector<std::vector<double>> scratch(f.n_vars());
    double best = 0;
    max_level2_recurse(f.coefficients(), f.n_vars(), scratch, best);
    return best;
}

double sampled_restricted_level2_mass(const BooleanFunction &f, size_t trials, Rng &rng) {
    double best = level_mass(restrict(f, Restriction::all_free(f.n_vars())), 2);
    std::vector<Fix> values(f.n_vars());
    for (size_t t = 0; t < trials; t++) {
        for (auto &v : values) {
            v = static_cast<Fix>(static_cast<int>(rng() % 3) - 1);
        }
        best = std::max(best, level_mass(restrict(f, Restriction(values)), 2));
    }
    return best;
}

}  // namespace forrelab
