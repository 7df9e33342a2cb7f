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
#include <random>

#include "forrelab/errors.h"
#include "gtest/gtest.h"
#include "oracles.h"

using namespace forrelab;

namespace {

BooleanFunction random_function(size_t n_vars, std::mt19937_64 &rng) {
    return BooleanFunction::from_coefficients(oracle::random_vector(size_t{1} << n_vars, -1, 1, rng));
}

std::vector<int> majority3() {
    std::vector<int> t(8);
    for (size_t row = 0; row < 8; row++) {
        auto x = oracle::cube_point(3, row);
        t[row] = x[0] + x[1] + x[2] > 0 ? 1 : -1;
    }
    return t;
}

// f_rho's coefficients by substituting into f pointwise and averaging.
std::vector<double> restricted_coeffs_by_substitution(const BooleanFunction &f, const Restriction &rho) {
    size_t n = f.n_vars();
    std::vector<double> table(size_t{1} << n);
    for (size_t row = 0; row < table.size(); row++) {
        auto merged = rho.merge(oracle::cube_point(n, row));
        table[row] = oracle::naive_expansion(std::vector<double>(f.coefficients().begin(), f.coefficients().end()), merged);
    }
    return oracle::fourier_by_averaging(table);
}

}  // namespace

TEST(boolean_function, constant_table) {
    std::vector<int> table(16, 1);
    auto f = BooleanFunction::from_truth_table(table);
    EXPECT_EQ(f.n_vars(), 4u);
    EXPECT_EQ(f.coefficient(0), 1.0);
    for (size_t s = 1; s < 16; s++) {
        EXPECT_EQ(f.coefficient(s), 0.0);
    }
}

TEST(boolean_function, parity_is_a_single_character) {
    std::vector<int> table(4);
    for (size_t row = 0; row < 4; row++) {
        auto x = oracle::cube_point(2, row);
        table[row] = static_cast<int>(x[0] * x[1]);
    }
    auto f = BooleanFunction::from_truth_table(table);
    EXPECT_EQ(f.coefficient(0b11), 1.0);
    EXPECT_EQ(f.coefficient(0b00), 0.0);
    EXPECT_EQ(f.coefficient(0b01), 0.0);
    EXPECT_EQ(f.coefficient(0b10), 0.0);
    EXPECT_EQ(f, BooleanFunction::character(2, 0b11));
}

TEST(boolean_function, majority_matches_averaging_oracle) {
    auto table = majority3();
    auto f = BooleanFunction::from_truth_table(table);
    auto expected = oracle::fourier_by_averaging(std::vector<double>(table.begin(), table.end()));
    for (size_t s = 0; s < 8; s++) {
        EXPECT_NEAR(f.coefficient(s), expected[s], 1e-15) << "S=" << s;
    }
    EXPECT_NEAR(f.coefficient(0b001), 0.5, 1e-15);
    EXPECT_NEAR(f.coefficient(0b111), -0.5, 1e-15);
}

TEST(boolean_function, truth_table_round_trip_and_parseval) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 50; trial++) {
        size_t n = 1 + trial % 8;
        auto table = oracle::random_truth_table(n, rng);
        auto f = BooleanFunction::from_truth_table(table);
        double energy = 0;
        for (double c : f.coefficients()) {
            energy += c * c;
        }
        ASSERT_NEAR(energy, 1.0, 1e-10);
        auto values = f.values();
        for (size_t row = 0; row < table.size(); row++) {
            ASSERT_NEAR(values[row], table[row], 1e-10);
            ASSERT_NEAR(eval_multilinear(f, hypercube_point(n, row)), table[row], 1e-10);
        }
    }
}

TEST(boolean_function, rejects_non_boolean_entries) {
    std::vector<int> bad = {1, -1, 0, 1};
    EXPECT_THROW(BooleanFunction::from_truth_table(bad), DomainError);
    std::vector<int> odd = {1, -1, 1};
    EXPECT_THROW(BooleanFunction::from_truth_table(odd), DimensionError);
}

TEST(eval_multilinear, origin_gives_empty_coefficient_and_cube_mean) {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; trial++) {
        auto table = oracle::random_truth_table(5, rng);
        auto f = BooleanFunction::from_truth_table(table);
        double mean = 0;
        for (int v : table) {
            mean += v;
        }
        mean /= static_cast<double>(table.size());
        std::vector<double> zero(5, 0.0);
        EXPECT_NEAR(eval_multilinear(f, zero), f.coefficient(0), 1e-15);
        EXPECT_NEAR(eval_multilinear(f, zero), mean, 1e-12);
    }
}

TEST(eval_multilinear, parity_product_form) {
    auto f = BooleanFunction::character(2, 0b11);
    std::vector<double> x = {0.5, 0.5};
    EXPECT_DOUBLE_EQ(eval_multilinear(f, x), 0.25);
}

TEST(eval_multilinear, matches_naive_monomial_sum) {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 100; trial++) {
        auto f = random_function(4, rng);
        auto x = oracle::random_vector(4, -0.5, 0.5, rng);
        std::vector<double> coeffs(f.coefficients().begin(), f.coefficients().end());
        ASSERT_NEAR(eval_multilinear(f, x), oracle::naive_expansion(coeffs, x), 1e-12);
    }
}

TEST(eval_multilinear, dimension_mismatch) {
    auto f = BooleanFunction::constant(3, 1.0);
    std::vector<double> x(2, 0.0);
    EXPECT_THROW(eval_multilinear(f, x), DimensionError);
}

TEST(restrict, all_free_is_identity) {
    std::mt19937_64 rng(6);
    auto f = random_function(5, rng);
    EXPECT_EQ(restrict(f, Restriction::all_free(5)), f);
}

TEST(restrict, parity_with_first_coordinate_fixed) {
    auto f = BooleanFunction::character(2, 0b11);
    auto g = restrict(f, Restriction::from_string("+*"));
    EXPECT_EQ(g, BooleanFunction::character(2, 0b10));
    auto h = restrict(f, Restriction::from_string("-*"));
    EXPECT_EQ(h.coefficient(0b10), -1.0);
}

TEST(restrict, agrees_with_pointwise_substitution) {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> fix(-1, 1);
    for (int trial = 0; trial < 20; trial++) {
        auto table = oracle::random_truth_table(4, rng);
        auto f = BooleanFunction::from_truth_table(table);
        std::vector<Fix> values(4);
        for (auto &v : values) {
            v = static_cast<Fix>(fix(rng));
        }
        Restriction rho(values);
        auto g = restrict(f, rho);
        for (int k = 0; k < 100; k++) {
            size_t row = rng() % 16;
            auto x = hypercube_point(4, row);
            ASSERT_EQ(eval_multilinear(g, x), eval_multilinear(f, rho.merge(x)));
        }
    }
}

TEST(restrict, coefficients_vanish_outside_free_set) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 50; trial++) {
        size_t n = 1 + trial % 6;
        auto f = random_function(n, rng);
        std::vector<Fix> values(n);
        for (auto &v : values) {
            v = static_cast<Fix>(static_cast<int>(rng() % 3) - 1);
        }
        Restriction rho(values);
        auto g = restrict(f, rho);
        auto oracle_coeffs = restricted_coeffs_by_substitution(f, rho);
        for (size_t s = 0; s < g.coefficients().size(); s++) {
            if ((s & ~static_cast<size_t>(rho.free_mask())) != 0) {
                ASSERT_EQ(g.coefficient(s), 0.0);
            }
            ASSERT_NEAR(g.coefficient(s), oracle_coeffs[s], 1e-12);
        }
    }
}

TEST(restrict, empty_free_set_gives_constant) {
    auto f = BooleanFunction::from_truth_table(majority3());
    auto g = restrict(f, Restriction::from_string("++-"));
    EXPECT_EQ(g.coefficient(0), 1.0);
    EXPECT_EQ(level_mass(g, 1) + level_mass(g, 2) + level_mass(g, 3), 0.0);
}

TEST(restrict, length_mismatch) {
    auto f = BooleanFunction::constant(3, 1.0);
    EXPECT_THROW(restrict(f, Restriction::all_free(2)), DimensionError);
}

TEST(partial_derivative, at_origin_equals_fourier_coefficient) {
    std::mt19937_64 rng(9);
    for (size_t n = 1; n <= 6; n++) {
        auto f = random_function(n, rng);
        std::vector<double> zero(n, 0.0);
        for (SubsetMask s = 0; s < (SubsetMask{1} << n); s++) {
            ASSERT_EQ(partial_derivative(f, s, zero), f.coefficient(s));
            ASSERT_NEAR(finite_difference_derivative(f, s, zero), f.coefficient(s), 1e-10);
        }
    }
}

TEST(partial_derivative, same_variable_second_difference_vanishes) {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 20; trial++) {
        auto f = random_function(4, rng);
        auto x = oracle::random_vector(4, -0.5, 0.5, rng);
        for (size_t i = 0; i < 4; i++) {
            ASSERT_NEAR(same_variable_second_difference(f, i, x), 0.0, 1e-12);
            ASSERT_NEAR(same_variable_second_difference(f, i, x, 1.0 / 3), 0.0, 1e-12);
        }
    }
}

TEST(partial_derivative, finite_difference_independent_of_step) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; trial++) {
        auto f = random_function(4, rng);
        auto x = oracle::random_vector(4, -0.5, 0.5, rng);
        for (SubsetMask s = 0; s < 16; s++) {
            double a = finite_difference_derivative(f, s, x, 1.0);
            double b = finite_difference_derivative(f, s, x, 1.0 / 3);
            ASSERT_NEAR(a, b, 1e-10);
            ASSERT_NEAR(a, partial_derivative(f, s, x), 1e-10);
        }
    }
}

TEST(level_mass, examples) {
    EXPECT_EQ(level_mass(BooleanFunction::character(2, 0b11), 2), 1.0);
    auto c = BooleanFunction::constant(4, -1.0);
    for (size_t k = 1; k <= 4; k++) {
        EXPECT_EQ(level_mass(c, k), 0.0);
    }
    auto table = majority3();
    auto oracle_coeffs = oracle::fourier_by_averaging(std::vector<double>(table.begin(), table.end()));
    double expected = std::abs(oracle_coeffs[1]) + std::abs(oracle_coeffs[2]) + std::abs(oracle_coeffs[4]);
    EXPECT_NEAR(level_mass(BooleanFunction::from_truth_table(table), 1), expected, 1e-15);
    EXPECT_NEAR(expected, 1.5, 1e-15);
}

TEST(max_restricted_level2_mass, parity_and_degree_one) {
    EXPECT_EQ(max_restricted_level2_mass(BooleanFunction::character(2, 0b11)), 1.0);
    std::vector<double> coeffs(16, 0.0);
    coeffs[0] = 0.1;
    coeffs[1] = 0.4;
    coeffs[2] = -0.3;
    coeffs[8] = 0.2;
    EXPECT_EQ(max_restricted_level2_mass(BooleanFunction::from_coefficients(coeffs)), 0.0);
}

TEST(max_restricted_level2_mass, matches_independent_enumeration) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; trial++) {
        size_t n = 2 + trial % 4;
        auto table = oracle::random_truth_table(n, rng);
        auto f = BooleanFunction::from_truth_table(table);
        double best = 0;
        size_t total = 1;
        for (size_t i = 0; i < n; i++) {
            total *= 3;
        }
        for (size_t code = 0; code < total; code++) {
            std::vector<Fix> values(n);
            size_t rest = code;
            for (auto &v : values) {
                v = static_cast<Fix>(static_cast<int>(rest % 3) - 1);
                rest /= 3;
            }
            auto coeffs = restricted_coeffs_by_substitution(f, Restriction(values));
            double mass = 0;
            for (size_t s = 0; s < coeffs.size(); s++) {
                if (std::popcount(s) == 2) {
                    mass += std::abs(coeffs[s]);
                }
            }
            best = std::max(best, mass);
        }
        ASSERT_NEAR(max_restricted_level2_mass(f), best, 1e-12) << "n=" << n;
    }
}

TEST(max_restricted_level2_mass, capacity_guard_and_sampled_lower_bound) {
    auto big = BooleanFunction::character(13, 0b11);
    EXPECT_THROW(max_restricted_level2_mass(big), CapacityError);
    Rng rng(13);
    EXPECT_EQ(sampled_restricted_level2_mass(big, 50, rng), 1.0);

    std::mt19937_64 gen(14);
    auto f = BooleanFunction::from_truth_table(oracle::random_truth_table(6, gen));
    double exact = max_restricted_level2_mass(f);
    EXPECT_LE(sampled_restricted_level2_mass(f, 200, rng), exact + 1e-12);
}

TEST(boolean_function, json_schema) {
    auto f = BooleanFunction::character(2, 0b10);
    auto j = f.to_json();
    EXPECT_EQ(j.dump(), R"({"coeffs":[0.0,0.0,1.0,0.0],"n":2})");
    EXPECT_EQ(BooleanFunction::from_json(j), f);
    auto g = BooleanFunction::from_json(nlohmann::json::parse(R"({"truth_table":[1,-1,1,-1]})"));
    EXPECT_EQ(g, BooleanFunction::character(2, 0b01));
    EXPECT_THROW(BooleanFunction::from_json(nlohmann::json::parse(R"({"n":3,"coeffs":[1,0]})")), DimensionError);
    EXPECT_THROW(BooleanFunction::from_json(nlohmann::json::parse(R"({"x":1})")), DomainError);
}
