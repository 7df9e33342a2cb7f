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
#include <map>
#include <random>

#include "forrelab/boolean_function.h"
#include "forrelab/errors.h"
#include "gtest/gtest.h"
#include "oracles.h"

using namespace forrelab;

TEST(restriction, free_set_matches_stars) {
    auto rho = Restriction::from_string("*+-**-");
    EXPECT_EQ(rho.free_mask(), 0b011001u);
    EXPECT_EQ(rho.minus_mask(), 0b100100u);
    EXPECT_EQ(rho.free_indices(), (std::vector<size_t>{0, 3, 4}));
    EXPECT_EQ(rho.str(), "*+-**-");
    EXPECT_THROW(Restriction::from_string("+x"), DomainError);
}

TEST(restriction_distribution, origin_probabilities) {
    RestrictionDistribution dist(std::vector<double>(3, 0.0));
    for (size_t i = 0; i < 3; i++) {
        auto p = dist.probabilities(i);
        EXPECT_EQ(p.plus, 0.25);
        EXPECT_EQ(p.minus, 0.25);
        EXPECT_EQ(p.free, 0.5);
    }
}

TEST(restriction_distribution, boundary_and_domain) {
    RestrictionDistribution dist({0.5, -0.5});
    EXPECT_EQ(dist.probabilities(0).minus, 0.0);
    EXPECT_EQ(dist.probabilities(0).plus, 0.5);
    EXPECT_EQ(dist.probabilities(1).plus, 0.0);
    EXPECT_THROW(RestrictionDistribution({0.6}), DomainError);
    EXPECT_THROW(RestrictionDistribution({0.0, -0.51}), DomainError);
    EXPECT_THROW(RestrictionDistribution({std::nan("")}), DomainError);
}

TEST(restriction_distribution, probabilities_are_valid_on_the_cube) {
    std::mt19937_64 rng(20);
    for (int trial = 0; trial < 200; trial++) {
        RestrictionDistribution dist(oracle::random_vector(5, -0.5, 0.5, rng));
        for (size_t i = 0; i < 5; i++) {
            auto p = dist.probabilities(i);
            ASSERT_NEAR(p.plus + p.minus + p.free, 1.0, 1e-15);
            ASSERT_GE(p.plus, 0.0);
            ASSERT_GE(p.minus, 0.0);
            ASSERT_LE(p.plus, 1.0);
            ASSERT_LE(p.minus, 1.0);
        }
    }
}

TEST(restriction_distribution, enumeration_sums_to_one) {
    std::mt19937_64 rng(21);
    for (size_t n = 0; n <= 6; n++) {
        RestrictionDistribution dist(oracle::random_vector(n, -0.5, 0.5, rng));
        auto all = dist.enumerate();
        ASSERT_EQ(all.size(), static_cast<size_t>(std::pow(3, n)));
        double total = 0;
        for (const auto &w : all) {
            total += w.probability;
        }
        ASSERT_NEAR(total, 1.0, 1e-12);
    }
    EXPECT_THROW(RestrictionDistribution(std::vector<double>(13, 0.0)).enumerate(), CapacityError);
}

TEST(restriction_distribution, sampling_matches_enumeration) {
    RestrictionDistribution dist({0.25, -0.25});
    std::map<std::string, double> expected;
    for (const auto &w : dist.enumerate()) {
        expected[w.restriction.str()] = w.probability;
    }
    constexpr size_t SAMPLES = 1000000;
    std::map<std::string, size_t> counts;
    Rng rng(22);
    for (size_t k = 0; k < SAMPLES; k++) {
        counts[dist.sample(rng).str()]++;
    }
    for (const auto &[key, p] : expected) {
        double freq = static_cast<double>(counts[key]) / SAMPLES;
        double se = std::sqrt(p * (1 - p) / SAMPLES);
        EXPECT_NEAR(freq, p, 4 * se + 1e-12) << key;
    }
}

// d_ij f(x) = 4 E_{rho ~ R_x}[d_ij f_rho(0)] on a 5-point grid per axis.
TEST(restriction_distribution, second_derivative_identity_on_grid) {
    std::mt19937_64 rng(23);
    const double grid[5] = {-0.5, -0.25, 0.0, 0.25, 0.5};
    for (size_t n = 2; n <= 4; n++) {
        auto f = BooleanFunction::from_coefficients(oracle::random_vector(size_t{1} << n, -1, 1, rng));
        size_t points = static_cast<size_t>(std::pow(5, n));
        for (size_t code = 0; code < points; code++) {
            std::vector<double> x(n);
            size_t rest = code;
            for (auto &v : x) {
                v = grid[rest % 5];
                rest /= 5;
            }
            auto family = RestrictionDistribution(x).enumerate();
            std::vector<double> zero(n, 0.0);
            for (size_t i = 0; i < n; i++) {
                for (size_t j = 0; j < n; j++) {
                    if (i == j) {
                        continue;
                    }
                    SubsetMask pair = (SubsetMask{1} << i) | (SubsetMask{1} << j);
                    double rhs = 0;
                    for (const auto &[rho, p] : family) {
                        rhs += p * finite_difference_derivative(restrict(f, rho), pair, zero);
                    }
                    ASSERT_NEAR(partial_derivative(f, pair, x), 4 * rhs, 1e-9);
                }
            }
        }
    }
}

// f(x + y) = E_{rho ~ R_x}[f_rho(2y)].
TEST(restriction_distribution, shift_identity) {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 50; trial++) {
        size_t n = 1 + trial % 4;
        auto f = BooleanFunction::from_coefficients(oracle::random_vector(size_t{1} << n, -1, 1, rng));
        auto x = oracle::random_vector(n, -0.5, 0.5, rng);
        auto y = oracle::random_vector(n, -2, 2, rng);
        std::vector<double> shifted(n), doubled(n);
        for (size_t i = 0; i < n; i++) {
            shifted[i] = x[i] + y[i];
            doubled[i] = 2 * y[i];
        }
        double rhs = 0;
        for (const auto &[rho, p] : RestrictionDistribution(x).enumerate()) {
            rhs += p * eval_multilinear(restrict(f, rho), doubled);
        }
        ASSERT_NEAR(eval_multilinear(f, shifted), rhs, 1e-9);
    }
}
