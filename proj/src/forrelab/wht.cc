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

#include "forrelab/wht.h"

#include <bit>
#include <cmath>
#include <string>

#include "forrelab/errors.h"

namespace forrelab {

bool is_power_of_two(size_t n) {
    return std::has_single_bit(n);
}

size_t exact_log2(size_t n) {
    if (!is_power_of_two(n)) {
        throw DimensionError("expected a power of two, got " + std::to_string(n));
    }
    return static_cast<size_t>(std::countr_zero(n));
}

void wht_unnormalized_in_place(std::span<double> values) {
    size_t n = values.size();
    exact_log2(n);
    for (size_t half = 1; half < n; half <<= 1) {
        for (size_t block = 0; block < n; block += half << 1) {
            for (size_t k = block; k < block + half; k++) {
                double a = values[k];
                double b = values[k + half];
                values[k] = a + b;
                values[k + half] = a - b;
            }
        }
    }
}

void wht_in_place(std::span<double> values) {
    wht_unnormalized_in_place(values);
    double scale = 1.0 / std::sqrt(static_cast<double>(values.size()));
    for (double &v : values) {
        v *= scale;
    }
}

std::vector<double> wht(std::span<const double> values) {
    std::vector<double> out(values.begin(), values.end());
    wht_in_place(out);
    return out;
}

}  // namespace forrelab
