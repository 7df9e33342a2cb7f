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

#ifndef FORRELAB_WHT_H
#define FORRELAB_WHT_H

#include <cstddef>
#include <span>
#include <vector>

namespace forrelab {

bool is_power_of_two(size_t n);

/// Returns m with 2^m == n. Throws DimensionError otherwise.
size_t exact_log2(size_t n);

/// In-place orthonormal Walsh-Hadamard transform in Sylvester (natural) order:
///     out[i] = 2^{-m/2} * sum_j (-1)^{popcount(i & j)} * in[j]
/// The transform is symmetric and self-inverse.
void wht_in_place(std::span<double> values);

/// Same butterflies without the 2^{-m/2} scaling.
void wht_unnormalized_in_place(std::span<double> values);

std::vector<double> wht(std::span<const double> values);

}  // namespace forrelab

#endif
