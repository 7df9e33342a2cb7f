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

#ifndef FORRELAB_RNG_H
#define FORRELAB_RNG_H

#include <cstdint>
#include <random>

namespace forrelab {

using Rng = std::mt19937_64;

uint64_t splitmix64(uint64_t x);

/// Independent engine for stream `stream` of a run seeded with `master_seed`.
///
/// Stream-split rule: the engine is seeded with
///     splitmix64(master_seed ^ splitmix64(stream + 1))
/// so every path (stream) of a Monte Carlo run has its own generator and the
/// result of a run does not depend on how paths are distributed over workers.
Rng stream_rng(uint64_t master_seed, uint64_t stream);

/// Uniform double in [0, 1) with 53 random bits.
double uniform01(Rng &rng);

/// Standard normal draw (ziggurat).
double standard_normal(Rng &rng);

}  // namespace forrelab

#endif
