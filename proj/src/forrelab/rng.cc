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

#include "forrelab/rng.h"

#include <boost/random/normal_distribution.hpp>

namespace forrelab {

uint64_t splitmix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

Rng stream_rng(uint64_t master_seed, uint64_t stream) {
    return Rng(splitmix64(master_seed ^ splitmix64(stream + 1)));
}

double uniform01(Rng &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double standard_normal(Rng &rng) {
    // Stateless between calls, so constructing per draw is free and keeps
    // the sequence a pure function of the engine state.
    boost::random::normal_distribution<double> dist;
    return dist(rng);
}

}  // namespace forrelab
