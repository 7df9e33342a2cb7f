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

#ifndef FORRELAB_ERRORS_H
#define FORRELAB_ERRORS_H

#include <stdexcept>
#include <string>

namespace forrelab {

/// Input has the wrong length or shape (including non power-of-two sizes).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Input value lies outside the set the operation is defined on.
struct DomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// The requested size exceeds what an exhaustive or in-memory routine supports.
struct CapacityError : std::length_error {
    using std::length_error::length_error;
};

}  // namespace forrelab

#endif
