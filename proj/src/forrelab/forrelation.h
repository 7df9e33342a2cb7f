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

#ifndef FORRELAB_FORRELATION_H
#define FORRELAB_FORRELATION_H

#include <cstddef>
#include <span>
#include <vector>

#include "forrelab/covariance.h"
#include "forrelab/report.h"
#include "forrelab/rng.h"
#include "forrelab/sampler.h"

namespace forrelab {

/// phi(x, y) = (1/n) x^T H y, with H the normalized Sylvester Walsh-Hadamard
/// matrix, in O(n log n). Accepts real inputs.
double phi(std::span<const double> x, std::span<const double> y);
double phi(std::span<const int> x, std::span<const int> y);

/// Acceptance probability (1 + phi(x, y)) / 2 of the one-query forrelation
/// algorithm. Inputs must be exactly +-1.
double accept_probability(std::span<const int> x, std::span<const int> y);

/// One run of the algorithm: accepts with probability accept_probability(x, y).
bool sample_acceptance(std::span<const int> x, std::span<const int> y, Rng &rng);

/// Real state vector over m qubits, enough for circuits of Hadamards and
/// diagonal +-1 phase oracles.
class StateVector {
   public:
    static constexpr size_t MAX_QUBITS = 20;

    /// |0...0> on m qubits. Throws CapacityError for m > 20.
    explicit StateVector(size_t num_qubits);

    size_t num_qubits() const {
        return num_qubits_;
    }
    std::span<const double> amplitudes() const {
        return amps_;
    }
    void apply_hadamard(size_t qubit);
    void apply_hadamard_all();
    /// |i> -> signs[i] |i>.
    void apply_phase_oracle(std::span<const int> signs);

   private:
    size_t num_qubits_;
    std::vector<double> amps_;
};

/// <0| H^m D_x H^m D_y H^m |0> with D_x, D_y the +-1 phase oracles for x and y,
/// by explicit gate-by-gate simulation. Equals phi(x, y).
double statevector_amplitude(std::span<const int> x, std::span<const int> y);

/// Forrelation distinguisher experiment on the stopped process for a
/// forrelation-shaped `spec`: mean phi on X_tau = (x, y), mean tau, their
/// paired difference, mean phi and acceptance on rounded bits (when
/// `with_rounding`), and a uniform-input null run. Passes when
/// mean phi >= epsilon / 4 and mean phi = mean tau, both within SE_MARGIN.
ExperimentReport advantage_experiment(
    const CovarianceSpec &spec, const SamplerConfig &config, size_t samples, bool with_rounding = true);

/// Null check on uniform +-1 inputs of length n: mean phi (should be 0) and
/// mean sampled acceptance (should be 1/2).
ExperimentReport uniform_null_experiment(size_t n, size_t samples, uint64_t seed, size_t workers = 0);

}  // namespace forrelab

#endif
