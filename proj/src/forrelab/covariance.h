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

#ifndef FORRELAB_COVARIANCE_H
#define FORRELAB_COVARIANCE_H

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"

namespace forrelab {

/// Covariance (per unit time) of the driving process, together with a square
/// root sigma satisfying sigma * sigma^T = Sigma.
///
/// Two shapes are supported:
///  - the forrelation block matrix [[I_n, H_n], [H_n, I_n]] with H_n the
///    symmetric Sylvester Walsh-Hadamard matrix scaled to entries +-1/sqrt(n).
///    Since H_n^2 = I_n, Sigma^2 = 2 Sigma, so sigma = Sigma / sqrt(2) and
///    applying it costs two fast transforms of length n.
///  - an arbitrary dense symmetric PSD matrix, with sigma the symmetric square
///    root from an eigendecomposition.
class CovarianceSpec {
   public:
    /// Throws DimensionError unless n is a power of two.
    static CovarianceSpec forrelation(size_t n);
    /// Row-major N x N matrix. Throws DimensionError / DomainError unless it
    /// is symmetric and positive semidefinite.
    static CovarianceSpec dense(std::vector<double> matrix, size_t dim);
    /// Unit diagonal with every off-diagonal entry equal to `rho`.
    static CovarianceSpec equicorrelated(size_t dim, double rho);

    bool is_forrelation() const {
        return half_ != 0;
    }
    /// N.
    size_t dim() const {
        return dim_;
    }
    /// n for the forrelation shape (N = 2n); 0 for dense matrices.
    size_t half() const {
        return half_;
    }
    /// max_{i != j} |Sigma_ij|.
    double gamma() const {
        return gamma_;
    }

    double entry(size_t i, size_t j) const;
    /// Row-major dense copy of Sigma.
    std::vector<double> dense_matrix() const;

    /// out = sigma * v. `out` must not alias `v`.
    void apply_sqrt(std::span<const double> v, std::span<double> out) const;
    std::vector<double> apply_sqrt(std::span<const double> v) const;

    nlohmann::json to_json() const;

   private:
    CovarianceSpec() = default;

    size_t dim_ = 0;
    size_t half_ = 0;
    double gamma_ = 0;
    std::vector<double> matrix_;
    std::vector<double> sqrt_;
};

/// Entry (i, j) of the normalized Sylvester Walsh-Hadamard matrix of size n.
double hadamard_entry(size_t n, size_t i, size_t j);

inline CovarianceSpec build_sigma(size_t n) {
    return CovarianceSpec::forrelation(n);
}

inline std::vector<double> apply_sigma_sqrt(const CovarianceSpec &spec, std::span<const double> v) {
    return spec.apply_sqrt(v);
}

}  // namespace forrelab

#endif
