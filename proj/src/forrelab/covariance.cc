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

#include "forrelab/covariance.h"

#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "forrelab/errors.h"
#include "forrelab/wht.h"

namespace forrelab {

namespace {

constexpr double SYMMETRY_TOL = 1e-12;
constexpr double PSD_TOL = 1e-10;

}  // namespace

double hadamard_entry(size_t n, size_t i, size_t j) {
    double s = 1.0 / std::sqrt(static_cast<double>(n));
    return (std::popcount(i & j) & 1) ? -s : s;
}

CovarianceSpec CovarianceSpec::forrelation(size_t n) {
    exact_log2(n);
    CovarianceSpec spec;
    spec.half_ = n;
    spec.dim_ = 2 * n;
    spec.gamma_ = 1.0 / std::sqrt(static_cast<double>(n));
    return spec;
}

CovarianceSpec CovarianceSpec::dense(std::vector<double> matrix, size_t dim) {
    if (dim == 0 || matrix.size() != dim * dim) {
        throw DimensionError("dense covariance needs dim * dim entries");
    }
    Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> m(
        matrix.data(), dim, dim);
    double gamma = 0;
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            if (!std::isfinite(m(i, j))) {
                throw DomainError("covariance entries must be finite");
            }
            if (std::abs(m(i, j) - m(j, i)) > SYMMETRY_TOL) {
                throw DomainError("covariance must be symmetric");
            }
            if (i != j) {
                gamma = std::max(gamma, std::abs(m(i, j)));
            }
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    Eigen::VectorXd lambda = eig.eigenvalues();
    if (lambda.minCoeff() < -PSD_TOL) {
        throw DomainError("covariance must be positive semidefinite");
    }
    // Rounding leaves null eigenvalues near 1e-17, whose square roots would be ~1e-9.
    double floor = static_cast<double>(dim) * std::numeric_limits<double>::epsilon() * lambda.cwiseAbs().maxCoeff();
    lambda = lambda.unaryExpr([floor](double l) { return l <= floor ? 0.0 : std::sqrt(l); });
    Eigen::MatrixXd root = eig.eigenvectors() * lambda.asDiagonal() * eig.eigenvectors().transpose();

    CovarianceSpec spec;
    spec.dim_ = dim;
    spec.gamma_ = gamma;
    spec.matrix_ = std::move(matrix);
    spec.sqrt_.resize(dim * dim);
    for (size_t i = 0; i < dim; i++) {
        for (size_t j = 0; j < dim; j++) {
            spec.sqrt_[i * dim + j] = root(i, j);
        }
    }
    return spec;
}

CovarianceSpec CovarianceSpec::equicorrelated(size_t dim, double rho) {
    std::vector<double> m(dim * dim, rho);
    for (size_t i = 0; i < dim; i++) {
        m[i * dim + i] = 1.0;
    }
    return dense(std::move(m), dim);
}

double CovarianceSpec::entry(size_t i, size_t j) const {
    if (i >= dim_ || j >= dim_) {
        throw DimensionError("covariance index out of range");
    }
    if (!is_forrelation()) {
        return matrix_[i * dim_ + j];
    }
    bool top_i = i < half_;
    bool top_j = j < half_;
    if (top_i == top_j) {
        return i == j ? 1.0 : 0.0;
    }
    return hadamard_entry(half_, i % half_, j % half_);
}

std::vector<double> CovarianceSpec::dense_matrix() const {
    if (!is_forrelation()) {
        return matrix_;
    }
    std::vector<double> out(dim_ * dim_);
    for (size_t i = 0; i < dim_; i++) {
        for (size_t j = 0; j < dim_; j++) {
            out[i * dim_ + j] = entry(i, j);
        }
    }
    return out;
}

void CovarianceSpec::apply_sqrt(std::span<const double> v, std::span<double> out) const {
    if (v.size() != dim_ || out.size() != dim_) {
        throw DimensionError("vector length does not match the covariance dimension");
    }
    if (!is_forrelation()) {
        for (size_t i = 0; i < dim_; i++) {
            const double *row = &sqrt_[i * dim_];
            double acc = 0;
            for (size_t j = 0; j < dim_; j++) {
                acc += row[j] * v[j];
            }
            out[i] = acc;
        }
        return;
    }
    size_t n = half_;
    auto a = v.first(n);
    auto b = v.subspan(n);
    auto top = out.first(n);
    auto bottom = out.subspan(n);
    std::copy(b.begin(), b.end(), top.begin());
    std::copy(a.begin(), a.end(), bottom.begin());
    wht_in_place(top);
    wht_in_place(bottom);
    constexpr double INV_SQRT2 = 0.70710678118654752440;
    for (size_t i = 0; i < n; i++) {
        top[i] = (top[i] + a[i]) * INV_SQRT2;
        bottom[i] = (bottom[i] + b[i]) * INV_SQRT2;
    }
}

std::vector<double> CovarianceSpec::apply_sqrt(std::span<const double> v) const {
    std::vector<double> out(dim_);
    apply_sqrt(v, out);
    return out;
}

nlohmann::json CovarianceSpec::to_json() const {
    nlohmann::json j{{"N", dim_}, {"gamma", gamma_}};
    if (is_forrelation()) {
        j["shape"] = "forrelation";
        j["n"] = half_;
    } else {
        j["shape"] = "dense";
        j["matrix"] = matrix_;
    }
    return j;
}

}  // namespace forrelab
