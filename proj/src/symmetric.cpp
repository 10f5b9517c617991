// Copyright 2026 The Grover Noise Simulator Authors
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

#include "grover/symmetric.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace grover::symmetric {

namespace {

constexpr double kImagTolerance = 1e-14;

double log_factorial(int k) { return std::lgamma(static_cast<double>(k) + 1.0); }

Eigen::MatrixXd identity_power(const Compositions& basis) {
    return Eigen::MatrixXd::Identity(basis.size(), basis.size());
}

/// Coefficient vector (orthonormal type basis) of (I/2)^{(x) m}.
Eigen::VectorXd maximally_mixed(const Compositions& basis) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(basis.size());
    const double ln2 = std::log(2.0);
    for (Index i = 0; i < basis.size(); ++i) {
        const auto& c = basis[i];
        if (c[1] == 0 && c[2] == 0) out(i) = std::exp(0.5 * basis.log_multiplicity(i) - basis.degree() * ln2);
    }
    return out;
}

Eigen::VectorXd uniform_superposition(const Compositions& basis) {
    Eigen::VectorXd out(basis.size());
    const double ln2 = std::log(2.0);
    for (Index i = 0; i < basis.size(); ++i) out(i) = std::exp(0.5 * basis.log_multiplicity(i) - basis.degree() * ln2);
    return out;
}

}  // namespace

Compositions::Compositions(int m) : m_(m) {
    if (m < 0 || m > kMaxQubits) throw ResourceError("symmetric group size out of range: " + std::to_string(m));
    const auto side = static_cast<std::size_t>(m + 1);
    lookup_.assign(side * side * side, -1);
    for (int a = 0; a <= m; ++a)
        for (int b = 0; a + b <= m; ++b)
            for (int c = 0; a + b + c <= m; ++c) {
                lookup_[(static_cast<std::size_t>(a) * side + static_cast<std::size_t>(b)) * side +
                        static_cast<std::size_t>(c)] = static_cast<int>(list_.size());
                list_.push_back({a, b, c, m - a - b - c});
                double lm = log_factorial(m);
                for (int s : list_.back()) lm -= log_factorial(s);
                log_mult_.push_back(lm);
            }
}

Index Compositions::index(const Composition& c) const {
    if (c[0] < 0 || c[1] < 0 || c[2] < 0 || c[3] < 0 || c[0] + c[1] + c[2] + c[3] != m_) {
        throw DomainError("composition does not match the group size");
    }
    const auto side = static_cast<std::size_t>(m_ + 1);
    return lookup_[(static_cast<std::size_t>(c[0]) * side + static_cast<std::size_t>(c[1])) * side +
                   static_cast<std::size_t>(c[2])];
}

Eigen::MatrixXd symmetric_power(const Mat4& x, const Compositions& basis) {
    if (x.imag().cwiseAbs().maxCoeff() > kImagTolerance) {
        throw DomainError("symmetric engine needs a real superoperator");
    }
    const Eigen::Matrix4d xr = x.real();
    const int m = basis.degree();
    std::vector<Compositions> degrees;
    degrees.reserve(static_cast<std::size_t>(m) + 1);
    for (int d = 0; d <= m; ++d) degrees.emplace_back(d);

    // In the polynomial picture a word w maps to prod_i z_{w_i}, and X^{(x) m}
    // substitutes z_j -> sum_i X_ij z_i.
    Eigen::MatrixXd t(basis.size(), basis.size());
    Eigen::VectorXd poly;
    Eigen::VectorXd next;
    for (Index col = 0; col < basis.size(); ++col) {
        const auto& alpha = basis[col];
        poly = Eigen::VectorXd::Ones(1);
        int d = 0;
        for (int j = 0; j < 4; ++j) {
            for (int r = 0; r < alpha[static_cast<std::size_t>(j)]; ++r) {
                const Compositions& from = degrees[static_cast<std::size_t>(d)];
                const Compositions& to = degrees[static_cast<std::size_t>(d) + 1];
                next = Eigen::VectorXd::Zero(to.size());
                for (Index g = 0; g < from.size(); ++g) {
                    if (poly(g) == 0.0) continue;
                    for (int i = 0; i < 4; ++i) {
                        if (xr(i, j) == 0.0) continue;
                        Composition up = from[g];
                        ++up[static_cast<std::size_t>(i)];
                        next(to.index(up)) += poly(g) * xr(i, j);
                    }
                }
                poly.swap(next);
                ++d;
            }
        }
        // polynomial coefficients carry the multiplicity; rescale to the
        // orthonormal basis
        for (Index row = 0; row < basis.size(); ++row) {
            t(row, col) = poly(row) * std::exp(0.5 * (basis.log_multiplicity(col) - basis.log_multiplicity(row)));
        }
    }
    return t;
}

SymmetricState::SymmetricState(int n1, int n0) : group1_(n1), group0_(n0) {
    v_ = uniform_superposition(group1_) * uniform_superposition(group0_).transpose();
    oracle_sign_.resize(group1_.size(), group0_.size());
    for (Index a = 0; a < group1_.size(); ++a) {
        const auto& c1 = group1_[a];
        const bool row1 = c1[0] == 0 && c1[1] == 0;
        const bool col1 = c1[0] == 0 && c1[2] == 0;
        for (Index b = 0; b < group0_.size(); ++b) {
            const auto& c0 = group0_[b];
            const bool row = row1 && c0[2] == 0 && c0[3] == 0;
            const bool col = col1 && c0[1] == 0 && c0[3] == 0;
            oracle_sign_(a, b) = (row != col) ? -1.0 : 1.0;
        }
    }
}

void SymmetricState::apply_product(const Eigen::MatrixXd& t1, const Eigen::MatrixXd& t0) {
    v_ = t1 * v_ * t0.transpose();
}

void SymmetricState::apply_sum(std::span<const ProductTerm> terms) {
    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(v_.rows(), v_.cols());
    for (const auto& term : terms) out.noalias() += term.weight * (term.t1 * v_ * term.t0.transpose());
    v_ = std::move(out);
}

void SymmetricState::apply_oracle() { v_.array() *= oracle_sign_.array(); }

void SymmetricState::apply_depolarizing(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("depolarizing rate must lie in [0, 1]");
    v_ = (1.0 - p) * v_ + p * maximally_mixed(group1_) * maximally_mixed(group0_).transpose();
}

double SymmetricState::success_probability() const {
    return v_(group1_.index({0, 0, 0, ones()}), group0_.index({zeros(), 0, 0, 0}));
}

double SymmetricState::trace() const {
    auto diagonal_weights = [](const Compositions& g) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(g.size());
        for (Index i = 0; i < g.size(); ++i) {
            if (g[i][1] == 0 && g[i][2] == 0) w(i) = std::exp(0.5 * g.log_multiplicity(i));
        }
        return w;
    };
    return diagonal_weights(group1_).dot(v_ * diagonal_weights(group0_));
}

RunTrace run_grover(int n, const Bitstring& omega, const NoiseModel& noise, long iterations,
                    const RunOptions& options) {
    if (n < 2 || n > kMaxQubits) throw ResourceError("symmetric engine supports 2 <= n <= " + std::to_string(kMaxQubits));
    if (omega.size() != n) throw DomainError("target length does not match qubit count");
    if (iterations < 0) throw DomainError("iteration count must be non-negative");

    const int n1 = omega.count_ones();
    SymmetricState rho(n1, n - n1);
    const auto& g1 = rho.group1();
    const auto& g0 = rho.group0();

    const Mat2 plus = Mat2::Constant(0.5);
    const Mat4 left = Eigen::kroneckerProduct(plus, Mat2::Identity());
    const Mat4 right = Eigen::kroneckerProduct(Mat2::Identity(), plus);
    const Mat4 both = Eigen::kroneckerProduct(plus, plus);
    // U_s rho U_s = rho - 2 P rho - 2 rho P + 4 P rho P with P = |s><s|
    const std::vector<ProductTerm> diffusion = {
        {1.0, identity_power(g1), identity_power(g0)},
        {-2.0, symmetric_power(left, g1), symmetric_power(left, g0)},
        {-2.0, symmetric_power(right, g1), symmetric_power(right, g0)},
        {4.0, symmetric_power(both, g1), symmetric_power(both, g0)},
    };

    const auto* channel = std::get_if<KrausChannel>(&noise);
    const auto* depolarizing = std::get_if<GlobalDepolarizing>(&noise);
    Eigen::MatrixXd s1;
    Eigen::MatrixXd s0;
    if (channel != nullptr) {
        const Mat4 s = local_superoperator(*channel);
        s1 = symmetric_power(s, g1);
        s0 = symmetric_power(s, g0);
    }
    auto apply_noise = [&] {
        if (channel != nullptr) rho.apply_product(s1, s0);
        if (depolarizing != nullptr) rho.apply_depolarizing(depolarizing->rate());
    };
    auto apply_iteration = [&] {
        if (options.order == IterationOrder::OracleFirst) {
            rho.apply_oracle();
            rho.apply_sum(diffusion);
        } else {
            rho.apply_sum(diffusion);
            rho.apply_oracle();
        }
        apply_noise();
    };

    if (options.noise_after_preparation) apply_noise();
    RunTrace out;
    out.records.reserve(static_cast<std::size_t>(iterations) + 1);
    for (long k = 0; k <= iterations; ++k) {
        if (k > 0) apply_iteration();
        out.records.push_back({.k = k,
                               .success_probability = rho.success_probability(),
                               .entropy = std::numeric_limits<double>::quiet_NaN(),
                               .trace_drift = std::abs(rho.trace() - 1.0),
                               .discarded_weight = 0.0,
                               .max_bond = 1});
    }
    return out;
}

}  // namespace grover::symmetric
