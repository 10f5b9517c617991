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

#include "grover/analytic.hpp"

#include <array>
#include <cmath>
#include <string>

#include "grover/common.hpp"

namespace grover::analytic {

namespace {

void check_register(int n) {
    if (n < 2) {
        throw DomainError("Grover register needs n >= 2 qubits, got " + std::to_string(n));
    }
}

void check_even(int n) {
    check_register(n);
    if (n % 2 != 0) {
        throw DomainError("equal bipartition requires even n, got " + std::to_string(n));
    }
}

}  // namespace

double grover_angle(int n, long k) {
    check_register(n);
    if (k < 0) {
        throw DomainError("iteration index must be non-negative");
    }
    return static_cast<double>(2 * k + 1) * std::asin(std::exp2(-0.5 * n));
}

double ideal_success_probability(int n, long k) {
    const double s = std::sin(grover_angle(n, k));
    return s * s;
}

long optimal_iterations(int n) {
    check_register(n);
    return static_cast<long>(std::floor(0.25 * kPi * std::exp2(0.5 * n)));
}

ReducedElements reduced_dm_elements(int n, double theta) {
    check_even(n);
    const double big_n = std::exp2(n);
    const double root_n = std::exp2(n / 2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double w = (root_n - 1.0) / (big_n - 1.0);
    return {
        .alpha = w * c * c + s * s,
        .beta = w * c * c + c * s / std::sqrt(big_n - 1.0),
        .gamma = root_n / (big_n - 1.0) * c * c,
    };
}

ReducedSpectrum reduced_eigenvalues(int n, double theta) {
    const auto e = reduced_dm_elements(n, theta);
    const double m = std::exp2(n / 2) - 1.0;
    const double d = e.alpha - m * e.gamma;
    const double r = std::sqrt(d * d + 4.0 * m * e.beta * e.beta);
    double minus = 0.5 - 0.5 * r;
    if (minus < 0.0 && minus >= -1e-12) {
        minus = 0.0;
    }
    return {e.alpha, e.beta, e.gamma, 0.5 + 0.5 * r, minus};
}

double two_level_entropy(int n, double theta) {
    const auto spec = reduced_eigenvalues(n, theta);
    const std::array<double, 2> probs{spec.lambda_plus, spec.lambda_minus};
    return entropy_bits(probs);
}

}  // namespace grover::analytic
