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

#include "grover/stats.hpp"

#include <algorithm>
#include <cmath>

#include "grover/common.hpp"

namespace grover::stats {

void CompensatedSum::add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
        compensation_ += (sum_ - t) + x;
    } else {
        compensation_ += (x - t) + sum_;
    }
    sum_ = t;
}

double mean(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("mean of an empty sample");
    CompensatedSum s;
    for (double x : xs) s.add(x);
    return s.value() / static_cast<double>(xs.size());
}

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    const double m = mean(xs);
    CompensatedSum s;
    for (double x : xs) s.add((x - m) * (x - m));
    return s.value() / static_cast<double>(xs.size() - 1);
}

double standard_error(std::span<const double> xs) {
    if (xs.empty()) throw DomainError("standard error of an empty sample");
    return std::sqrt(sample_variance(xs) / static_cast<double>(xs.size()));
}

double quantile(std::vector<double> xs, double q) {
    if (xs.empty()) throw DomainError("quantile of an empty sample");
    if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level must lie in [0, 1]");
    std::sort(xs.begin(), xs.end());
    const double pos = q * static_cast<double>(xs.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, xs.size() - 1);
    return xs[lo] + (pos - static_cast<double>(lo)) * (xs[hi] - xs[lo]);
}

}  // namespace grover::stats
