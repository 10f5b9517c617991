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

#pragma once

#include <span>
#include <vector>

namespace grover::stats {

/// Neumaier-compensated running sum.
class CompensatedSum {
   public:
    void add(double x);
    double value() const { return sum_ + compensation_; }

   private:
    double sum_ = 0.0;
    double compensation_ = 0.0;
};

double mean(std::span<const double> xs);
/// Unbiased sample variance; 0 for fewer than two values.
double sample_variance(std::span<const double> xs);
/// sqrt(sample variance / count).
double standard_error(std::span<const double> xs);
/// Linearly interpolated quantile (q in [0, 1]) of unsorted data.
double quantile(std::vector<double> xs, double q);

}  // namespace grover::stats
