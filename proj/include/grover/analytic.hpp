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

// Closed-form two-level description of noiseless Grover search. After k
// iterations the register is sin(theta_k)|w> + cos(theta_k)|r>, with |r> the
// normalized sum of all non-target basis states. Everything here is a pure
// function and serves as the reference for the numerical engines.

namespace grover::analytic {

/// (2k + 1) asin(2^{-n/2}). Requires n >= 2, k >= 0.
double grover_angle(int n, long k);

/// sin^2 of grover_angle(n, k).
double ideal_success_probability(int n, long k);

/// floor(pi/4 * 2^{n/2}).
long optimal_iterations(int n);

struct ReducedElements {
    double alpha;
    double beta;
    double gamma;
};

/// Entries of the equal-bipartition reduced density matrix in the basis
/// {|w_A>, |a>_{a != w_A}}. n must be even.
ReducedElements reduced_dm_elements(int n, double theta);

struct ReducedSpectrum {
    double alpha;
    double beta;
    double gamma;
    double lambda_plus;
    double lambda_minus;
};

/// The two non-zero eigenvalues of the reduced density matrix. A negative
/// lambda_minus above -1e-12 (round-off) is clamped to zero.
ReducedSpectrum reduced_eigenvalues(int n, double theta);

/// Equal-cut entanglement entropy in bits, in [0, 1].
double two_level_entropy(int n, double theta);

}  // namespace grover::analytic
