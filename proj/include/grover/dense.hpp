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

#include <vector>

#include "grover/channels.hpp"
#include "grover/common.hpp"

namespace grover {

/// One row of a per-iteration time series. `entropy` is the mid-cut state
/// entropy for pure runs and the operator entanglement for mixed runs.
struct RunRecord {
    long k = 0;
    double success_probability = 0.0;
    double entropy = 0.0;
    double trace_drift = 0.0;
    double discarded_weight = 0.0;
    std::size_t max_bond = 1;
};

struct RunTrace {
    std::vector<RunRecord> records;
};

/// Which reflection is applied first inside one Grover iteration.
enum class IterationOrder { OracleFirst, DiffusionFirst };

/// Weights entering the operator entanglement of rho = sum_a s_a A_a (x) B_a
/// with Hilbert-Schmidt orthonormal A_a, B_a and Tr rho = 1.
enum class OperatorSchmidtWeights {
    /// s_a^2 / sum_b s_b^2, a probability vector.
    Normalized,
    /// s_a^2 as they stand; they sum to Tr rho^2.
    Raw,
};

/// -sum_a w_a log2 w_a for operator-Schmidt coefficients s.
double operator_schmidt_entropy(const Eigen::VectorXd& s, OperatorSchmidtWeights weights);

struct RunOptions {
    IterationOrder order = IterationOrder::OracleFirst;
    /// Also apply the noise once after the initial Hadamard layer.
    bool noise_after_preparation = false;
    /// Weights of the operator entanglement recorded by mixed runs.
    OperatorSchmidtWeights oe_weights = OperatorSchmidtWeights::Normalized;
};

}  // namespace grover

namespace grover::dense {

inline constexpr int kMaxStateQubits = 14;
inline constexpr int kMaxDensityQubits = 12;

/// Statevector of n qubits; qubit 0 is the most significant index bit.
struct DenseState {
    int n = 0;
    VectorXc amplitudes;
};

struct DenseDensityMatrix {
    int n = 0;
    MatrixXc entries;

    static DenseDensityMatrix from_state(const DenseState& state);
    static DenseDensityMatrix maximally_mixed(int n);
};

/// Uniform superposition |s>. Throws ResourceError outside 2 <= n <= 14.
DenseState init_uniform(int n);
DenseState basis_state(const Bitstring& bits);

void apply_oracle(DenseState& state, const Bitstring& omega);
void apply_oracle(DenseDensityMatrix& dm, const Bitstring& omega);
void apply_diffusion(DenseState& state);
void apply_diffusion(DenseDensityMatrix& dm);

/// Applies a 2x2 operator on one qubit (no renormalization).
void apply_single_qubit(DenseState& state, int qubit, const Mat2& op);
void apply_channel(DenseDensityMatrix& dm, int qubit, const KrausChannel& channel);
void apply_depolarizing(DenseDensityMatrix& dm, const GlobalDepolarizing& noise);

double success_probability(const DenseState& state, const Bitstring& omega);
double success_probability(const DenseDensityMatrix& dm, const Bitstring& omega);

/// Reduced density matrix of qubits [0, cut); requires 1 <= cut <= n-1.
MatrixXc reduced_density_matrix(const DenseState& state, int cut);
MatrixXc reduced_density_matrix(const DenseDensityMatrix& dm, int cut);

/// Eigenvalues of a Hermitian matrix, descending.
std::vector<double> spectrum(const MatrixXc& hermitian);

/// -Tr[rho log2 rho] with eigenvalues clamped at zero.
double entropy_bits(const MatrixXc& rdm);

double entanglement_entropy(const DenseState& state, int cut);

/// Operator entanglement of rho across qubits [0, cut) | [cut, n).
double operator_entanglement(const DenseDensityMatrix& dm, int cut,
                             OperatorSchmidtWeights weights = OperatorSchmidtWeights::Normalized);

/// Runs M Grover iterations from |s>, noise after each iteration. Without
/// noise the statevector is evolved and the entropy column holds the
/// equal-cut entanglement; otherwise the density matrix is evolved and the
/// column holds the equal-cut operator entanglement.
RunTrace run_grover(int n, const Bitstring& omega, const NoiseModel& noise, long iterations,
                    const RunOptions& options = {});

}  // namespace grover::dense
