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

#include <cstdint>
#include <span>
#include <vector>

#include "grover/channels.hpp"
#include "grover/dense.hpp"
#include "grover/tensornet.hpp"

namespace grover {

/// Density operator stored as an MPS over vectorized sites: the local index
/// of qubit q is 2 i_q + j_q for the matrix element <i|rho|j>.
class Mpdo {
   public:
    explicit Mpdo(Mps vectorized);

    /// (x)_q |v_q><v_q| from normalized local vectors.
    static Mpdo from_pure_product(std::span<const VectorXc> local_vectors);
    /// Exact decomposition of a dense 2^n x 2^n operator. Small n only.
    static Mpdo from_dense(const MatrixXc& rho, int n);

    int size() const { return vec_.size(); }
    Mps& vectorized() { return vec_; }
    const Mps& vectorized() const { return vec_; }

    MatrixXc to_dense() const;

    /// Raw traces found before each renormalization, in order.
    const std::vector<double>& trace_log() const { return trace_log_; }
    double discarded_weight() const { return vec_.discarded_weight(); }

    /// Rescales to unit trace and logs the raw value. Returns |raw - 1|.
    double renormalize_trace();

   private:
    Mps vec_;
    std::vector<double> trace_log_;
};

/// W (x) conj(W) on every site: applied to a vectorized operator it gives
/// U rho U^dagger. Bond dimension b becomes b^2.
Mpo lift_unitary_mpo(const Mpo& unitary);

/// Applies a lifted superoperator, compresses under `policy` (Frobenius
/// renormalization is disabled), then restores unit trace. Returns the raw
/// trace drift.
double apply_superoperator(Mpdo& rho, const Mpo& superoperator, const TruncationPolicy& policy);

/// Contracts the 4 x 4 channel superoperator into one site. No truncation.
void apply_channel_local(Mpdo& rho, int qubit, const KrausChannel& channel);

double trace(const Mpdo& rho);
double success_probability(const Mpdo& rho, const Bitstring& omega);
/// Tr(rho^2), valid for Hermitian rho.
double purity(Mpdo& rho);
/// max |<A> - conj(<A^dagger>)| over `samples` random product operators.
double hermiticity_residual(const Mpdo& rho, int samples = 16, std::uint64_t seed = 1);
/// Entropy of the operator-Schmidt spectrum across the cut, in bits.
double operator_entanglement(Mpdo& rho, int cut,
                             OperatorSchmidtWeights weights = OperatorSchmidtWeights::Normalized);

inline constexpr double kMaxTraceDrift = 1e-6;

/// Iterations from |s><s| with the channel on every qubit after each Grover
/// iteration. Each lifted MPO application is followed by a compression. The
/// entropy column holds the equal-cut operator entanglement. A raw trace
/// drift above kMaxTraceDrift raises StateError.
RunTrace run_grover_mpdo(int n, const Bitstring& omega, const NoiseModel& noise, long iterations,
                         const TruncationPolicy& policy, const RunOptions& options = {});

}  // namespace grover
