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
#include <vector>

#include "grover/channels.hpp"
#include "grover/common.hpp"
#include "grover/dense.hpp"
#include "grover/rng.hpp"
#include "grover/tensornet.hpp"
#include "grover/unraveling.hpp"

namespace grover {

struct TrajectoryConfig {
    int n = 10;
    Bitstring omega;
    ChannelKind channel = ChannelKind::PhaseFlip;
    double p = 0.0;
    long iterations = 1;
    int n_traj = 1;
    TruncationPolicy policy;
    UnravelingStrategy strategy;
    std::uint64_t seed = 0;
    /// Entropy cut; qubits [0, cut) | [cut, n).
    int cut = 5;
    /// Keep per-trajectory records (series and jump logs) in the result.
    bool retain_records = false;

    /// Defaults for an n-qubit register: all-ones target, equal cut and
    /// optimal_iterations(n).
    static TrajectoryConfig for_register(int n);
    void validate() const;
    KrausChannel make_channel() const;
};

/// One drawn Kraus outcome. `outcome` indexes the (possibly mixed) set.
struct JumpEvent {
    long iteration = 0;
    int qubit = 0;
    int outcome = 0;
    friend bool operator==(const JumpEvent&, const JumpEvent&) = default;
};

struct TrajectoryRecord {
    std::size_t index = 0;
    std::uint64_t seed_used = 0;
    /// Entropy in bits at the cut after each iteration; entry 0 is |s>.
    std::vector<double> entropy_series;
    std::vector<double> success_series;
    std::vector<JumpEvent> jump_log;
    double final_success = 0.0;
    std::size_t max_bond = 1;
};

/// Evolves one trajectory state by whole Grover iterations.
class TrajectoryStepper {
   public:
    explicit TrajectoryStepper(const TrajectoryConfig& config);

    /// Oracle, diffusion (truncated per policy), then one Kraus draw per
    /// qubit in ascending order. Draws are appended to `log` when given.
    void step(Mps& state, long iteration, Rng& rng, std::vector<JumpEvent>* log) const;

    /// The Kraus set the strategy picks for `qubit` of `state`.
    KrausChannel kraus_set(Mps& state, int qubit) const;

   private:
    TrajectoryConfig config_;
    KrausChannel channel_;
    Mpo oracle_;
    Mpo diffusion_;
};

/// Runs trajectory `index` of the ensemble from |s>.
TrajectoryRecord run_trajectory(const TrajectoryConfig& config, std::size_t index);

struct PercentileBands {
    std::vector<double> p05, p25, p50, p75, p95;
    std::vector<double> min, max;
};

struct EnsembleResult {
    /// S_T(k): mean trajectory entanglement.
    std::vector<double> mean_entropy;
    std::vector<double> entropy_stderr;
    PercentileBands bands;
    std::vector<double> mean_success_series;
    std::vector<double> success_stderr_series;
    double mean_success = 0.0;
    double standard_error = 0.0;
    /// Largest single-trajectory entropy over the whole run.
    double max_entropy = 0.0;
    std::size_t max_bond = 1;
    /// Filled when config.retain_records is set.
    std::vector<TrajectoryRecord> records;
};

/// Statistics are reduced in trajectory order, so the result does not
/// depend on `workers` (0 = hardware concurrency).
EnsembleResult run_ensemble(const TrajectoryConfig& config, int workers = 0);

/// Noiseless pure-state Grover search on the MPS: `iterations` rounds of
/// oracle then diffusion from |s>. The entropy column is taken at `cut`.
RunTrace run_grover_mps(int n, const Bitstring& omega, long iterations, int cut, const TruncationPolicy& policy);

inline constexpr int kMaxCrosscheckQubits = 8;

struct CrosscheckResult {
    /// Max-norm distance between the trajectory-averaged and the exact
    /// density matrix after the last iteration.
    double distance = 0.0;
    double exact_success = 0.0;
    double mean_success = 0.0;
    double success_stderr = 0.0;
};

/// Same unraveling on dense statevectors (no truncation), averaged outer
/// products against dense::run_grover's density matrix. n <= 8.
CrosscheckResult dense_trajectory_crosscheck(const TrajectoryConfig& config, int workers = 0);

}  // namespace grover
