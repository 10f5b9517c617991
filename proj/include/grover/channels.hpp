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

#include <string>
#include <variant>
#include <vector>

#include "grover/common.hpp"

namespace grover {

enum class ChannelKind { PhaseFlip, AmplitudeDamping, Custom };

std::string to_string(ChannelKind kind);

/// Single-qubit operator-sum channel. Immutable once built, so one instance
/// can be read by any number of trajectory workers.
///
/// The constructor only checks shape; completeness is a property of the
/// factories below and is measured by verify_completeness().
class KrausChannel {
   public:
    KrausChannel(std::vector<Mat2> operators, double rate, ChannelKind kind);

    const std::vector<Mat2>& operators() const { return operators_; }
    const Mat2& op(std::size_t m) const { return operators_[m]; }
    std::size_t size() const { return operators_.size(); }
    double rate() const { return rate_; }
    ChannelKind kind() const { return kind_; }

   private:
    std::vector<Mat2> operators_;
    double rate_;
    ChannelKind kind_;
};

/// {sqrt(p) Z, sqrt(1-p) I}. Operator 0 is the jump.
KrausChannel make_phase_flip(double p);

/// {sqrt(p) |0><1|, |0><0| + sqrt(1-p) |1><1|}. Operator 0 is the jump.
KrausChannel make_amplitude_damping(double p);

KrausChannel make_channel(ChannelKind kind, double p);

/// Returns the equivalent channel F_m = sum_n U_mn E_n. U must be unitary
/// with dimension equal to the operator count.
KrausChannel mix_channel(const KrausChannel& channel, const MatrixXc& mixing);

/// Max-norm of sum_m F_m^dag F_m - I.
double verify_completeness(const KrausChannel& channel);

/// sum_m F_m (x) conj(F_m), acting on single-site vectorized matrices with
/// |i><j| -> index 2i + j.
Mat4 local_superoperator(const KrausChannel& channel);

/// sum_m F_m rho F_m^dag on a 2x2 matrix.
Mat2 apply_channel(const KrausChannel& channel, const Mat2& rho);

/// rho -> (1 - p) rho + p I / 2^n on a full register. Dense only.
class GlobalDepolarizing {
   public:
    explicit GlobalDepolarizing(double rate);
    double rate() const { return rate_; }

   private:
    double rate_;
};

/// Requires unit trace (to 1e-8); throws StateError otherwise.
MatrixXc apply_depolarizing_dense(const MatrixXc& dm, const GlobalDepolarizing& noise);

/// Noise applied after each Grover iteration by the dense engine.
using NoiseModel = std::variant<std::monostate, KrausChannel, GlobalDepolarizing>;

}  // namespace grover
