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

#include "grover/channels.hpp"

#include <cmath>

namespace grover {

namespace {

void check_probability(double p, const char* what) {
    if (!(p >= 0.0 && p <= 1.0)) {
        throw DomainError(std::string(what) + ": rate must lie in [0, 1], got " + std::to_string(p));
    }
}

}  // namespace

std::string to_string(ChannelKind kind) {
    switch (kind) {
        case ChannelKind::PhaseFlip:
            return "phase_flip";
        case ChannelKind::AmplitudeDamping:
            return "amplitude_damping";
        case ChannelKind::Custom:
            return "custom";
    }
    return "unknown";
}

KrausChannel::KrausChannel(std::vector<Mat2> operators, double rate, ChannelKind kind)
    : operators_(std::move(operators)), rate_(rate), kind_(kind) {
    if (operators_.empty()) {
        throw ValidationError("a Kraus channel needs at least one operator");
    }
}

KrausChannel make_phase_flip(double p) {
    check_probability(p, "phase flip");
    Mat2 jump = Mat2::Zero();
    jump(0, 0) = std::sqrt(p);
    jump(1, 1) = -std::sqrt(p);
    Mat2 stay = std::sqrt(1.0 - p) * Mat2::Identity();
    return KrausChannel({jump, stay}, p, ChannelKind::PhaseFlip);
}

KrausChannel make_amplitude_damping(double p) {
    check_probability(p, "amplitude damping");
    Mat2 jump = Mat2::Zero();
    jump(0, 1) = std::sqrt(p);
    Mat2 stay = Mat2::Zero();
    stay(0, 0) = 1.0;
    stay(1, 1) = std::sqrt(1.0 - p);
    return KrausChannel({jump, stay}, p, ChannelKind::AmplitudeDamping);
}

KrausChannel make_channel(ChannelKind kind, double p) {
    switch (kind) {
        case ChannelKind::PhaseFlip:
            return make_phase_flip(p);
        case ChannelKind::AmplitudeDamping:
            return make_amplitude_damping(p);
        case ChannelKind::Custom:
            break;
    }
    throw ValidationError("no factory for custom channels");
}

KrausChannel mix_channel(const KrausChannel& channel, const MatrixXc& mixing) {
    const auto m = static_cast<Eigen::Index>(channel.size());
    if (mixing.rows() != m || mixing.cols() != m) {
        throw ValidationError("mixing matrix must be " + std::to_string(m) + "x" + std::to_string(m));
    }
    const double residual = (mixing.adjoint() * mixing - MatrixXc::Identity(m, m)).cwiseAbs().maxCoeff();
    if (residual > 1e-12) {
        throw ValidationError("mixing matrix is not unitary (residual " + std::to_string(residual) + ")");
    }
    std::vector<Mat2> mixed(channel.size(), Mat2::Zero());
    for (Eigen::Index a = 0; a < m; ++a) {
        for (Eigen::Index b = 0; b < m; ++b) {
            mixed[static_cast<std::size_t>(a)] += mixing(a, b) * channel.op(static_cast<std::size_t>(b));
        }
    }
    return KrausChannel(std::move(mixed), channel.rate(), channel.kind());
}

double verify_completeness(const KrausChannel& channel) {
    Mat2 sum = Mat2::Zero();
    for (const auto& f : channel.operators()) {
        sum += f.adjoint() * f;
    }
    return (sum - Mat2::Identity()).cwiseAbs().maxCoeff();
}

Mat4 local_superoperator(const KrausChannel& channel) {
    Mat4 out = Mat4::Zero();
    for (const auto& f : channel.operators()) {
        // row (i, j) -> 2i + j, column (k, l) -> 2k + l
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) out(2 * i + j, 2 * k + l) += f(i, k) * std::conj(f(j, l));
    }
    return out;
}

Mat2 apply_channel(const KrausChannel& channel, const Mat2& rho) {
    Mat2 out = Mat2::Zero();
    for (const auto& f : channel.operators()) {
        out += f * rho * f.adjoint();
    }
    return out;
}

GlobalDepolarizing::GlobalDepolarizing(double rate) : rate_(rate) { check_probability(rate, "global depolarizing"); }

MatrixXc apply_depolarizing_dense(const MatrixXc& dm, const GlobalDepolarizing& noise) {
    if (dm.rows() != dm.cols() || dm.rows() == 0) {
        throw ValidationError("density matrix must be square and non-empty");
    }
    const cplx trace = dm.trace();
    if (std::abs(trace - 1.0) > 1e-8) {
        throw StateError("depolarizing map requires unit trace, got " + std::to_string(trace.real()));
    }
    const double p = noise.rate();
    const auto dim = dm.rows();
    MatrixXc out = (1.0 - p) * dm;
    out.diagonal().array() += p / static_cast<double>(dim);
    return out;
}

}  // namespace grover
