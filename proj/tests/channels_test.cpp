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

#include "gtest/gtest.h"
#include "test_util.hpp"

using namespace grover;
using grover::testing::max_abs;

namespace {

Mat2 sigma_z() {
    Mat2 z = Mat2::Zero();
    z(0, 0) = 1.0;
    z(1, 1) = -1.0;
    return z;
}

Mat2 random_rho(std::mt19937_64& rng) { return grover::testing::random_density(rng, 2); }

Eigen::Vector4cd vectorize(const Mat2& m) {
    Eigen::Vector4cd v;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) v(2 * i + j) = m(i, j);
    return v;
}

}  // namespace

TEST(Channels, phase_flip_operators) {
    auto zero = make_phase_flip(0.0);
    ASSERT_EQ(zero.size(), 2u);
    EXPECT_EQ(max_abs(zero.op(0)), 0.0);
    EXPECT_EQ(max_abs(zero.op(1) - Mat2::Identity()), 0.0);

    auto ch = make_phase_flip(0.02);
    EXPECT_LE(max_abs(ch.op(0) - std::sqrt(0.02) * sigma_z()), 1e-16);
    EXPECT_LE(max_abs(ch.op(1) - std::sqrt(0.98) * Mat2::Identity()), 1e-16);
    EXPECT_EQ(ch.kind(), ChannelKind::PhaseFlip);
    EXPECT_EQ(ch.rate(), 0.02);
}

TEST(Channels, phase_flip_zero_rate_is_identity_map) {
    std::mt19937_64 rng(1);
    const auto ch = make_phase_flip(0.0);
    for (int t = 0; t < 5; ++t) {
        Mat2 rho = random_rho(rng);
        EXPECT_LE(max_abs(apply_channel(ch, rho) - rho), 1e-15);
    }
}

TEST(Channels, completeness_residuals) {
    EXPECT_LE(verify_completeness(make_phase_flip(0.3)), 1e-15);
    EXPECT_LE(verify_completeness(make_amplitude_damping(0.7)), 1e-15);
    for (int i = 0; i <= 10; ++i) {
        const double p = i / 10.0;
        EXPECT_LE(verify_completeness(make_phase_flip(p)), 1e-12);
        EXPECT_LE(verify_completeness(make_amplitude_damping(p)), 1e-12);
    }
    KrausChannel half({std::sqrt(0.5) * Mat2::Identity()}, 0.0, ChannelKind::Custom);
    EXPECT_NEAR(verify_completeness(half), 0.5, 1e-15);
}

TEST(Channels, rate_out_of_range) {
    EXPECT_THROW(make_phase_flip(-0.1), DomainError);
    EXPECT_THROW(make_phase_flip(1.5), DomainError);
    EXPECT_THROW(make_amplitude_damping(-1e-9), DomainError);
    EXPECT_THROW(make_amplitude_damping(std::nan("")), DomainError);
    EXPECT_THROW(GlobalDepolarizing(2.0), DomainError);
    EXPECT_THROW(KrausChannel({}, 0.0, ChannelKind::Custom), ValidationError);
}

TEST(Channels, amplitude_damping_jump_probabilities) {
    for (double p : {0.0, 0.01, 0.3, 1.0}) {
        const auto ch = make_amplitude_damping(p);
        Vec2 one(0.0, 1.0);
        Vec2 zero(1.0, 0.0);
        EXPECT_NEAR((ch.op(0) * one).squaredNorm(), p, 1e-14);
        EXPECT_EQ((ch.op(0) * zero).squaredNorm(), 0.0);
        EXPECT_LE(max_abs(ch.op(1) * zero - zero), 0.0);
    }
}

TEST(Channels, full_damping_of_plus_state) {
    const auto ch = make_amplitude_damping(1.0);
    Mat2 plus = Mat2::Constant(0.5);
    Mat2 ground = Mat2::Zero();
    ground(0, 0) = 1.0;
    EXPECT_LE(max_abs(apply_channel(ch, plus) - ground), 1e-15);
}

TEST(Channels, mix_identity_and_swap) {
    const auto ch = make_amplitude_damping(0.3);
    const auto same = mix_channel(ch, MatrixXc::Identity(2, 2));
    EXPECT_EQ(max_abs(same.op(0) - ch.op(0)), 0.0);
    EXPECT_EQ(max_abs(same.op(1) - ch.op(1)), 0.0);

    MatrixXc swap = MatrixXc::Zero(2, 2);
    swap(0, 1) = swap(1, 0) = 1.0;
    const auto swapped = mix_channel(ch, swap);
    EXPECT_EQ(max_abs(swapped.op(0) - ch.op(1)), 0.0);
    EXPECT_EQ(max_abs(swapped.op(1) - ch.op(0)), 0.0);
}

TEST(Channels, hadamard_mixing_gives_projective_measurement) {
    MatrixXc h(2, 2);
    h << 1.0, 1.0, 1.0, -1.0;
    h /= std::sqrt(2.0);
    const auto mixed = mix_channel(make_phase_flip(0.5), h);
    Mat2 p0 = Mat2::Zero();
    p0(0, 0) = 1.0;
    Mat2 p1 = Mat2::Zero();
    p1(1, 1) = 1.0;
    EXPECT_LE(max_abs(mixed.op(0) - p0), 1e-15);
    // second row (1, -1)/sqrt2 gives (sqrt.5 Z - sqrt.5 I)/sqrt2 = -|1><1|
    EXPECT_LE(max_abs(mixed.op(1) + p1), 1e-15);
}

TEST(Channels, mix_rejects_bad_matrices) {
    const auto ch = make_phase_flip(0.1);
    MatrixXc bad = MatrixXc::Identity(2, 2);
    bad(0, 1) = 0.1;
    EXPECT_THROW(mix_channel(ch, bad), ValidationError);
    EXPECT_THROW(mix_channel(ch, MatrixXc::Identity(3, 3)), ValidationError);
}

TEST(Channels, mixing_invariance_of_dense_map) {
    std::mt19937_64 rng(7);
    for (const auto& ch : {make_phase_flip(0.13), make_amplitude_damping(0.37)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const auto mixed = mix_channel(ch, grover::testing::random_unitary(rng, 2));
            for (int s = 0; s < 20; ++s) {
                Mat2 rho = random_rho(rng);
                EXPECT_LE(max_abs(apply_channel(mixed, rho) - apply_channel(ch, rho)), 1e-12);
            }
        }
    }
}

TEST(Channels, completeness_survives_mixing_chains) {
    std::mt19937_64 rng(11);
    auto ch = make_amplitude_damping(0.42);
    for (int i = 0; i < 50; ++i) {
        ch = mix_channel(ch, grover::testing::random_unitary(rng, 2));
        ASSERT_LE(verify_completeness(ch), 1e-12) << "after " << i + 1 << " mixings";
    }
}

TEST(Channels, local_superoperator_forms) {
    KrausChannel id({Mat2::Identity()}, 0.0, ChannelKind::Custom);
    EXPECT_EQ(max_abs(local_superoperator(id) - Mat4::Identity()), 0.0);

    const double p = 0.27;
    Mat4 expected = Mat4::Zero();
    expected.diagonal() << 1.0, 1.0 - 2 * p, 1.0 - 2 * p, 1.0;
    EXPECT_LE(max_abs(local_superoperator(make_phase_flip(p)) - expected), 1e-15);

    std::mt19937_64 rng(3);
    const auto ad = make_amplitude_damping(0.2);
    for (int t = 0; t < 10; ++t) {
        const auto mixed = mix_channel(ad, grover::testing::random_unitary(rng, 2));
        EXPECT_LE(max_abs(local_superoperator(mixed) - local_superoperator(ad)), 1e-12);
    }
}

TEST(Channels, superoperator_matches_dense_map) {
    std::mt19937_64 rng(5);
    for (const auto& ch : {make_phase_flip(0.4), make_amplitude_damping(0.6)}) {
        const Mat4 sup = local_superoperator(ch);
        for (int t = 0; t < 10; ++t) {
            // arbitrary (non-Hermitian) 2x2 matrices too
            Mat2 m = grover::testing::random_gaussian(rng, 2, 2);
            EXPECT_LE((sup * vectorize(m) - vectorize(apply_channel(ch, m))).cwiseAbs().maxCoeff(), 1e-13);
        }
    }
}

TEST(Channels, phase_flip_keeps_populations) {
    std::mt19937_64 rng(9);
    const auto ch = make_phase_flip(0.31);
    for (int t = 0; t < 10; ++t) {
        Mat2 rho = random_rho(rng);
        Mat2 out = apply_channel(ch, rho);
        EXPECT_NEAR(out(0, 0).real(), rho(0, 0).real(), 1e-15);
        EXPECT_NEAR(out(1, 1).real(), rho(1, 1).real(), 1e-15);
    }
}

TEST(Channels, global_depolarizing) {
    std::mt19937_64 rng(13);
    MatrixXc rho = grover::testing::random_density(rng, 8);
    EXPECT_LE(max_abs(apply_depolarizing_dense(rho, GlobalDepolarizing(0.0)) - rho), 1e-16);
    EXPECT_LE(max_abs(apply_depolarizing_dense(rho, GlobalDepolarizing(1.0)) - MatrixXc::Identity(8, 8) / 8.0),
              1e-16);

    MatrixXc target = MatrixXc::Zero(4, 4);
    target(2, 2) = 1.0;
    const auto out = apply_depolarizing_dense(target, GlobalDepolarizing(0.1));
    EXPECT_NEAR(out(2, 2).real(), 0.925, 1e-15);
    EXPECT_NEAR(out.trace().real(), 1.0, 1e-15);

    EXPECT_THROW(apply_depolarizing_dense(2.0 * target, GlobalDepolarizing(0.1)), StateError);
}
