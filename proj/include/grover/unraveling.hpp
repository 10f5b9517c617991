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

// Choice of Kraus set per noise application. Any unitary mixing
// F_m = sum_n U_mn E_n describes the same channel; the strategies differ
// only in which pure-state trajectories they produce.

#include <array>
#include <functional>
#include <string>
#include <string_view>

#include "grover/channels.hpp"
#include "grover/common.hpp"
#include "grover/tensornet.hpp"

namespace grover {

enum class StrategyKind { Naive, MaxNonUnitarity, GreedyEntropyMin };

/// Scalar maximized by the MaxNonUnitarity strategy.
enum class NonUnitarityFunctional {
    /// Minus the expected Renyi-2 entropy at the cut after the outcome,
    /// -sum_m p_m S_2(rho_A,m). Needs the state, not only the site.
    CutRenyi2,
    /// sum_m Var_r(F_m^dag F_m) on the one-site state r: zero when every
    /// outcome rescales the site uniformly, largest for projective outcomes.
    KrausVariance,
    /// 1 - sum_m |Tr(r F_m)|^2. Invariant under every mixing.
    OverlapDeficit,
};

struct UnravelingStrategy {
    StrategyKind kind = StrategyKind::Naive;
    /// Points per axis of the coarse (theta, phi) grid; at least 4.
    int grid_resolution = 8;
    /// Golden-section steps per coordinate after the grid.
    int refinement_iterations = 12;
    NonUnitarityFunctional functional = NonUnitarityFunctional::CutRenyi2;

    void validate() const;
};

std::string to_string(StrategyKind kind);
/// Accepts "naive", "numu" and "greedy".
StrategyKind parse_strategy(std::string_view name);

/// [[cos t, e^{i phi} sin t], [-e^{-i phi} sin t, cos t]]. Together with
/// per-row phases, which never change a trajectory, these cover U(2).
Mat2 mixing_matrix(double theta, double phi);

/// Maximizes `objective` over mixing_matrix(theta, phi), theta in
/// [0, pi/2], phi in [0, 2 pi): coarse grid, then alternating golden-section
/// refinement. The identity is returned unless some point beats it by more
/// than 1e-14.
Mat2 maximize_over_mixings(const std::function<double(const Mat2&)>& objective, const UnravelingStrategy& settings);

/// A site operator seen from one side of a cut, in the eigenbasis of the
/// reduced state of the side holding the qubit. With weights w and M_xy the
/// matrix of |x><y| on that qubit: p(F) = sum_a w_a M(F^dag F)_aa and
/// Tr(rho_F^2) = sum_ab w_a w_b |M(F^dag F)_ab|^2 / p^2.
struct CutProjection {
    Eigen::VectorXd weights;
    std::array<MatrixXc, 4> blocks;  // index 2 x + y

    double probability(const Mat2& f) const;
    /// sum_m p_m S_2 over the outcomes, in bits.
    double expected_renyi2(const KrausChannel& channel) const;
};

CutProjection project_on_cut(Mps& state, int qubit, int cut);

/// Functionals that only need the site state; CutRenyi2 throws DomainError.
double non_unitarity(const Mat2& site_rdm, const KrausChannel& channel, NonUnitarityFunctional functional);

/// Mixing maximizing a one-site functional. Needs a two-operator channel.
Mat2 optimize_mixing_nonunitarity(const Mat2& site_rdm, const KrausChannel& channel,
                                  const UnravelingStrategy& settings);
/// Mixing maximizing settings.functional for `qubit` of `state` at `cut`.
Mat2 optimize_mixing_nonunitarity(Mps& state, int qubit, const KrausChannel& channel, int cut,
                                  const UnravelingStrategy& settings);

/// sum_m p_m S(F_m psi / sqrt(p_m)) at `cut`, by trial application.
double expected_entropy(const Mps& state, int qubit, const KrausChannel& channel, int cut);

/// Mixing minimizing expected_entropy. Needs a two-operator channel.
Mat2 optimize_mixing_entropy(const Mps& state, int qubit, const KrausChannel& channel, int cut,
                             const UnravelingStrategy& settings);

}  // namespace grover
