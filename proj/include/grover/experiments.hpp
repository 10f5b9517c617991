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

// Noise-rate sweeps of the final success probability and the fits of
// P_f = 2^{-n} + e^{-b n} p^{-a}.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grover/channels.hpp"
#include "grover/common.hpp"

namespace grover::experiments {

enum class SweepEngine { Mpdo, Dense, Symmetric };
enum class TargetPolicy { FixedAllOnes, BinomialAverage };

std::string to_string(SweepEngine engine);
SweepEngine parse_engine(std::string_view name);
std::string to_string(TargetPolicy policy);

/// `count` points spaced evenly in log between lo and hi inclusive.
std::vector<double> log_grid(double lo, double hi, int count);
/// 20 points in [5e-3, 5e-1].
std::vector<double> default_p_grid();

struct SweepSpec {
    ChannelKind channel = ChannelKind::PhaseFlip;
    std::vector<int> n_list = {8, 10, 12, 14, 16};
    std::vector<double> p_grid = default_p_grid();
    SweepEngine engine = SweepEngine::Mpdo;
    TargetPolicy targets = TargetPolicy::FixedAllOnes;
    /// Starting MPDO bond dimension.
    std::size_t chi_max = 16;
    /// MPDO only: double chi until two successive values agree within
    /// convergence_tolerance, up to chi_cap. A point that never agrees is
    /// flagged.
    bool adaptive_chi = true;
    std::size_t chi_cap = 128;
    double convergence_tolerance = 1e-6;

    /// Phase flip on the all-ones target through the MPDO.
    static SweepSpec phase_flip();
    /// Amplitude damping, binomially averaged, through the symmetric engine.
    static SweepSpec amplitude_damping();
    void validate() const;
};

struct ScalingPoint {
    int n = 0;
    double p = 0.0;
    double success = 0.0;
    /// success - 2^{-n}; signed.
    double excess = 0.0;
    /// Bond dimension of the reported value; 0 for exact engines.
    std::size_t chi_used = 0;
    /// Empty for synthetic points.
    std::optional<SweepEngine> engine;
    int targets_averaged = 1;
    bool converged = true;
    /// |P(chi) - P(chi / 2)| at the reported chi; 0 for exact engines, NaN
    /// when no two bond dimensions both produced a value.
    double convergence_delta = 0.0;
};

/// C(n, k) / 2^n for k = 0..n. Exact in binary floating point for n <= 52.
std::vector<double> binomial_weights(int n);
/// k ones followed by n - k zeros.
Bitstring representative_target(int n, int ones);

/// P_f after optimal_iterations(n) for one target, with the sweep's engine
/// and bond settings. Returns the point with n, p, success and metadata.
ScalingPoint final_success(const SweepSpec& spec, int n, double p, const Bitstring& omega);

/// Every (n, p) of the grid, in n-major order regardless of `workers`.
std::vector<ScalingPoint> run_sweep(const SweepSpec& spec, int workers = 0);
/// run_sweep restricted to phase flip (ValidationError otherwise).
std::vector<ScalingPoint> run_phase_flip_sweep(const SweepSpec& spec, int workers = 0);
/// run_sweep restricted to amplitude damping with binomial averaging.
std::vector<ScalingPoint> run_amplitude_damping_sweep(const SweepSpec& spec, int workers = 0);

enum class ScalingLaw { PhaseFlip, AmplitudeDamping };
std::string to_string(ScalingLaw law);

struct FitWindow {
    /// Excess bounds, inclusive.
    double floor = 1e-9;
    double ceiling = 1e-2;
    /// Optional rate and size bounds, inclusive; open by default.
    double p_min = 0.0;
    double p_max = 1.0;
    int n_min = 0;
    /// Adds a free constant to the log-linear model.
    bool intercept = false;

    std::string describe() const;
};

/// Points inside the window. Unconverged points never pass.
std::vector<ScalingPoint> select_fit_window(const std::vector<ScalingPoint>& points, const FitWindow& window);

inline constexpr std::size_t kMinFitPoints = 8;

struct FitResult {
    ScalingLaw law = ScalingLaw::PhaseFlip;
    /// alpha (phase flip) or gamma (amplitude damping): exponent of 1/p.
    double rate_exponent = 0.0;
    /// beta or delta: coefficient of -n.
    double size_exponent = 0.0;
    double rate_stderr = 0.0;
    double size_stderr = 0.0;
    /// Zero unless the window asks for one.
    double intercept = 0.0;
    double intercept_stderr = 0.0;
    /// Euclidean norm of the log residuals.
    double residual_norm = 0.0;
    FitWindow window;
    std::size_t point_count = 0;
    /// Unconverged points that the window would otherwise have kept.
    std::size_t flagged_excluded = 0;
};

/// Least squares on ln(excess) = -b n - a ln p (+ c). Standard errors from
/// the normal equations. FitError when fewer than kMinFitPoints remain, when
/// a retained excess is not positive, or when the design is rank deficient.
FitResult fit_scaling(const std::vector<ScalingPoint>& points, ScalingLaw law, const FitWindow& window);

struct WindowFit {
    FitWindow window;
    std::optional<FitResult> fit;
    /// FitError text when the window could not be fitted.
    std::string error;
};

std::vector<WindowFit> window_sensitivity(const std::vector<ScalingPoint>& points, ScalingLaw law,
                                          const std::vector<FitWindow>& windows);

/// P_f = 2^{-n} + e^{-b n} p^{-a} (1 + jitter z) with z standard normal from
/// `seed`.
std::vector<ScalingPoint> generate_synthetic(double rate_exponent, double size_exponent, const std::vector<int>& n_list,
                                             const std::vector<double>& p_grid, double jitter, std::uint64_t seed);

}  // namespace grover::experiments
