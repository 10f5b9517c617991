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

#include "grover/experiments.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <random>
#include <sstream>

#include <Eigen/Dense>

#include "grover/analytic.hpp"
#include "grover/dense.hpp"
#include "grover/mpdo.hpp"
#include "grover/parallel.hpp"
#include "grover/rng.hpp"
#include "grover/symmetric.hpp"

namespace grover::experiments {

namespace {

double random_floor(int n) { return std::ldexp(1.0, -n); }

double mpdo_success(int n, const Bitstring& omega, const NoiseModel& noise, long m, std::size_t chi) {
    TruncationPolicy policy;
    policy.chi_max = chi;
    return run_grover_mpdo(n, omega, noise, m, policy).records.back().success_probability;
}

/// Success at chi, or nothing when the trace guard trips.
std::optional<double> try_mpdo(int n, const Bitstring& omega, const NoiseModel& noise, long m, std::size_t chi) {
    try {
        return mpdo_success(n, omega, noise, m, chi);
    } catch (const StateError&) {
        return std::nullopt;
    }
}

std::string format_point(const ScalingPoint& pt) {
    std::ostringstream os;
    os << "(n=" << pt.n << ", p=" << std::setprecision(6) << pt.p << ", excess=" << pt.excess << ")";
    return os.str();
}

}  // namespace

std::string to_string(SweepEngine engine) {
    switch (engine) {
        case SweepEngine::Mpdo:
            return "mpdo";
        case SweepEngine::Dense:
            return "dense";
        case SweepEngine::Symmetric:
            return "symmetric";
    }
    return "unknown";
}

SweepEngine parse_engine(std::string_view name) {
    if (name == "mpdo") return SweepEngine::Mpdo;
    if (name == "dense") return SweepEngine::Dense;
    if (name == "symmetric") return SweepEngine::Symmetric;
    throw ValidationError("unknown engine '" + std::string(name) + "' (expected mpdo, dense or symmetric)");
}

std::string to_string(TargetPolicy policy) {
    return policy == TargetPolicy::FixedAllOnes ? "all_ones" : "binomial";
}

std::string to_string(ScalingLaw law) { return law == ScalingLaw::PhaseFlip ? "phase_flip" : "amplitude_damping"; }

std::vector<double> log_grid(double lo, double hi, int count) {
    if (!(lo > 0.0 && hi >= lo) || count < 1) throw ValidationError("log grid needs 0 < lo <= hi and count >= 1");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        const double t = count == 1 ? 0.0 : static_cast<double>(i) / (count - 1);
        out[static_cast<std::size_t>(i)] = lo * std::pow(hi / lo, t);
    }
    out.back() = hi;
    return out;
}

std::vector<double> default_p_grid() { return log_grid(5e-3, 5e-1, 20); }

SweepSpec SweepSpec::phase_flip() { return {}; }

SweepSpec SweepSpec::amplitude_damping() {
    SweepSpec s;
    s.channel = ChannelKind::AmplitudeDamping;
    s.engine = SweepEngine::Symmetric;
    s.targets = TargetPolicy::BinomialAverage;
    return s;
}

void SweepSpec::validate() const {
    if (channel != ChannelKind::PhaseFlip && channel != ChannelKind::AmplitudeDamping) {
        throw ValidationError("sweeps need a phase-flip or amplitude-damping channel");
    }
    if (n_list.empty() || p_grid.empty()) throw ValidationError("sweep needs at least one size and one rate");
    for (int n : n_list) {
        if (n < 2 || n % 2 != 0) throw ValidationError("sweep sizes must be even and at least 2");
        if (engine == SweepEngine::Dense && n > dense::kMaxDensityQubits) {
            throw ResourceError("dense sweep supports n <= " + std::to_string(dense::kMaxDensityQubits));
        }
        if (engine == SweepEngine::Symmetric && n > symmetric::kMaxQubits) {
            throw ResourceError("symmetric sweep supports n <= " + std::to_string(symmetric::kMaxQubits));
        }
    }
    for (double p : p_grid) {
        if (!(p > 0.0 && p < 1.0)) throw ValidationError("sweep rates must lie in (0, 1)");
    }
    if (chi_max < 2) throw ValidationError("chi_max must be at least 2");
    if (adaptive_chi && chi_cap < chi_max) throw ValidationError("chi_cap must not be below chi_max");
    if (!(convergence_tolerance > 0.0)) throw ValidationError("convergence tolerance must be positive");
}

std::vector<double> binomial_weights(int n) {
    if (n < 0 || n > 52) throw DomainError("binomial weights need 0 <= n <= 52");
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    double c = 1.0;
    for (int k = 0; k <= n; ++k) {
        out[static_cast<std::size_t>(k)] = std::ldexp(c, -n);
        c = c * (n - k) / (k + 1);
    }
    return out;
}

Bitstring representative_target(int n, int ones) {
    if (ones < 0 || ones > n) throw DomainError("target weight out of range");
    std::string bits(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < ones; ++q) bits[static_cast<std::size_t>(q)] = '1';
    return Bitstring::parse(bits);
}

ScalingPoint final_success(const SweepSpec& spec, int n, double p, const Bitstring& omega) {
    const NoiseModel noise = make_channel(spec.channel, p);
    const long m = analytic::optimal_iterations(n);
    ScalingPoint pt;
    pt.n = n;
    pt.p = p;
    pt.engine = spec.engine;
    switch (spec.engine) {
        case SweepEngine::Dense:
            pt.success = dense::run_grover(n, omega, noise, m).records.back().success_probability;
            break;
        case SweepEngine::Symmetric:
            pt.success = symmetric::run_grover(n, omega, noise, m).records.back().success_probability;
            break;
        case SweepEngine::Mpdo: {
            std::size_t chi = spec.chi_max;
            pt.convergence_delta = std::numeric_limits<double>::quiet_NaN();
            std::optional<double> current = try_mpdo(n, omega, noise, m, chi);
            pt.converged = current.has_value();
            if (spec.adaptive_chi) {
                pt.converged = false;
                while (chi * 2 <= spec.chi_cap) {
                    const std::optional<double> next = try_mpdo(n, omega, noise, m, chi * 2);
                    chi *= 2;
                    if (current && next) {
                        pt.convergence_delta = std::abs(*next - *current);
                        if (pt.convergence_delta <= spec.convergence_tolerance) {
                            current = next;
                            pt.converged = true;
                            break;
                        }
                    }
                    current = next;
                }
            }
            pt.chi_used = chi;
            if (!current) {
                // the last bond dimension tried tripped the trace guard
                pt.converged = false;
                pt.success = std::numeric_limits<double>::quiet_NaN();
            } else {
                pt.success = *current;
            }
            break;
        }
    }
    pt.excess = pt.success - random_floor(n);
    return pt;
}

std::vector<ScalingPoint> run_sweep(const SweepSpec& spec, int workers) {
    spec.validate();
    struct Job {
        std::size_t point;
        int ones;
    };
    const std::size_t np = spec.p_grid.size();
    std::vector<ScalingPoint> out(spec.n_list.size() * np);
    std::vector<Job> jobs;
    for (std::size_t i = 0; i < spec.n_list.size(); ++i) {
        const int n = spec.n_list[i];
        for (std::size_t j = 0; j < np; ++j) {
            if (spec.targets == TargetPolicy::FixedAllOnes) {
                jobs.push_back({i * np + j, n});
            } else {
                for (int k = 0; k <= n; ++k) jobs.push_back({i * np + j, k});
            }
        }
    }
    std::vector<ScalingPoint> parts(jobs.size());
    parallel_for(jobs.size(), workers, [&](std::size_t t) {
        const Job& job = jobs[t];
        const int n = spec.n_list[job.point / np];
        parts[t] = final_success(spec, n, spec.p_grid[job.point % np], representative_target(n, job.ones));
    });

    // reduce in job order so the sums do not depend on scheduling
    std::vector<bool> started(out.size(), false);
    for (std::size_t t = 0; t < jobs.size(); ++t) {
        ScalingPoint& dst = out[jobs[t].point];
        const ScalingPoint& part = parts[t];
        const double w = spec.targets == TargetPolicy::FixedAllOnes
                             ? 1.0
                             : binomial_weights(part.n)[static_cast<std::size_t>(jobs[t].ones)];
        if (!started[jobs[t].point]) {
            dst = part;
            dst.success = w * part.success;
            dst.targets_averaged = 1;
            started[jobs[t].point] = true;
            continue;
        }
        dst.success += w * part.success;
        dst.targets_averaged += 1;
        dst.chi_used = std::max(dst.chi_used, part.chi_used);
        dst.converged = dst.converged && part.converged;
        dst.convergence_delta = std::max(dst.convergence_delta, part.convergence_delta);
    }
    for (auto& pt : out) pt.excess = pt.success - random_floor(pt.n);
    return out;
}

std::vector<ScalingPoint> run_phase_flip_sweep(const SweepSpec& spec, int workers) {
    if (spec.channel != ChannelKind::PhaseFlip) throw ValidationError("phase-flip sweep needs the phase-flip channel");
    return run_sweep(spec, workers);
}

std::vector<ScalingPoint> run_amplitude_damping_sweep(const SweepSpec& spec, int workers) {
    if (spec.channel != ChannelKind::AmplitudeDamping) {
        throw ValidationError("amplitude-damping sweep needs the amplitude-damping channel");
    }
    if (spec.targets != TargetPolicy::BinomialAverage) {
        throw ValidationError("amplitude-damping sweep averages over targets binomially");
    }
    return run_sweep(spec, workers);
}

std::string FitWindow::describe() const {
    std::ostringstream os;
    os << std::setprecision(6) << "excess in [" << floor << ", " << ceiling << "]";
    if (p_min > 0.0 || p_max < 1.0) os << ", p in [" << p_min << ", " << p_max << "]";
    if (n_min > 0) os << ", n >= " << n_min;
    if (intercept) os << ", with intercept";
    return os.str();
}

namespace {

bool in_window(const ScalingPoint& pt, const FitWindow& w) {
    return pt.excess >= w.floor && pt.excess <= w.ceiling && pt.p >= w.p_min && pt.p <= w.p_max && pt.n >= w.n_min;
}

}  // namespace

std::vector<ScalingPoint> select_fit_window(const std::vector<ScalingPoint>& points, const FitWindow& window) {
    std::vector<ScalingPoint> out;
    for (const auto& pt : points) {
        if (pt.converged && in_window(pt, window)) out.push_back(pt);
    }
    return out;
}

FitResult fit_scaling(const std::vector<ScalingPoint>& points, ScalingLaw law, const FitWindow& window) {
    const std::vector<ScalingPoint> kept = select_fit_window(points, window);
    FitResult out;
    out.law = law;
    out.window = window;
    out.point_count = kept.size();
    for (const auto& pt : points) {
        if (!pt.converged && in_window(pt, window)) ++out.flagged_excluded;
    }
    if (kept.size() < kMinFitPoints) {
        throw FitError("fit window " + window.describe() + " keeps " + std::to_string(kept.size()) +
                       " points; at least " + std::to_string(kMinFitPoints) + " are needed");
    }
    std::string offending;
    for (const auto& pt : kept) {
        if (!(pt.excess > 0.0)) offending += " " + format_point(pt);
    }
    if (!offending.empty()) throw FitError("non-positive excess inside the fit window:" + offending);

    const Eigen::Index rows = static_cast<Eigen::Index>(kept.size());
    const Eigen::Index cols = window.intercept ? 3 : 2;
    Eigen::MatrixXd x(rows, cols);
    Eigen::VectorXd y(rows);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const auto& pt = kept[static_cast<std::size_t>(i)];
        x(i, 0) = -std::log(pt.p);
        x(i, 1) = -static_cast<double>(pt.n);
        if (window.intercept) x(i, 2) = 1.0;
        y(i) = std::log(pt.excess);
    }
    const Eigen::MatrixXd normal = x.transpose() * x;
    const Eigen::LDLT<Eigen::MatrixXd> ldlt(normal);
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(x);
    if (qr.rank() < cols || ldlt.info() != Eigen::Success) {
        throw FitError("fit design is rank deficient in window " + window.describe() +
                       " (the retained points need at least two sizes and two rates)");
    }
    const Eigen::VectorXd coef = qr.solve(y);
    const Eigen::VectorXd residual = y - x * coef;
    const Eigen::MatrixXd cov = ldlt.solve(Eigen::MatrixXd::Identity(cols, cols));
    const double dof = static_cast<double>(rows - cols);
    const double sigma2 = residual.squaredNorm() / dof;

    out.rate_exponent = coef(0);
    out.size_exponent = coef(1);
    out.rate_stderr = std::sqrt(sigma2 * cov(0, 0));
    out.size_stderr = std::sqrt(sigma2 * cov(1, 1));
    if (window.intercept) {
        out.intercept = coef(2);
        out.intercept_stderr = std::sqrt(sigma2 * cov(2, 2));
    }
    out.residual_norm = residual.norm();
    if (!std::isfinite(out.rate_exponent) || !std::isfinite(out.size_exponent)) {
        throw FitError("fit produced non-finite exponents in window " + window.describe());
    }
    return out;
}

std::vector<WindowFit> window_sensitivity(const std::vector<ScalingPoint>& points, ScalingLaw law,
                                          const std::vector<FitWindow>& windows) {
    std::vector<WindowFit> out;
    for (const auto& w : windows) {
        WindowFit wf;
        wf.window = w;
        try {
            wf.fit = fit_scaling(points, law, w);
        } catch (const FitError& e) {
            wf.error = e.what();
        }
        out.push_back(std::move(wf));
    }
    return out;
}

std::vector<ScalingPoint> generate_synthetic(double rate_exponent, double size_exponent, const std::vector<int>& n_list,
                                             const std::vector<double>& p_grid, double jitter, std::uint64_t seed) {
    if (!(jitter >= 0.0)) throw ValidationError("jitter must be non-negative");
    Rng rng(splitmix64(seed));
    std::normal_distribution<double> normal;
    std::vector<ScalingPoint> out;
    for (int n : n_list) {
        for (double p : p_grid) {
            ScalingPoint pt;
            pt.n = n;
            pt.p = p;
            const double z = jitter > 0.0 ? normal(rng) : 0.0;
            pt.excess = std::exp(-size_exponent * n) * std::pow(p, -rate_exponent) * (1.0 + jitter * z);
            pt.success = random_floor(n) + pt.excess;
            out.push_back(pt);
        }
    }
    return out;
}

}  // namespace grover::experiments
