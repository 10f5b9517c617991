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

// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
//
//   acceptance            all criteria
//   acceptance 1 3 8      a subset
//
// Exit status is 0 when every failing criterion is listed in kKnownRed.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "../test_util.hpp"
#include "grover/analytic.hpp"
#include "grover/channels.hpp"
#include "grover/cli.hpp"
#include "grover/dense.hpp"
#include "grover/experiments.hpp"
#include "grover/mpdo.hpp"
#include "grover/trajectories.hpp"
#include "json.hpp"

using namespace grover;
namespace ex = grover::experiments;
namespace fs = std::filesystem;

namespace {

// criterion 1
constexpr double kIdealTolerance = 1e-10;
constexpr double kIdealSeconds = 120.0;
// criterion 2
constexpr double kThirdEigenvalue = 1e-12;
constexpr double kClosedForm = 1e-10;
constexpr double kLargeLambda = 1e-3;
constexpr double kLargeEntropy = 1e-2;
// criterion 3
constexpr double kCompleteness = 1e-12;
constexpr double kMixingInvariance = 1e-12;
constexpr double kJumpProbability = 1e-14;
// criterion 4
constexpr double kDepolarizing = 1e-12;
// criterion 5
constexpr double kEngineAgreement = 1e-6;
constexpr double kEnsembleSigmas = 3.0;
constexpr std::size_t kConvergedMpdoBond = 64;
constexpr double kCrosscheckSeconds = 600.0;
// criterion 6
constexpr int kFigureTrajectories = 2000;
constexpr double kStrategySigmas = 2.0;
constexpr double kFigureSeconds = 1800.0;
// criterion 7
constexpr double kAlphaLo = 1.5, kAlphaHi = 2.0, kBetaLo = 0.70, kBetaHi = 0.90;
constexpr double kGammaLo = 1.8, kGammaHi = 2.3, kDeltaLo = 1.3, kDeltaHi = 1.7;
constexpr double kPhaseFlipFitPmax = 0.05;
constexpr double kScalingSeconds = 7200.0;
// criterion 8
constexpr double kSyntheticRecovery = 1e-9;
constexpr double kJitter = 0.05;
constexpr int kJitterSeeds = 200;
constexpr double kJitterSigmas = 3.0;
constexpr double kJitterCoverage = 0.95;

constexpr std::uint64_t kSeed = 20260101;

// Criteria that fail for reasons documented with the project; their failure
// does not fail the run.
const std::set<int> kKnownRed = {4, 7};

struct Outcome {
    bool pass = true;
    std::string summary;
    std::vector<std::string> detail;

    void check(bool ok, const std::string& line) {
        pass = pass && ok;
        detail.push_back(std::string(ok ? "ok   " : "FAIL ") + line);
    }
    void note(const std::string& line) { detail.push_back("     " + line); }
};

std::string fmt(double x, int digits = 4) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome noiseless_fidelity() {
    Outcome o;
    for (int n : {10, 24}) {
        const auto t0 = std::chrono::steady_clock::now();
        TruncationPolicy policy;
        policy.chi_max = 2;
        const long m = analytic::optimal_iterations(n);
        const RunTrace trace = run_grover_mps(n, Bitstring::all_ones(n), m, n / 2, policy);
        double worst = 0.0;
        double max_s = 0.0;
        long peak = 0;
        for (const auto& r : trace.records) {
            const double exact = std::pow(std::sin(analytic::grover_angle(n, r.k)), 2);
            worst = std::max(worst, std::abs(r.success_probability - exact));
            max_s = std::max(max_s, r.entropy);
            if (r.success_probability > trace.records[static_cast<std::size_t>(peak)].success_probability) peak = r.k;
        }
        const double secs = seconds_since(t0);
        const long expected_peak = static_cast<long>(std::floor(kPi / 4.0 * std::exp2(n / 2.0)));
        o.check(worst <= kIdealTolerance, "n=" + std::to_string(n) + " max|P - sin^2| = " + fmt(worst));
        o.check(max_s <= 1.0, "n=" + std::to_string(n) + " max S_vN = " + fmt(max_s, 8) + " bits");
        o.check(peak == expected_peak && m == expected_peak,
                "n=" + std::to_string(n) + " peak k = " + std::to_string(peak) + " (expected " +
                    std::to_string(expected_peak) + ")");
        o.check(secs <= kIdealSeconds, "n=" + std::to_string(n) + " runtime " + fmt(secs, 3) + " s");
    }
    o.summary = "MPS chi=2 tracks sin^2(theta_k); entropy at most one bit; peak at floor(pi/4 2^(n/2))";
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    for (int n : {4, 6, 8}) {
        const Bitstring omega = Bitstring::all_ones(n);
        auto psi = dense::init_uniform(n);
        double third = 0.0;
        double lambda_err = 0.0;
        double entropy_err = 0.0;
        for (long k = 0; k <= analytic::optimal_iterations(n); ++k) {
            if (k > 0) {
                dense::apply_oracle(psi, omega);
                dense::apply_diffusion(psi);
            }
            const MatrixXc rdm = dense::reduced_density_matrix(psi, n / 2);
            const auto ev = dense::spectrum(rdm);
            const double theta = analytic::grover_angle(n, k);
            const auto closed = analytic::reduced_eigenvalues(n, theta);
            third = std::max(third, std::abs(ev[2]));
            lambda_err = std::max({lambda_err, std::abs(ev[0] - closed.lambda_plus),
                                   std::abs(ev[1] - closed.lambda_minus)});
            entropy_err = std::max(entropy_err,
                                   std::abs(dense::entropy_bits(rdm) - analytic::two_level_entropy(n, theta)));
        }
        const std::string tag = "n=" + std::to_string(n);
        o.check(third <= kThirdEigenvalue, tag + " max third eigenvalue " + fmt(third));
        o.check(lambda_err <= kClosedForm, tag + " max|lambda - closed form| " + fmt(lambda_err));
        o.check(entropy_err <= kClosedForm, tag + " max|S - closed form| " + fmt(entropy_err));
    }
    // n = 40: the iterate nearest theta = pi/4, where the two-level state is
    // maximally entangled
    const int n = 40;
    const double step = std::asin(std::exp2(-n / 2.0));
    const long k = std::lround((kPi / 4.0 / step - 1.0) / 2.0);
    const double theta = analytic::grover_angle(n, k);
    const auto s = analytic::reduced_eigenvalues(n, theta);
    const double entropy = analytic::two_level_entropy(n, theta);
    o.check(std::abs(s.lambda_plus - 0.5) <= kLargeLambda && std::abs(s.lambda_minus - 0.5) <= kLargeLambda,
            "n=40 k=" + std::to_string(k) + " lambda+ = " + fmt(s.lambda_plus, 8) +
                ", lambda- = " + fmt(s.lambda_minus, 8));
    o.check(std::abs(entropy - 1.0) <= kLargeEntropy, "n=40 entropy " + fmt(entropy, 8) + " bits");
    o.summary = "Schmidt rank two and closed-form spectrum of the equal-cut reduced state";
    return o;
}

Outcome channel_algebra() {
    Outcome o;
    const std::vector<double> rates = {0.0, 0.01, 0.05, 0.1, 0.2, 0.3, 0.5, 0.7, 0.9, 1.0};
    double completeness = 0.0;
    double jump = 0.0;
    for (double p : rates) {
        completeness = std::max({completeness, verify_completeness(make_phase_flip(p)),
                                 verify_completeness(make_amplitude_damping(p))});
        const auto ad = make_amplitude_damping(p);
        const Vec2 one(0.0, 1.0);
        const double p_jump = (ad.op(0) * one).squaredNorm();
        jump = std::max(jump, std::abs(p_jump - p));
    }
    o.check(completeness <= kCompleteness, "completeness residual " + fmt(completeness) + " over 10 rates");
    o.check(jump <= kJumpProbability, "amplitude-damping jump probability on |1>: max|P - p| = " + fmt(jump));

    std::mt19937_64 rng(kSeed);
    const int n = 3;
    const MatrixXc rho = grover::testing::random_density(rng, 8);
    double invariance = 0.0;
    for (const auto& ch : {make_phase_flip(0.13), make_amplitude_damping(0.37)}) {
        for (int trial = 0; trial < 20; ++trial) {
            const KrausChannel mixed = mix_channel(ch, grover::testing::random_unitary(rng, 2));
            for (int q = 0; q < n; ++q) {
                dense::DenseDensityMatrix a{n, rho};
                dense::DenseDensityMatrix b{n, rho};
                dense::apply_channel(a, q, ch);
                dense::apply_channel(b, q, mixed);
                invariance = std::max(invariance, (a.entries - b.entries).cwiseAbs().maxCoeff());
            }
        }
    }
    o.check(invariance <= kMixingInvariance, "dense map under 20 unitary mixings per channel: " + fmt(invariance));
    o.summary = "completeness, mixing invariance and the damping jump rate";
    return o;
}

Outcome depolarizing_baseline() {
    Outcome o;
    for (int n : {4, 6}) {
        for (double p : {0.01, 0.05}) {
            const long m = analytic::optimal_iterations(n);
            const double pf =
                dense::run_grover(n, Bitstring::all_ones(n), GlobalDepolarizing(p), m).records.back().success_probability;
            const double ideal = analytic::ideal_success_probability(n, m);
            const double floor = std::exp2(-n);
            const double closed = std::pow(1.0 - p, static_cast<double>(m)) * (ideal - floor) + floor;
            const double gap = std::abs(pf - std::exp(-p * static_cast<double>(m)) * ideal);
            const double bound = p * p * static_cast<double>(m) * 2.0;
            const std::string tag = "n=" + std::to_string(n) + " p=" + fmt(p);
            o.check(std::abs(pf - closed) <= kDepolarizing, tag + " |P_f - closed form| = " + fmt(std::abs(pf - closed)));
            o.check(gap <= bound, tag + " |P_f - e^(-pM) P_ideal| = " + fmt(gap) + " vs 2 p^2 M = " + fmt(bound));
        }
    }
    o.summary = "global depolarizing against (1-p)^M and the exponential form";
    return o;
}

Outcome engine_crosscheck(int workers) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 8;
    const long m = analytic::optimal_iterations(n);
    const Bitstring omega = Bitstring::all_ones(n);
    TruncationPolicy policy;
    policy.chi_max = kConvergedMpdoBond;
    for (auto kind : {ChannelKind::PhaseFlip, ChannelKind::AmplitudeDamping}) {
        for (double p : {0.01, 0.04}) {
            const KrausChannel ch = make_channel(kind, p);
            const RunTrace exact = dense::run_grover(n, omega, ch, m);
            const RunTrace mpdo = run_grover_mpdo(n, omega, ch, m, policy);
            double dp = 0.0;
            double doe = 0.0;
            for (std::size_t k = 0; k < exact.records.size(); ++k) {
                dp = std::max(dp, std::abs(exact.records[k].success_probability - mpdo.records[k].success_probability));
                doe = std::max(doe, std::abs(exact.records[k].entropy - mpdo.records[k].entropy));
            }
            auto c = TrajectoryConfig::for_register(n);
            c.channel = kind;
            c.p = p;
            c.n_traj = kFigureTrajectories;
            c.seed = kSeed;
            const EnsembleResult ens = run_ensemble(c, workers);
            const double z = std::abs(ens.mean_success - exact.records.back().success_probability) / ens.standard_error;
            const std::string tag = to_string(kind) + " p=" + fmt(p);
            o.check(dp <= kEngineAgreement && doe <= kEngineAgreement,
                    tag + " MPDO chi=" + std::to_string(kConvergedMpdoBond) + " vs dense: max|dP| = " + fmt(dp) +
                        ", max|dOE| = " + fmt(doe));
            o.check(z <= kEnsembleSigmas, tag + " trajectories: " + fmt(ens.mean_success, 6) + " +- " +
                                              fmt(ens.standard_error, 3) + " vs dense " +
                                              fmt(exact.records.back().success_probability, 6) + " (" + fmt(z, 3) +
                                              " SE)");
        }
    }
    const double secs = seconds_since(t0);
    o.check(secs <= kCrosscheckSeconds, "runtime " + fmt(secs, 4) + " s");
    o.summary = "MPDO and trajectory ensembles against the dense density matrix at n=8";
    return o;
}

Outcome figure_two(int workers) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    const int n = 10;
    const long m = analytic::optimal_iterations(n);
    const Bitstring omega = Bitstring::all_ones(n);
    for (auto kind : {ChannelKind::PhaseFlip, ChannelKind::AmplitudeDamping}) {
        for (double p : {0.02, 0.04}) {
            const std::string tag = to_string(kind) + " p=" + fmt(p);
            RunOptions raw;
            raw.oe_weights = OperatorSchmidtWeights::Raw;
            RunOptions normalized;
            normalized.oe_weights = OperatorSchmidtWeights::Normalized;
            const KrausChannel ch = make_channel(kind, p);
            const double oe_raw = dense::run_grover(n, omega, ch, m, raw).records.back().entropy;
            const double oe_norm = dense::run_grover(n, omega, ch, m, normalized).records.back().entropy;

            auto c = TrajectoryConfig::for_register(n);
            c.channel = kind;
            c.p = p;
            c.n_traj = kFigureTrajectories;
            c.seed = kSeed;
            c.strategy.kind = StrategyKind::Naive;
            const EnsembleResult naive = run_ensemble(c, workers);
            c.strategy.kind = StrategyKind::MaxNonUnitarity;
            const EnsembleResult numu = run_ensemble(c, workers);

            const double te_naive = naive.mean_entropy.back();
            const double te_numu = numu.mean_entropy.back();
            const double se_naive = naive.entropy_stderr.back();
            const double se_numu = numu.entropy_stderr.back();
            o.check(std::max(naive.max_entropy, numu.max_entropy) > 1.0,
                    tag + " (a) largest trajectory entropy: naive " + fmt(naive.max_entropy) + ", numu " +
                        fmt(numu.max_entropy) + " bits");
            o.check(oe_raw < te_naive && oe_raw < te_numu,
                    tag + " (b) OE(M) = " + fmt(oe_raw) + " < S_T(M): naive " + fmt(te_naive) + ", numu " +
                        fmt(te_numu));
            o.note(tag + "     Frobenius-normalized OE(M) = " + fmt(oe_norm));
            const double sigma = std::hypot(se_naive, se_numu);
            o.check(te_numu <= te_naive + kStrategySigmas * sigma,
                    tag + " (c) numu S_T(M) = " + fmt(te_numu) + " +- " + fmt(se_numu, 2) + " vs naive " +
                        fmt(te_naive) + " +- " + fmt(se_naive, 2));
        }
    }
    const double secs = seconds_since(t0);
    o.check(secs <= kFigureSeconds, "runtime " + fmt(secs, 4) + " s");
    o.summary = "trajectory entanglement overshoot, OE below S_T, adaptive unraveling no worse";
    return o;
}

std::string fit_line(const ex::FitResult& f) {
    return "rate " + fmt(f.rate_exponent) + " +- " + fmt(f.rate_stderr, 2) + ", size " + fmt(f.size_exponent) +
           " +- " + fmt(f.size_stderr, 2) + " (" + std::to_string(f.point_count) + " points, " +
           f.window.describe() + ")";
}

void report_sensitivity(Outcome& o, const std::vector<ex::ScalingPoint>& points, ex::ScalingLaw law,
                        const std::vector<ex::FitWindow>& windows) {
    for (const auto& w : ex::window_sensitivity(points, law, windows)) {
        o.note("  window " + w.window.describe() + ": " + (w.fit ? fit_line(*w.fit) : "no fit (" + w.error + ")"));
    }
}

Outcome scaling_exponents(int workers) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();

    const auto pf = ex::run_phase_flip_sweep(ex::SweepSpec::phase_flip(), workers);
    std::size_t flagged = 0;
    for (const auto& pt : pf) flagged += pt.converged ? 0 : 1;
    o.note("phase flip: " + std::to_string(pf.size()) + " MPDO points, " + std::to_string(flagged) + " unconverged");
    ex::FitWindow pf_window;
    pf_window.p_max = kPhaseFlipFitPmax;
    try {
        const auto fit = ex::fit_scaling(pf, ex::ScalingLaw::PhaseFlip, pf_window);
        o.check(fit.rate_exponent >= kAlphaLo && fit.rate_exponent <= kAlphaHi && fit.size_exponent >= kBetaLo &&
                    fit.size_exponent <= kBetaHi,
                "phase flip alpha, beta: " + fit_line(fit));
    } catch (const FitError& e) {
        o.check(false, std::string("phase flip fit: ") + e.what());
    }
    std::vector<ex::FitWindow> pf_windows;
    for (double pmax : {0.02, 0.05, 0.1, 1.0}) {
        for (double ceiling : {1e-3, 1e-2}) {
            ex::FitWindow w;
            w.p_max = pmax;
            w.ceiling = ceiling;
            pf_windows.push_back(w);
        }
    }
    ex::FitWindow with_c = pf_window;
    with_c.intercept = true;
    pf_windows.push_back(with_c);
    report_sensitivity(o, pf, ex::ScalingLaw::PhaseFlip, pf_windows);

    const auto ad = ex::run_amplitude_damping_sweep(ex::SweepSpec::amplitude_damping(), workers);
    std::size_t negative = 0;
    for (const auto& pt : ad) negative += pt.excess < 0.0 ? 1 : 0;
    o.note("amplitude damping: " + std::to_string(ad.size()) + " exact points, " + std::to_string(negative) +
           " with negative excess");
    try {
        const auto fit = ex::fit_scaling(ad, ex::ScalingLaw::AmplitudeDamping, ex::FitWindow{});
        o.check(fit.rate_exponent >= kGammaLo && fit.rate_exponent <= kGammaHi && fit.size_exponent >= kDeltaLo &&
                    fit.size_exponent <= kDeltaHi,
                "amplitude damping gamma, delta: " + fit_line(fit));
    } catch (const FitError& e) {
        o.check(false, std::string("amplitude damping fit: ") + e.what());
    }
    auto magnitude = ad;
    for (auto& pt : magnitude) pt.excess = std::abs(pt.excess);
    std::vector<ex::FitWindow> ad_windows;
    for (double pmin : {0.0, 0.05}) {
        for (int nmin : {8, 14}) {
            ex::FitWindow w;
            w.p_min = pmin;
            w.p_max = 0.2;
            w.n_min = nmin;
            ad_windows.push_back(w);
        }
    }
    o.note("amplitude damping |excess| diagnostic:");
    report_sensitivity(o, magnitude, ex::ScalingLaw::AmplitudeDamping, ad_windows);
    o.note("amplitude damping signed excess:");
    report_sensitivity(o, ad, ex::ScalingLaw::AmplitudeDamping, ad_windows);

    const double secs = seconds_since(t0);
    o.check(secs <= kScalingSeconds, "runtime " + fmt(secs, 5) + " s");
    o.summary = "scaling exponents of the final success probability";
    return o;
}

Outcome fitter_self_test() {
    Outcome o;
    const std::vector<int> sizes = {8, 10, 12, 14, 16};
    ex::FitWindow open;
    open.floor = 0.0;
    open.ceiling = std::numeric_limits<double>::infinity();
    struct Law {
        ex::ScalingLaw law;
        double a;
        double b;
    };
    for (const Law& l : {Law{ex::ScalingLaw::PhaseFlip, 1.735, 0.7844}, Law{ex::ScalingLaw::AmplitudeDamping, 2.050, 1.522}}) {
        const auto exact = ex::fit_scaling(ex::generate_synthetic(l.a, l.b, sizes, ex::default_p_grid(), 0.0, kSeed),
                                           l.law, open);
        const double err = std::max(std::abs(exact.rate_exponent - l.a), std::abs(exact.size_exponent - l.b));
        o.check(err <= kSyntheticRecovery, ex::to_string(l.law) + " noiseless recovery error " + fmt(err));
        int inside = 0;
        for (int seed = 0; seed < kJitterSeeds; ++seed) {
            const auto pts = ex::generate_synthetic(l.a, l.b, sizes, ex::default_p_grid(), kJitter,
                                                    kSeed + static_cast<std::uint64_t>(seed));
            const auto f = ex::fit_scaling(pts, l.law, open);
            if (std::abs(f.rate_exponent - l.a) <= kJitterSigmas * f.rate_stderr &&
                std::abs(f.size_exponent - l.b) <= kJitterSigmas * f.size_stderr) {
                ++inside;
            }
        }
        const double coverage = static_cast<double>(inside) / kJitterSeeds;
        o.check(coverage >= kJitterCoverage,
                ex::to_string(l.law) + " 5% jitter: " + std::to_string(inside) + "/" + std::to_string(kJitterSeeds) +
                    " seeds within 3 SE");
    }
    o.summary = "fitter recovers synthetic exponents";
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

int invoke(std::vector<std::string> args, std::string* err_text) {
    args.insert(args.begin(), "grover_sim");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    *err_text = err.str();
    return code;
}

Outcome determinism() {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "grover_acceptance_determinism";
    fs::remove_all(root);
    const fs::path fixture = root / "fixture.csv";
    fs::create_directories(root);
    cli::write_sweep(fixture, "none",
                     ex::generate_synthetic(1.735, 0.7844, {8, 10, 12}, ex::log_grid(0.01, 0.1, 5), kJitter, kSeed));

    const std::vector<std::vector<std::string>> commands = {
        {"ideal", "--n", "12"},
        {"trajectories", "--n", "6", "--channel", "ad", "--p", "0.02,0.04", "--traj", "24", "--strategy",
         "naive,numu,greedy", "--records"},
        {"mpdo", "--n", "8", "--channel", "pf", "--p", "0.03", "--oe", "raw"},
        {"sweep", "--channel", "ad", "--n-list", "4,6", "--grid-count", "4", "--engine", "mpdo", "--targets",
         "binomial"},
        {"fit", fixture.string(), "--floor", "0", "--ceiling", "inf"},
        {"crosscheck", "--n", "6", "--channel", "ad", "--p", "0.05", "--traj", "200"},
    };
    for (const auto& base : commands) {
        const std::string name = base.front();
        const fs::path a = root / (name + "_w1");
        const fs::path b = root / (name + "_w3");
        std::string err;
        auto args = base;
        args.insert(args.end(), {"--workers", "1", "--out", a.string()});
        const int first = invoke(args, &err);
        if (first != cli::kExitOk) {
            o.check(false, name + ": first run exited " + std::to_string(first) + ": " + err);
            continue;
        }
        const int second =
            invoke({name, "--config", (a / (name + ".cfg")).string(), "--workers", "3", "--out", b.string()}, &err);
        if (second != cli::kExitOk) {
            o.check(false, name + ": replay exited " + std::to_string(second) + ": " + err);
            continue;
        }
        const auto manifest = nlohmann::json::parse(slurp(a / (name + ".manifest.json")));
        std::size_t files = 0;
        bool same = true;
        for (const auto& out : manifest["outputs"]) {
            const std::string file = out.get<std::string>();
            const std::string ref = slurp(a / file);
            same = same && !ref.empty() && ref == slurp(b / file);
            ++files;
        }
        o.check(same && files > 0, name + ": " + std::to_string(files) +
                                       " output files identical after replay from the manifest with 3 workers");
    }
    fs::remove_all(root);
    o.summary = "replay from the manifest reproduces every output byte for byte across worker counts";
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));
    const int workers = 0;

    const std::vector<std::pair<int, std::function<Outcome()>>> criteria = {
        {1, noiseless_fidelity},
        {2, oracle_equivalence},
        {3, channel_algebra},
        {4, depolarizing_baseline},
        {5, [&] { return engine_crosscheck(workers); }},
        {6, [&] { return figure_two(workers); }},
        {7, [&] { return scaling_exponents(workers); }},
        {8, fitter_self_test},
        {9, determinism},
    };

    int unexpected = 0;
    for (const auto& [id, run] : criteria) {
        if (!selected.empty() && !selected.contains(id)) continue;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.summary = std::string("aborted: ") + e.what();
        }
        const bool known = kKnownRed.contains(id);
        std::printf("criterion %d: %s  %s  [%.1f s]\n", id, o.pass ? "PASS" : (known ? "FAIL (known)" : "FAIL"),
                    o.summary.c_str(), seconds_since(t0));
        for (const auto& line : o.detail) std::printf("    %s\n", line.c_str());
        std::fflush(stdout);
        if (!o.pass && !known) ++unexpected;
    }
    std::printf("%s\n", unexpected == 0 ? "acceptance: no unexpected failures" : "acceptance: unexpected failures");
    return unexpected == 0 ? 0 : 1;
}
