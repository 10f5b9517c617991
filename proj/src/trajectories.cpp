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

#include "grover/trajectories.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "grover/analytic.hpp"
#include "grover/dense.hpp"
#include "grover/parallel.hpp"
#include "grover/stats.hpp"

namespace grover {

namespace {

constexpr double kProbabilityTolerance = 1e-8;

/// Index of the outcome selected by u in [0, 1) under `probs`.
int draw(const std::vector<double>& probs, double u) {
    double total = 0.0;
    for (double q : probs) total += q;
    double acc = 0.0;
    const double target = u * total;
    for (std::size_t m = 0; m < probs.size(); ++m) {
        acc += probs[m];
        if (target < acc && probs[m] > 0.0) return static_cast<int>(m);
    }
    // u * total rounded up to the total: take the last non-zero outcome
    for (std::size_t m = probs.size(); m-- > 0;) {
        if (probs[m] > 0.0) return static_cast<int>(m);
    }
    throw NumericalError("all Kraus outcomes have zero probability");
}

void check_probabilities(const std::vector<double>& probs, int qubit) {
    double total = 0.0;
    for (double q : probs) {
        if (q < -kProbabilityTolerance) throw NumericalError("negative outcome probability");
        total += q;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance) {
        throw NumericalError("Kraus outcome probabilities sum to " + std::to_string(total) + " on qubit " +
                             std::to_string(qubit));
    }
}

std::vector<VectorXc> plus_vectors(int n) {
    return std::vector<VectorXc>(static_cast<std::size_t>(n), VectorXc::Constant(2, 1.0 / std::sqrt(2.0)));
}

double success_of(const Mps& state, const Bitstring& omega) {
    std::vector<VectorXc> vs;
    vs.reserve(static_cast<std::size_t>(omega.size()));
    for (int q = 0; q < omega.size(); ++q) vs.push_back(VectorXc::Unit(2, omega[q]));
    return std::norm(state.contract_with_product(vs));
}

// Dense statevector counterparts used by the cross-check.

Mat2 dense_site_rdm(const dense::DenseState& s, int qubit) {
    const int shift = s.n - 1 - qubit;
    const Index dim = s.amplitudes.size();
    Mat2 r = Mat2::Zero();
    for (Index i = 0; i < dim; ++i) {
        if ((i >> shift) & 1) continue;
        const Index j = i | (Index{1} << shift);
        const cplx a0 = s.amplitudes(i);
        const cplx a1 = s.amplitudes(j);
        r(0, 0) += std::norm(a0);
        r(1, 1) += std::norm(a1);
        r(0, 1) += a0 * std::conj(a1);
    }
    r(1, 0) = std::conj(r(0, 1));
    return r;
}

double dense_expected_entropy(const dense::DenseState& s, int qubit, const KrausChannel& channel, int cut) {
    double out = 0.0;
    for (const auto& f : channel.operators()) {
        dense::DenseState trial = s;
        dense::apply_single_qubit(trial, qubit, f);
        const double p = trial.amplitudes.squaredNorm();
        if (p <= 1e-15) continue;
        trial.amplitudes /= std::sqrt(p);
        out += p * dense::entanglement_entropy(trial, cut);
    }
    return out;
}

double dense_expected_renyi2(const dense::DenseState& s, int qubit, const KrausChannel& channel, int cut) {
    double out = 0.0;
    for (const auto& f : channel.operators()) {
        dense::DenseState trial = s;
        dense::apply_single_qubit(trial, qubit, f);
        const double p = trial.amplitudes.squaredNorm();
        if (p <= 1e-15) continue;
        const auto right = Index{1} << (s.n - cut);
        const Eigen::Map<const MatrixXc> psi(trial.amplitudes.data(), right, trial.amplitudes.size() / right);
        const MatrixXc gram = psi.adjoint() * psi / p;
        out -= p * std::log2(gram.squaredNorm());
    }
    return out;
}

KrausChannel dense_kraus_set(const TrajectoryConfig& config, const KrausChannel& channel,
                             const dense::DenseState& s, int qubit) {
    switch (config.strategy.kind) {
        case StrategyKind::Naive:
            return channel;
        case StrategyKind::MaxNonUnitarity:
            if (config.strategy.functional == NonUnitarityFunctional::CutRenyi2) {
                return mix_channel(channel, maximize_over_mixings(
                                                [&](const Mat2& u) {
                                                    return -dense_expected_renyi2(s, qubit, mix_channel(channel, u),
                                                                                  config.cut);
                                                },
                                                config.strategy));
            }
            return mix_channel(channel,
                               optimize_mixing_nonunitarity(dense_site_rdm(s, qubit), channel, config.strategy));
        case StrategyKind::GreedyEntropyMin:
            return mix_channel(channel, maximize_over_mixings(
                                            [&](const Mat2& u) {
                                                return -dense_expected_entropy(s, qubit, mix_channel(channel, u),
                                                                               config.cut);
                                            },
                                            config.strategy));
    }
    return channel;
}

}  // namespace

TrajectoryConfig TrajectoryConfig::for_register(int n) {
    TrajectoryConfig c;
    c.n = n;
    c.omega = Bitstring::all_ones(n);
    c.cut = n / 2;
    c.iterations = analytic::optimal_iterations(n);
    return c;
}

void TrajectoryConfig::validate() const {
    if (n < 2) throw ValidationError("trajectories need n >= 2");
    if (omega.size() != n) throw ValidationError("target length does not match qubit count");
    if (iterations < 1) throw ValidationError("iteration count must be at least 1");
    if (n_traj < 1) throw ValidationError("trajectory count must be at least 1");
    if (cut < 1 || cut > n - 1) throw ValidationError("cut must lie in [1, n-1]");
    if (channel == ChannelKind::Custom) throw ValidationError("trajectories need a named channel");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("noise rate must lie in [0, 1]");
    policy.validate();
    strategy.validate();
    (void)make_channel();
}

KrausChannel TrajectoryConfig::make_channel() const { return grover::make_channel(channel, p); }

TrajectoryStepper::TrajectoryStepper(const TrajectoryConfig& config)
    : config_(config),
      channel_(config.make_channel()),
      oracle_(build_oracle_mpo(config.omega)),
      diffusion_(build_diffusion_mpo(config.n)) {}

KrausChannel TrajectoryStepper::kraus_set(Mps& state, int qubit) const {
    switch (config_.strategy.kind) {
        case StrategyKind::Naive:
            return channel_;
        case StrategyKind::MaxNonUnitarity:
            return mix_channel(channel_, optimize_mixing_nonunitarity(state, qubit, channel_, config_.cut, config_.strategy));
        case StrategyKind::GreedyEntropyMin:
            return mix_channel(channel_,
                               optimize_mixing_entropy(state, qubit, channel_, config_.cut, config_.strategy));
    }
    return channel_;
}

void TrajectoryStepper::step(Mps& state, long iteration, Rng& rng, std::vector<JumpEvent>* log) const {
    state = apply_mpo(std::move(state), oracle_, config_.policy);
    state = apply_mpo(std::move(state), diffusion_, config_.policy);
    std::vector<double> probs;
    for (int q = 0; q < config_.n; ++q) {
        const KrausChannel set = kraus_set(state, q);
        const Mat2 rdm = reduced_site_matrix(state, q);
        probs.clear();
        for (const auto& f : set.operators()) probs.push_back((rdm * f.adjoint() * f).trace().real());
        check_probabilities(probs, q);
        const int m = draw(probs, uniform01(rng));
        apply_local_op(state, q, set.op(static_cast<std::size_t>(m)), true);
        if (log != nullptr) log->push_back({iteration, q, m});
    }
}

TrajectoryRecord run_trajectory(const TrajectoryConfig& config, std::size_t index) {
    const TrajectoryStepper stepper(config);
    TrajectoryRecord rec;
    rec.index = index;
    rec.seed_used = derive_seed(config.seed, index);
    Rng rng(rec.seed_used);
    Mps state = Mps::from_product(plus_vectors(config.n));
    rec.entropy_series.reserve(static_cast<std::size_t>(config.iterations) + 1);
    rec.success_series.reserve(static_cast<std::size_t>(config.iterations) + 1);
    rec.entropy_series.push_back(bipartite_entropy(state, config.cut));
    rec.success_series.push_back(success_of(state, config.omega));
    for (long k = 1; k <= config.iterations; ++k) {
        stepper.step(state, k, rng, &rec.jump_log);
        rec.entropy_series.push_back(bipartite_entropy(state, config.cut));
        rec.success_series.push_back(success_of(state, config.omega));
        rec.max_bond = std::max(rec.max_bond, static_cast<std::size_t>(state.max_bond()));
    }
    rec.final_success = rec.success_series.back();
    return rec;
}

RunTrace run_grover_mps(int n, const Bitstring& omega, long iterations, int cut, const TruncationPolicy& policy) {
    if (omega.size() != n) throw ValidationError("target length differs from register size");
    if (iterations < 0) throw ValidationError("iteration count must be non-negative");
    if (cut < 1 || cut >= n) throw ValidationError("cut must lie in [1, n-1]");
    policy.validate();
    const Mpo oracle = build_oracle_mpo(omega);
    const Mpo diffusion = build_diffusion_mpo(n);
    Mps state = Mps::from_product(plus_vectors(n));
    RunTrace trace;
    trace.records.reserve(static_cast<std::size_t>(iterations) + 1);
    auto record = [&](long k) {
        RunRecord r;
        r.k = k;
        r.success_probability = success_of(state, omega);
        r.entropy = bipartite_entropy(state, cut);
        r.discarded_weight = state.discarded_weight();
        r.max_bond = static_cast<std::size_t>(state.max_bond());
        trace.records.push_back(r);
    };
    record(0);
    for (long k = 1; k <= iterations; ++k) {
        state = apply_mpo(std::move(state), oracle, policy);
        state = apply_mpo(std::move(state), diffusion, policy);
        record(k);
    }
    return trace;
}

EnsembleResult run_ensemble(const TrajectoryConfig& config, int workers) {
    config.validate();
    const auto count = static_cast<std::size_t>(config.n_traj);
    std::vector<TrajectoryRecord> records(count);
    parallel_for(count, workers, [&](std::size_t i) {
        records[i] = run_trajectory(config, i);
        if (!config.retain_records) records[i].jump_log = {};
    });

    EnsembleResult out;
    const auto steps = static_cast<std::size_t>(config.iterations) + 1;
    std::vector<double> column(count);
    auto fill = [&](std::size_t k, bool entropy) {
        for (std::size_t i = 0; i < count; ++i) {
            column[i] = entropy ? records[i].entropy_series[k] : records[i].success_series[k];
        }
    };
    for (std::size_t k = 0; k < steps; ++k) {
        fill(k, true);
        out.mean_entropy.push_back(stats::mean(column));
        out.entropy_stderr.push_back(stats::standard_error(column));
        out.bands.p05.push_back(stats::quantile(column, 0.05));
        out.bands.p25.push_back(stats::quantile(column, 0.25));
        out.bands.p50.push_back(stats::quantile(column, 0.50));
        out.bands.p75.push_back(stats::quantile(column, 0.75));
        out.bands.p95.push_back(stats::quantile(column, 0.95));
        const auto [lo, hi] = std::minmax_element(column.begin(), column.end());
        out.bands.min.push_back(*lo);
        out.bands.max.push_back(*hi);
        out.max_entropy = std::max(out.max_entropy, *hi);
        fill(k, false);
        out.mean_success_series.push_back(stats::mean(column));
        out.success_stderr_series.push_back(stats::standard_error(column));
    }
    out.mean_success = out.mean_success_series.back();
    out.standard_error = out.success_stderr_series.back();
    for (const auto& r : records) out.max_bond = std::max(out.max_bond, r.max_bond);
    if (config.retain_records) out.records = std::move(records);
    return out;
}

CrosscheckResult dense_trajectory_crosscheck(const TrajectoryConfig& config, int workers) {
    config.validate();
    if (config.n > kMaxCrosscheckQubits) {
        throw ResourceError("dense trajectory cross-check supports n <= " + std::to_string(kMaxCrosscheckQubits));
    }
    const KrausChannel channel = config.make_channel();

    auto exact = dense::DenseDensityMatrix::from_state(dense::init_uniform(config.n));
    for (long k = 0; k < config.iterations; ++k) {
        dense::apply_oracle(exact, config.omega);
        dense::apply_diffusion(exact);
        for (int q = 0; q < config.n; ++q) dense::apply_channel(exact, q, channel);
    }

    const auto count = static_cast<std::size_t>(config.n_traj);
    std::vector<VectorXc> finals(count);
    parallel_for(count, workers, [&](std::size_t i) {
        Rng rng(derive_seed(config.seed, i));
        dense::DenseState s = dense::init_uniform(config.n);
        std::vector<double> probs;
        for (long k = 1; k <= config.iterations; ++k) {
            dense::apply_oracle(s, config.omega);
            dense::apply_diffusion(s);
            for (int q = 0; q < config.n; ++q) {
                const KrausChannel set = dense_kraus_set(config, channel, s, q);
                const Mat2 rdm = dense_site_rdm(s, q);
                probs.clear();
                for (const auto& f : set.operators()) probs.push_back((rdm * f.adjoint() * f).trace().real());
                check_probabilities(probs, q);
                const int m = draw(probs, uniform01(rng));
                dense::apply_single_qubit(s, q, set.op(static_cast<std::size_t>(m)));
                s.amplitudes /= s.amplitudes.norm();
            }
        }
        finals[i] = std::move(s.amplitudes);
    });

    const Index dim = exact.entries.rows();
    MatrixXc average = MatrixXc::Zero(dim, dim);
    std::vector<double> success(count);
    const auto w = static_cast<Index>(config.omega.dense_index());
    for (std::size_t i = 0; i < count; ++i) {
        average.noalias() += finals[i] * finals[i].adjoint();
        success[i] = std::norm(finals[i](w));
    }
    average /= static_cast<double>(count);

    CrosscheckResult out;
    out.distance = (average - exact.entries).cwiseAbs().maxCoeff();
    out.exact_success = dense::success_probability(exact, config.omega);
    out.mean_success = stats::mean(success);
    out.success_stderr = stats::standard_error(success);
    return out;
}

}  // namespace grover
