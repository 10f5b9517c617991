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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "grover/analytic.hpp"
#include "grover/cli.hpp"
#include "grover/dense.hpp"
#include "grover/mpdo.hpp"
#include "grover/trajectories.hpp"
#include "json.hpp"

#ifndef GROVER_VERSION
#define GROVER_VERSION "unversioned"
#endif

namespace grover::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr double kIdealTolerance = 1e-10;
constexpr double kMpdoTolerance = 1e-6;
constexpr double kTrajectorySigmas = 3.0;

struct Options {
    int n = 10;
    std::string omega;
    std::string channel = "pf";
    double p = 0.02;
    std::vector<double> p_list;
    long iters = -1;
    std::optional<std::size_t> chi;
    double cutoff = 1e-12;
    int traj = 2000;
    std::vector<std::string> strategies;
    std::uint64_t seed = 20260101;
    int cut = -1;
    std::string out = ".";
    int workers = 0;
    std::string config;
    std::string oe = "normalized";
    bool records = false;
    // sweep
    std::vector<int> n_list;
    double grid_min = 5e-3;
    double grid_max = 5e-1;
    int grid_count = 20;
    std::string engine;
    std::string targets;
    std::size_t chi_cap = 128;
    double tolerance = 1e-6;
    // fit
    std::string dataset;
    std::string law = "pf";
    double floor = 1e-9;
    double ceiling = 1e-2;
    double fit_p_min = 0.0;
    double fit_p_max = 1.0;
    int n_min = 0;
    bool intercept = false;
    bool magnitude = false;
};

/// Everything one command produced, for the manifest.
struct Session {
    std::string command;
    std::map<std::string, std::string> resolved;
    std::vector<std::string> outputs;
    std::vector<std::string> guards;
    json checks = json::object();
    std::string started;
};

std::string utc_now() {
    const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    std::ostringstream s;
    s << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return s.str();
}

std::string short_double(double x) {
    std::ostringstream s;
    s << x;
    return s.str();
}

template <class T>
std::string join(const std::vector<T>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) out += ",";
        if constexpr (std::is_floating_point_v<T>) {
            out += format_double(xs[i]);
        } else if constexpr (std::is_same_v<T, std::string>) {
            out += xs[i];
        } else {
            out += std::to_string(xs[i]);
        }
    }
    return out;
}

ChannelKind parse_channel(const std::string& name) {
    if (name == "pf" || name == "phase_flip") return ChannelKind::PhaseFlip;
    if (name == "ad" || name == "amplitude_damping") return ChannelKind::AmplitudeDamping;
    throw ValidationError("unknown channel '" + name + "' (expected pf or ad)");
}

std::string channel_flag(ChannelKind kind) { return kind == ChannelKind::PhaseFlip ? "pf" : "ad"; }

OperatorSchmidtWeights parse_oe(const std::string& name) {
    if (name == "normalized") return OperatorSchmidtWeights::Normalized;
    if (name == "raw") return OperatorSchmidtWeights::Raw;
    throw ValidationError("unknown operator entanglement weights '" + name + "' (expected normalized or raw)");
}

Bitstring resolve_omega(const Options& o) {
    if (o.omega.empty()) return Bitstring::all_ones(o.n);
    Bitstring omega = Bitstring::parse(o.omega);
    if (omega.size() != o.n) {
        throw ValidationError("--omega has " + std::to_string(omega.size()) + " bits but --n is " + std::to_string(o.n));
    }
    return omega;
}

long resolve_iters(const Options& o) { return o.iters >= 0 ? o.iters : analytic::optimal_iterations(o.n); }
int resolve_cut(const Options& o) { return o.cut >= 0 ? o.cut : o.n / 2; }

TruncationPolicy resolve_policy(const Options& o, std::size_t default_chi) {
    TruncationPolicy policy;
    policy.chi_max = o.chi.value_or(default_chi);
    policy.sv_cutoff = o.cutoff;
    policy.validate();
    return policy;
}

std::string manifest_name(const Session& s) { return s.command + ".manifest.json"; }

fs::path output_path(const Options& o, Session& s, const std::string& file) {
    s.outputs.push_back(file);
    return fs::path(o.out) / file;
}

void write_manifest(const Options& o, const Session& s) {
    const std::string cfg_name = s.command + ".cfg";
    {
        std::ofstream cfg(fs::path(o.out) / cfg_name, std::ios::binary);
        cfg << "# resolved configuration of `" << s.command << "`; rerun with --config\n";
        for (const auto& [k, v] : s.resolved) cfg << k << " = " << v << "\n";
    }
    json m;
    m["command"] = s.command;
    m["version"] = GROVER_VERSION;
    m["seed"] = o.seed;
    m["config"] = s.resolved;
    m["config_file"] = cfg_name;
    m["execution"] = {{"workers", o.workers}, {"out", o.out}};
    m["outputs"] = s.outputs;
    m["engine_guards"] = s.guards;
    if (!s.checks.empty()) m["checks"] = s.checks;
    m["started"] = s.started;
    m["finished"] = utc_now();
    std::ofstream(fs::path(o.out) / manifest_name(s), std::ios::binary) << m.dump(2) << "\n";
}

int cmd_ideal(const Options& o, Session& s, std::ostream& out, std::ostream& err) {
    if (o.n < 2 || o.n % 2 != 0) throw ValidationError("--n must be even and at least 2, got " + std::to_string(o.n));
    const Bitstring omega = resolve_omega(o);
    const long iters = resolve_iters(o);
    const int cut = resolve_cut(o);
    const TruncationPolicy policy = resolve_policy(o, 2);
    s.resolved = {{"n", std::to_string(o.n)},
                  {"omega", omega.to_string()},
                  {"iters", std::to_string(iters)},
                  {"chi", std::to_string(policy.chi_max)},
                  {"cutoff", format_double(policy.sv_cutoff)},
                  {"cut", std::to_string(cut)},
                  {"seed", std::to_string(o.seed)}};

    const RunTrace trace = run_grover_mps(o.n, omega, iters, cut, policy);
    CsvWriter csv(output_path(o, s, "ideal.csv"), "grover-sim/ideal/v1", manifest_name(s),
                  {"k", "P_omega", "S_vN_bits"});
    const bool equal_cut = 2 * cut == o.n;
    double worst_p = 0.0;
    double worst_s = 0.0;
    double max_s = 0.0;
    long peak = 0;
    std::vector<std::string> diffs;
    for (const auto& r : trace.records) {
        csv.row({std::to_string(r.k), format_double(r.success_probability), format_double(r.entropy)});
        const double dp = std::abs(r.success_probability - analytic::ideal_success_probability(o.n, r.k));
        const double ds =
            equal_cut ? std::abs(r.entropy - analytic::two_level_entropy(o.n, analytic::grover_angle(o.n, r.k))) : 0.0;
        worst_p = std::max(worst_p, dp);
        worst_s = std::max(worst_s, ds);
        max_s = std::max(max_s, r.entropy);
        if (r.success_probability > trace.records[static_cast<std::size_t>(peak)].success_probability) peak = r.k;
        if ((dp > kIdealTolerance || ds > kIdealTolerance) && diffs.size() < 10) {
            diffs.push_back("k=" + std::to_string(r.k) + " |dP|=" + short_double(dp) + " |dS|=" + short_double(ds));
        }
    }
    if (trace.records.back().discarded_weight > kIdealTolerance) {
        s.guards.push_back("bond truncation discarded weight " + short_double(trace.records.back().discarded_weight));
    }
    const bool ok = worst_p <= kIdealTolerance && worst_s <= kIdealTolerance && max_s <= 1.0 + kIdealTolerance;
    s.checks = {{"tolerance", kIdealTolerance},
                {"max_abs_success_deviation", worst_p},
                {"max_abs_entropy_deviation", worst_s},
                {"max_entropy_bits", max_s},
                {"peak_k", peak},
                {"passed", ok}};
    out << "ideal n=" << o.n << " k=0.." << iters << " peak k=" << peak << " max|dP|=" << short_double(worst_p)
        << " max|dS|=" << short_double(worst_s) << " max S=" << short_double(max_s) << "\n";
    if (!ok) {
        err << "analytic cross-check failed (tolerance " << kIdealTolerance << ")\n";
        for (const auto& d : diffs) err << "  " << d << "\n";
        if (max_s > 1.0 + kIdealTolerance) err << "  entropy exceeds one bit: " << max_s << "\n";
        return kExitTolerance;
    }
    return kExitOk;
}

int cmd_trajectories(const Options& o, Session& s, std::ostream& out, std::ostream&) {
    const ChannelKind kind = parse_channel(o.channel);
    const Bitstring omega = resolve_omega(o);
    const TruncationPolicy policy = resolve_policy(o, TruncationPolicy{}.chi_max);
    const std::vector<double> ps = o.p_list.empty() ? std::vector<double>{0.005, 0.01, 0.02, 0.04} : o.p_list;
    const std::vector<std::string> names =
        o.strategies.empty() ? std::vector<std::string>{"naive", "numu"} : o.strategies;
    std::vector<StrategyKind> strategies;
    for (const auto& name : names) strategies.push_back(parse_strategy(name));

    auto base = TrajectoryConfig::for_register(o.n);
    base.omega = omega;
    base.channel = kind;
    base.iterations = resolve_iters(o);
    base.n_traj = o.traj;
    base.policy = policy;
    base.seed = o.seed;
    base.cut = resolve_cut(o);
    base.retain_records = o.records;
    s.resolved = {{"n", std::to_string(o.n)},
                  {"omega", omega.to_string()},
                  {"channel", channel_flag(kind)},
                  {"p", join(ps)},
                  {"iters", std::to_string(base.iterations)},
                  {"chi", std::to_string(policy.chi_max)},
                  {"cutoff", format_double(policy.sv_cutoff)},
                  {"traj", std::to_string(o.traj)},
                  {"strategy", join(names)},
                  {"seed", std::to_string(o.seed)},
                  {"cut", std::to_string(base.cut)},
                  {"records", o.records ? "true" : "false"}};
    for (double p : ps) {
        auto c = base;
        c.p = p;
        c.validate();
    }

    for (double p : ps) {
        for (std::size_t si = 0; si < strategies.size(); ++si) {
            auto c = base;
            c.p = p;
            c.strategy.kind = strategies[si];
            const EnsembleResult r = run_ensemble(c, o.workers);
            const std::string stem = "trajectories_" + channel_flag(kind) + "_p" + short_double(p) + "_" + names[si];
            CsvWriter csv(output_path(o, s, stem + ".csv"), "grover-sim/trajectories/v1", manifest_name(s),
                          {"k", "S_T", "S_T_stderr", "p5", "p25", "p50", "p75", "p95", "S_min", "S_max",
                           "mean_success", "stderr"});
            for (std::size_t k = 0; k < r.mean_entropy.size(); ++k) {
                csv.row({std::to_string(k), format_double(r.mean_entropy[k]), format_double(r.entropy_stderr[k]),
                         format_double(r.bands.p05[k]), format_double(r.bands.p25[k]), format_double(r.bands.p50[k]),
                         format_double(r.bands.p75[k]), format_double(r.bands.p95[k]), format_double(r.bands.min[k]),
                         format_double(r.bands.max[k]), format_double(r.mean_success_series[k]),
                         format_double(r.success_stderr_series[k])});
            }
            if (o.records) {
                std::vector<std::string> cols = {"trajectory", "seed"};
                for (long k = 0; k <= c.iterations; ++k) cols.push_back("S_" + std::to_string(k));
                CsvWriter m(output_path(o, s, stem + "_records.csv"), "grover-sim/trajectory-records/v1",
                            manifest_name(s), cols);
                for (const auto& rec : r.records) {
                    std::vector<std::string> row = {std::to_string(rec.index), std::to_string(rec.seed_used)};
                    for (double x : rec.entropy_series) row.push_back(format_double(x));
                    m.row(row);
                }
            }
            if (r.max_bond >= policy.chi_max) {
                s.guards.push_back("bond cap " + std::to_string(policy.chi_max) + " reached at p=" + short_double(p) +
                                   " strategy=" + names[si]);
            }
            out << stem << ": S_T(M)=" << short_double(r.mean_entropy.back()) << " max S=" << short_double(r.max_entropy)
                << " P=" << short_double(r.mean_success) << " +- " << short_double(r.standard_error) << "\n";
        }
    }
    return kExitOk;
}

int cmd_mpdo(const Options& o, Session& s, std::ostream& out, std::ostream&) {
    const ChannelKind kind = parse_channel(o.channel);
    const Bitstring omega = resolve_omega(o);
    const long iters = resolve_iters(o);
    const TruncationPolicy policy = resolve_policy(o, 64);
    RunOptions options;
    options.oe_weights = parse_oe(o.oe);
    s.resolved = {{"n", std::to_string(o.n)},
                  {"omega", omega.to_string()},
                  {"channel", channel_flag(kind)},
                  {"p", format_double(o.p)},
                  {"iters", std::to_string(iters)},
                  {"chi", std::to_string(policy.chi_max)},
                  {"cutoff", format_double(policy.sv_cutoff)},
                  {"oe", o.oe},
                  {"seed", std::to_string(o.seed)}};
    if (o.cut >= 0 && o.cut != o.n / 2) throw ValidationError("the MPDO records the equal cut only; drop --cut");

    const RunTrace trace = run_grover_mpdo(o.n, omega, make_channel(kind, o.p), iters, policy, options);
    CsvWriter csv(output_path(o, s, "mpdo.csv"), "grover-sim/mpdo/v1", manifest_name(s),
                  {"k", "P_omega", "OE", "trace_drift", "discarded_weight", "max_bond"});
    for (const auto& r : trace.records) {
        csv.row({std::to_string(r.k), format_double(r.success_probability), format_double(r.entropy),
                 format_double(r.trace_drift), format_double(r.discarded_weight), std::to_string(r.max_bond)});
    }
    const auto& last = trace.records.back();
    if (last.max_bond >= policy.chi_max) s.guards.push_back("bond cap " + std::to_string(policy.chi_max) + " reached");
    out << "mpdo n=" << o.n << " P_f=" << short_double(last.success_probability)
        << " OE=" << short_double(last.entropy) << " discarded=" << short_double(last.discarded_weight) << "\n";
    return kExitOk;
}

int cmd_sweep(const Options& o, Session& s, std::ostream& out, std::ostream&) {
    const ChannelKind kind = parse_channel(o.channel);
    auto spec = kind == ChannelKind::PhaseFlip ? experiments::SweepSpec::phase_flip()
                                               : experiments::SweepSpec::amplitude_damping();
    if (!o.n_list.empty()) spec.n_list = o.n_list;
    spec.p_grid = o.p_list.empty() ? experiments::log_grid(o.grid_min, o.grid_max, o.grid_count) : o.p_list;
    if (!o.engine.empty()) spec.engine = experiments::parse_engine(o.engine);
    if (o.targets == "all_ones") {
        spec.targets = experiments::TargetPolicy::FixedAllOnes;
    } else if (o.targets == "binomial") {
        spec.targets = experiments::TargetPolicy::BinomialAverage;
    } else if (!o.targets.empty()) {
        throw ValidationError("unknown target policy '" + o.targets + "' (expected all_ones or binomial)");
    }
    if (o.chi) spec.chi_max = *o.chi;
    spec.chi_cap = o.chi_cap;
    spec.convergence_tolerance = o.tolerance;
    spec.validate();
    s.resolved = {{"channel", channel_flag(kind)},
                  {"n-list", join(spec.n_list)},
                  {"p", join(spec.p_grid)},
                  {"engine", experiments::to_string(spec.engine)},
                  {"targets", experiments::to_string(spec.targets)},
                  {"chi", std::to_string(spec.chi_max)},
                  {"chi-cap", std::to_string(spec.chi_cap)},
                  {"tolerance", format_double(spec.convergence_tolerance)},
                  {"seed", std::to_string(o.seed)}};

    const auto points = experiments::run_sweep(spec, o.workers);
    write_sweep(output_path(o, s, "sweep.csv"), manifest_name(s), points);
    std::size_t flagged = 0;
    for (const auto& pt : points) {
        if (pt.converged) continue;
        ++flagged;
        const std::string where = "n=" + std::to_string(pt.n) + " p=" + short_double(pt.p);
        if (std::isnan(pt.success)) {
            s.guards.push_back("trace guard tripped up to chi " + std::to_string(pt.chi_used) + " at " + where);
        } else {
            s.guards.push_back("chi not converged at " + where + " (delta " + short_double(pt.convergence_delta) +
                               " at chi " + std::to_string(pt.chi_used) + ")");
        }
    }
    out << "sweep " << experiments::to_string(kind == ChannelKind::PhaseFlip ? experiments::ScalingLaw::PhaseFlip
                                                                               : experiments::ScalingLaw::AmplitudeDamping)
        << ": " << points.size() << " points, " << flagged << " unconverged\n";
    return kExitOk;
}

/// JSON has no infinities; they are written as strings.
json json_number(double x) { return std::isfinite(x) ? json(x) : json(short_double(x)); }

int cmd_fit(const Options& o, Session& s, std::ostream& out, std::ostream&) {
    if (o.dataset.empty()) throw ValidationError("fit needs a dataset path");
    const auto law = parse_channel(o.law) == ChannelKind::PhaseFlip ? experiments::ScalingLaw::PhaseFlip
                                                                    : experiments::ScalingLaw::AmplitudeDamping;
    experiments::FitWindow window;
    window.floor = o.floor;
    window.ceiling = o.ceiling;
    window.p_min = o.fit_p_min;
    window.p_max = o.fit_p_max;
    window.n_min = o.n_min;
    window.intercept = o.intercept;
    if (!(window.floor < window.ceiling)) throw ValidationError("--floor must be below --ceiling");
    s.resolved = {{"dataset", o.dataset},
                  {"law", o.law},
                  {"floor", format_double(window.floor)},
                  {"ceiling", format_double(window.ceiling)},
                  {"fit-p-min", format_double(window.p_min)},
                  {"fit-p-max", format_double(window.p_max)},
                  {"n-min", std::to_string(window.n_min)},
                  {"intercept", window.intercept ? "true" : "false"},
                  {"magnitude", o.magnitude ? "true" : "false"},
                  {"seed", std::to_string(o.seed)}};

    auto points = read_sweep(o.dataset);
    if (o.magnitude) {
        for (auto& pt : points) pt.excess = std::abs(pt.excess);
    }
    const auto fit = experiments::fit_scaling(points, law, window);
    json j;
    j["law"] = experiments::to_string(law);
    j["exponents"] = {{"rate", fit.rate_exponent}, {"size", fit.size_exponent}};
    j["errors"] = {{"rate", fit.rate_stderr}, {"size", fit.size_stderr}};
    if (window.intercept) j["intercept"] = {{"value", fit.intercept}, {"error", fit.intercept_stderr}};
    j["window"] = {{"floor", json_number(window.floor)}, {"ceiling", json_number(window.ceiling)}, {"p_min", window.p_min},
                   {"p_max", window.p_max},       {"n_min", window.n_min},     {"intercept", window.intercept},
                   {"description", window.describe()}};
    j["magnitude"] = o.magnitude;
    j["residual"] = fit.residual_norm;
    j["point_count"] = fit.point_count;
    j["flagged_excluded"] = fit.flagged_excluded;
    j["manifest"] = manifest_name(s);
    std::ofstream(output_path(o, s, "fit.json"), std::ios::binary) << j.dump(2) << "\n";
    if (fit.flagged_excluded > 0) {
        s.guards.push_back(std::to_string(fit.flagged_excluded) + " unconverged points excluded from the fit");
    }
    out << "fit " << experiments::to_string(law) << ": rate " << short_double(fit.rate_exponent) << " +- "
        << short_double(fit.rate_stderr) << ", size " << short_double(fit.size_exponent) << " +- "
        << short_double(fit.size_stderr) << " over " << fit.point_count << " points\n";
    return kExitOk;
}

int cmd_crosscheck(const Options& o, Session& s, std::ostream& out, std::ostream& err) {
    if (o.n > kMaxCrosscheckQubits) {
        throw ResourceError("crosscheck supports n <= " + std::to_string(kMaxCrosscheckQubits) + ", got " +
                            std::to_string(o.n));
    }
    const ChannelKind kind = parse_channel(o.channel);
    const Bitstring omega = resolve_omega(o);
    const long iters = resolve_iters(o);
    const TruncationPolicy policy = resolve_policy(o, 64);
    const std::string strategy = o.strategies.empty() ? "naive" : o.strategies.front();
    if (o.strategies.size() > 1) throw ValidationError("crosscheck takes a single --strategy");
    RunOptions options;
    options.oe_weights = parse_oe(o.oe);
    auto tc = TrajectoryConfig::for_register(o.n);
    tc.omega = omega;
    tc.channel = kind;
    tc.p = o.p;
    tc.iterations = iters;
    tc.n_traj = o.traj;
    tc.policy = policy;
    tc.strategy.kind = parse_strategy(strategy);
    tc.seed = o.seed;
    tc.cut = resolve_cut(o);
    tc.validate();
    s.resolved = {{"n", std::to_string(o.n)},
                  {"omega", omega.to_string()},
                  {"channel", channel_flag(kind)},
                  {"p", format_double(o.p)},
                  {"iters", std::to_string(iters)},
                  {"chi", std::to_string(policy.chi_max)},
                  {"cutoff", format_double(policy.sv_cutoff)},
                  {"traj", std::to_string(o.traj)},
                  {"strategy", strategy},
                  {"oe", o.oe},
                  {"seed", std::to_string(o.seed)},
                  {"cut", std::to_string(tc.cut)}};

    const KrausChannel channel = make_channel(kind, o.p);
    const RunTrace dense_trace = dense::run_grover(o.n, omega, channel, iters, options);
    const RunTrace mpdo_trace = run_grover_mpdo(o.n, omega, channel, iters, policy, options);
    const EnsembleResult ens = run_ensemble(tc, o.workers);

    CsvWriter csv(output_path(o, s, "crosscheck.csv"), "grover-sim/crosscheck/v1", manifest_name(s),
                  {"k", "P_dense", "P_mpdo", "P_traj", "P_traj_stderr", "OE_dense", "OE_mpdo", "dP_mpdo", "dOE_mpdo",
                   "z_traj"});
    double max_dp = 0.0;
    double max_doe = 0.0;
    out << std::setw(4) << "k" << std::setw(14) << "P_dense" << std::setw(12) << "|dP_mpdo|" << std::setw(12)
        << "|dOE_mpdo|" << std::setw(14) << "P_traj" << std::setw(10) << "z_traj" << "\n";
    double z_final = 0.0;
    for (std::size_t k = 0; k < dense_trace.records.size(); ++k) {
        const auto& d = dense_trace.records[k];
        const auto& m = mpdo_trace.records[k];
        const double dp = std::abs(d.success_probability - m.success_probability);
        const double doe = std::abs(d.entropy - m.entropy);
        const double se = ens.success_stderr_series[k];
        const double gap = std::abs(ens.mean_success_series[k] - d.success_probability);
        const double z = se > 0.0 ? gap / se : (gap > 1e-12 ? std::numeric_limits<double>::infinity() : 0.0);
        max_dp = std::max(max_dp, dp);
        max_doe = std::max(max_doe, doe);
        z_final = z;
        csv.row({std::to_string(k), format_double(d.success_probability), format_double(m.success_probability),
                 format_double(ens.mean_success_series[k]), format_double(se), format_double(d.entropy),
                 format_double(m.entropy), format_double(dp), format_double(doe), format_double(z)});
        out << std::setw(4) << k << std::setw(14) << std::setprecision(8) << d.success_probability << std::setw(12)
            << std::setprecision(3) << dp << std::setw(12) << doe << std::setw(14) << std::setprecision(8)
            << ens.mean_success_series[k] << std::setw(10) << std::setprecision(3) << z << "\n";
    }
    out << std::setprecision(6);
    const bool mpdo_ok = max_dp <= kMpdoTolerance && max_doe <= kMpdoTolerance;
    const bool traj_ok = z_final <= kTrajectorySigmas;
    s.checks = {{"mpdo_tolerance", kMpdoTolerance},
                {"max_abs_success_deviation_mpdo", max_dp},
                {"max_abs_oe_deviation_mpdo", max_doe},
                {"trajectory_sigmas", kTrajectorySigmas},
                {"final_trajectory_z", z_final},
                {"passed", mpdo_ok && traj_ok}};
    out << "dense vs mpdo: max|dP|=" << short_double(max_dp) << " max|dOE|=" << short_double(max_doe)
        << (mpdo_ok ? " ok" : " FAIL") << "; dense vs trajectories: final z=" << short_double(z_final)
        << (traj_ok ? " ok" : " FAIL") << "\n";
    if (!mpdo_ok) err << "MPDO deviates from dense beyond " << kMpdoTolerance << "\n";
    if (!traj_ok) err << "trajectory mean deviates from dense by more than " << kTrajectorySigmas << " sigma\n";
    return mpdo_ok && traj_ok ? kExitOk : kExitTolerance;
}

// Options shared across commands, registered only where they apply.
struct Registrar {
    CLI::App* app;
    Options& o;

    void n() { app->add_option("--n", o.n, "Register size")->check(CLI::Range(2, 64)); }
    void omega() { app->add_option("--omega", o.omega, "Target bitstring (default all ones)"); }
    void channel() { app->add_option("--channel", o.channel, "Noise channel: pf or ad"); }
    void p() { app->add_option("--p", o.p, "Noise rate")->check(CLI::Range(0.0, 1.0)); }
    void p_list(const char* what) {
        app->add_option("--p", o.p_list, what)->delimiter(',')->check(CLI::Range(0.0, 1.0));
    }
    void iters() { app->add_option("--iters", o.iters, "Grover iterations (default optimal)"); }
    void chi() { app->add_option("--chi", o.chi, "Bond dimension cap")->check(CLI::PositiveNumber); }
    void cutoff() { app->add_option("--cutoff", o.cutoff, "Relative singular-value cutoff"); }
    void traj() { app->add_option("--traj", o.traj, "Trajectory count")->check(CLI::PositiveNumber); }
    void strategy() {
        app->add_option("--strategy", o.strategies, "Unraveling: naive, numu or greedy")->delimiter(',');
    }
    void seed() { app->add_option("--seed", o.seed, "Master seed"); }
    void cut() { app->add_option("--cut", o.cut, "Entropy cut (default n/2)"); }
    void oe() { app->add_option("--oe", o.oe, "Operator entanglement weights: normalized or raw"); }
    void common() {
        app->add_option("--out", o.out, "Output directory");
        app->add_option("--workers", o.workers, "Worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
        app->add_option("--config", o.config, "key = value configuration file");
    }
};

/// The first token naming a long option, without dashes and value.
std::optional<std::string> flag_name(std::string_view token) {
    if (!token.starts_with("--") || token.size() == 2) return std::nullopt;
    token.remove_prefix(2);
    return std::string(token.substr(0, token.find('=')));
}

void describe_sources(const std::map<std::string, std::string>& sources, std::ostream& err) {
    if (sources.empty()) return;
    err << "values were given by:\n";
    for (const auto& [key, where] : sources) err << "  " << key << ": " << where << "\n";
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Grover search under single-qubit noise"};
    app.require_subcommand(1);
    app.set_version_flag("--version", GROVER_VERSION);

    using Handler = int (*)(const Options&, Session&, std::ostream&, std::ostream&);
    std::vector<std::pair<CLI::App*, Handler>> commands;
    auto add = [&](const char* name, const char* help, Handler h) {
        CLI::App* sub = app.add_subcommand(name, help);
        commands.emplace_back(sub, h);
        return Registrar{sub, o};
    };

    auto ideal = add("ideal", "Noiseless evolution on the MPS, checked against the closed form", cmd_ideal);
    ideal.n();
    ideal.omega();
    ideal.iters();
    ideal.chi();
    ideal.cutoff();
    ideal.cut();
    ideal.seed();
    ideal.common();

    auto traj = add("trajectories", "Trajectory ensembles: entanglement bands and success", cmd_trajectories);
    traj.n();
    traj.omega();
    traj.channel();
    traj.p_list("Noise rates (comma separated)");
    traj.iters();
    traj.chi();
    traj.cutoff();
    traj.traj();
    traj.strategy();
    traj.seed();
    traj.cut();
    traj.app->add_flag("--records", o.records, "Also write the per-trajectory entropy matrix");
    traj.common();

    auto mpdo = add("mpdo", "Density-operator evolution: success and operator entanglement", cmd_mpdo);
    mpdo.n();
    mpdo.omega();
    mpdo.channel();
    mpdo.p();
    mpdo.iters();
    mpdo.chi();
    mpdo.cutoff();
    mpdo.cut();
    mpdo.oe();
    mpdo.seed();
    mpdo.common();

    auto sweep = add("sweep", "Final success over a grid of sizes and rates", cmd_sweep);
    sweep.channel();
    sweep.p_list("Explicit rate grid (overrides --grid-*)");
    sweep.chi();
    sweep.seed();
    sweep.app->add_option("--n-list", o.n_list, "Register sizes")->delimiter(',');
    sweep.app->add_option("--grid-min", o.grid_min, "Smallest rate of the log grid");
    sweep.app->add_option("--grid-max", o.grid_max, "Largest rate of the log grid");
    sweep.app->add_option("--grid-count", o.grid_count, "Points of the log grid");
    sweep.app->add_option("--engine", o.engine, "mpdo, dense or symmetric");
    sweep.app->add_option("--targets", o.targets, "all_ones or binomial");
    sweep.app->add_option("--chi-cap", o.chi_cap, "Largest bond of the adaptive doubling");
    sweep.app->add_option("--tolerance", o.tolerance, "Bond convergence tolerance on P_f");
    sweep.common();

    auto fit = add("fit", "Fit the scaling law to a sweep dataset", cmd_fit);
    fit.seed();
    fit.app->add_option("dataset,--dataset", o.dataset, "Sweep CSV");
    fit.app->add_option("--law", o.law, "Scaling law: pf or ad");
    fit.app->add_option("--floor", o.floor, "Smallest excess kept");
    fit.app->add_option("--ceiling", o.ceiling, "Largest excess kept");
    fit.app->add_option("--fit-p-min", o.fit_p_min, "Smallest rate kept");
    fit.app->add_option("--fit-p-max", o.fit_p_max, "Largest rate kept");
    fit.app->add_option("--n-min", o.n_min, "Smallest register kept");
    fit.app->add_flag("--intercept", o.intercept, "Fit a free constant");
    fit.app->add_flag("--magnitude", o.magnitude, "Fit |excess| instead of the signed excess");
    fit.common();

    auto cross = add("crosscheck", "Dense, MPDO and trajectory engines side by side", cmd_crosscheck);
    cross.n();
    cross.omega();
    cross.channel();
    cross.p();
    cross.iters();
    cross.chi();
    cross.cutoff();
    cross.traj();
    cross.strategy();
    cross.seed();
    cross.cut();
    cross.oe();
    cross.common();

    // Config values enter as --key=value tokens after the subcommand, unless
    // the same flag was given on the command line.
    std::vector<std::string> tokens(argv + 1, argv + argc);
    std::map<std::string, std::string> sources;
    try {
        std::optional<std::string> config_path;
        for (std::size_t i = 0; i < tokens.size(); ++i) {
            const auto name = flag_name(tokens[i]);
            if (!name) continue;
            sources[*name] = "flag --" + *name;
            if (*name != "config") continue;
            const auto eq = tokens[i].find('=');
            if (eq != std::string::npos) {
                config_path = tokens[i].substr(eq + 1);
            } else if (i + 1 < tokens.size()) {
                config_path = tokens[i + 1];
            }
        }
        if (config_path && !tokens.empty()) {
            std::vector<std::string> injected;
            for (const auto& [key, entry] : read_config(*config_path)) {
                if (sources.contains(key)) continue;
                std::string value = entry.value;
                std::erase(value, ' ');
                injected.push_back("--" + key + "=" + value);
                sources[key] = *config_path + ":" + std::to_string(entry.line);
            }
            tokens.insert(tokens.begin() + 1, injected.begin(), injected.end());
        }
        std::reverse(tokens.begin(), tokens.end());
        app.parse(tokens);
        if (cross.app->parsed() && cross.app->get_option("--n")->count() == 0) o.n = 6;
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        describe_sources(sources, err);
        return kExitValidation;
    } catch (const ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return kExitValidation;
    }

    for (const auto& [sub, handler] : commands) {
        if (!sub->parsed()) continue;
        Session session;
        session.command = sub->get_name();
        session.started = utc_now();
        try {
            fs::create_directories(o.out);
            const int code = handler(o, session, out, err);
            write_manifest(o, session);
            return code;
        } catch (const ResourceError& e) {
            err << "resource guard: " << e.what() << "\n";
            return kExitResource;
        } catch (const ValidationError& e) {
            err << "error: " << e.what() << "\n";
            describe_sources(sources, err);
            return kExitValidation;
        } catch (const DomainError& e) {
            err << "error: " << e.what() << "\n";
            describe_sources(sources, err);
            return kExitValidation;
        } catch (const FitError& e) {
            err << "fit failed: " << e.what() << "\n";
            return kExitValidation;
        } catch (const StateError& e) {
            err << "engine guard: " << e.what() << "\n";
            return kExitTolerance;
        } catch (const NumericalError& e) {
            err << "numerical failure: " << e.what() << "\n";
            return kExitTolerance;
        }
    }
    return kExitValidation;
}

}  // namespace grover::cli
