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

#include "grover/unraveling.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace grover {

namespace {

constexpr double kTieTolerance = 1e-14;
constexpr double kMinBranch = 1e-15;
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

void require_two_operators(const KrausChannel& channel) {
    if (channel.size() != 2) throw DomainError("mixing search needs a two-operator channel");
}

double golden_max(const std::function<double(double)>& f, double lo, double hi, int steps, double& best_x) {
    double a = lo;
    double b = hi;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    for (int i = 0; i < steps; ++i) {
        if (f1 >= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
    }
    best_x = f1 >= f2 ? x1 : x2;
    return std::max(f1, f2);
}

}  // namespace

void UnravelingStrategy::validate() const {
    if (grid_resolution < 4) throw ValidationError("grid resolution must be at least 4");
    if (refinement_iterations < 0) throw ValidationError("refinement iterations must be non-negative");
}

std::string to_string(StrategyKind kind) {
    switch (kind) {
        case StrategyKind::Naive:
            return "naive";
        case StrategyKind::MaxNonUnitarity:
            return "numu";
        case StrategyKind::GreedyEntropyMin:
            return "greedy";
    }
    return "unknown";
}

StrategyKind parse_strategy(std::string_view name) {
    if (name == "naive") return StrategyKind::Naive;
    if (name == "numu") return StrategyKind::MaxNonUnitarity;
    if (name == "greedy") return StrategyKind::GreedyEntropyMin;
    throw ValidationError("unknown strategy '" + std::string(name) + "' (expected naive, numu or greedy)");
}

Mat2 mixing_matrix(double theta, double phi) {
    const cplx e = std::polar(1.0, phi);
    Mat2 u;
    u << std::cos(theta), e * std::sin(theta), -std::conj(e) * std::sin(theta), std::cos(theta);
    return u;
}

Mat2 maximize_over_mixings(const std::function<double(const Mat2&)>& objective, const UnravelingStrategy& settings) {
    settings.validate();
    const double half_pi = kPi / 2.0;
    const int g = settings.grid_resolution;
    auto value = [&](double t, double p) { return objective(mixing_matrix(t, p)); };

    const double identity_value = value(0.0, 0.0);
    double best = identity_value;
    double best_t = 0.0;
    double best_p = 0.0;
    for (int i = 0; i < g; ++i) {
        const double t = half_pi * i / (g - 1);
        for (int j = 0; j < g; ++j) {
            const double p = 2.0 * kPi * j / g;
            const double v = value(t, p);
            if (v > best + kTieTolerance) {
                best = v;
                best_t = t;
                best_p = p;
            }
        }
    }
    if (settings.refinement_iterations > 0 && best > identity_value + kTieTolerance) {
        const double dt = half_pi / (g - 1);
        const double dp = 2.0 * kPi / g;
        double t = best_t;
        double p = best_p;
        for (int round = 0; round < 2; ++round) {
            double x = t;
            const double vt = golden_max([&](double s) { return value(s, p); }, std::max(0.0, t - dt),
                                         std::min(half_pi, t + dt), settings.refinement_iterations, x);
            if (vt > best) {
                best = vt;
                t = x;
            }
            const double vp = golden_max([&](double s) { return value(t, s); }, p - dp, p + dp,
                                         settings.refinement_iterations, x);
            if (vp > best) {
                best = vp;
                p = x;
            }
        }
        best_t = t;
        best_p = p;
    }
    if (best <= identity_value + kTieTolerance) return Mat2::Identity();
    return mixing_matrix(best_t, best_p);
}

static MatrixXc combine(const CutProjection& proj, const Mat2& k) {
    MatrixXc m = k(0, 0) * proj.blocks[0];
    m += k(0, 1) * proj.blocks[1];
    m += k(1, 0) * proj.blocks[2];
    m += k(1, 1) * proj.blocks[3];
    return m;
}

double CutProjection::probability(const Mat2& f) const {
    return weights.dot(combine(*this, f.adjoint() * f).diagonal().real());
}

double CutProjection::expected_renyi2(const KrausChannel& channel) const {
    double out = 0.0;
    for (const auto& f : channel.operators()) {
        const MatrixXc m = combine(*this, f.adjoint() * f);
        const double p = weights.dot(m.diagonal().real());
        if (p <= kMinBranch) continue;
        const double purity = weights.dot(m.cwiseAbs2() * weights) / (p * p);
        out -= p * std::log2(std::clamp(purity, kMinBranch, 1.0));
    }
    return out;
}

CutProjection project_on_cut(Mps& state, int qubit, int cut) {
    const int n = state.size();
    if (qubit < 0 || qubit >= n) throw DomainError("site out of range");
    if (cut < 1 || cut >= n) throw DomainError("cut must satisfy 1 <= cut <= n-1");
    const Mps& view = state;
    CutProjection out;
    MatrixXc reduced;
    if (qubit < cut) {
        // left isometries up to the cut; boundary states |l> on bond cut-1|cut
        state.canonicalize(cut);
        const MatrixXc c = view.site(cut).right_grouped();
        reduced = c * c.adjoint();
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                MatrixXc e = view.site(qubit).slice(x).adjoint() * view.site(qubit).slice(y);
                for (int j = qubit + 1; j < cut; ++j) {
                    const SiteTensor& a = view.site(j);
                    MatrixXc next = MatrixXc::Zero(a.right(), a.right());
                    for (Index s = 0; s < a.phys(); ++s) next += a.slice(s).adjoint() * e * a.slice(s);
                    e = std::move(next);
                }
                out.blocks[static_cast<std::size_t>(2 * x + y)] = std::move(e);
            }
    } else {
        // right isometries from the cut; boundary states |r> on bond cut-1|cut
        state.canonicalize(cut - 1);
        const MatrixXc c = view.site(cut - 1).left_grouped();
        reduced = c.transpose() * c.conjugate();
        for (int x = 0; x < 2; ++x)
            for (int y = 0; y < 2; ++y) {
                MatrixXc e = view.site(qubit).slice(x).conjugate() * view.site(qubit).slice(y).transpose();
                for (int j = qubit - 1; j >= cut; --j) {
                    const SiteTensor& b = view.site(j);
                    MatrixXc next = MatrixXc::Zero(b.left(), b.left());
                    for (Index s = 0; s < b.phys(); ++s) next += b.slice(s).conjugate() * e * b.slice(s).transpose();
                    e = std::move(next);
                }
                out.blocks[static_cast<std::size_t>(2 * x + y)] = std::move(e);
            }
    }
    const Eigen::SelfAdjointEigenSolver<MatrixXc> eig(reduced);
    const double top = std::max(eig.eigenvalues().maxCoeff(), 0.0);
    Index first = 0;
    while (first < reduced.rows() && eig.eigenvalues()(first) <= kMinBranch * top) ++first;
    const MatrixXc v = eig.eigenvectors().rightCols(reduced.rows() - first);
    out.weights = eig.eigenvalues().tail(reduced.rows() - first);
    for (auto& block : out.blocks) block = v.adjoint() * block * v;
    return out;
}

double non_unitarity(const Mat2& site_rdm, const KrausChannel& channel, NonUnitarityFunctional functional) {
    double out = 0.0;
    switch (functional) {
        case NonUnitarityFunctional::CutRenyi2:
            throw DomainError("the cut functional needs the full state");
        case NonUnitarityFunctional::KrausVariance:
            for (const auto& f : channel.operators()) {
                const Mat2 k = f.adjoint() * f;
                const double first = (site_rdm * k).trace().real();
                const double second = (site_rdm * k * k).trace().real();
                out += second - first * first;
            }
            return out;
        case NonUnitarityFunctional::OverlapDeficit:
            out = 1.0;
            for (const auto& f : channel.operators()) out -= std::norm((site_rdm * f).trace());
            return out;
    }
    return out;
}

Mat2 optimize_mixing_nonunitarity(const Mat2& site_rdm, const KrausChannel& channel,
                                  const UnravelingStrategy& settings) {
    require_two_operators(channel);
    return maximize_over_mixings(
        [&](const Mat2& u) { return non_unitarity(site_rdm, mix_channel(channel, u), settings.functional); },
        settings);
}

Mat2 optimize_mixing_nonunitarity(Mps& state, int qubit, const KrausChannel& channel, int cut,
                                  const UnravelingStrategy& settings) {
    if (settings.functional != NonUnitarityFunctional::CutRenyi2) {
        return optimize_mixing_nonunitarity(reduced_site_matrix(state, qubit), channel, settings);
    }
    require_two_operators(channel);
    const CutProjection proj = project_on_cut(state, qubit, cut);
    // F_m^dag F_m = sum_{n n'} conj(U_mn) U_mn' E_n^dag E_n'
    std::array<MatrixXc, 4> pair;
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) pair[2 * a + b] = combine(proj, channel.op(a).adjoint() * channel.op(b));
    MatrixXc m(proj.weights.size(), proj.weights.size());
    auto objective = [&](const Mat2& u) {
        double s2 = 0.0;
        for (Index row = 0; row < 2; ++row) {
            m = std::conj(u(row, 0)) * u(row, 0) * pair[0];
            m += std::conj(u(row, 0)) * u(row, 1) * pair[1];
            m += std::conj(u(row, 1)) * u(row, 0) * pair[2];
            m += std::conj(u(row, 1)) * u(row, 1) * pair[3];
            const double p = proj.weights.dot(m.diagonal().real());
            if (p <= kMinBranch) continue;
            const double purity = proj.weights.dot(m.cwiseAbs2() * proj.weights) / (p * p);
            s2 -= p * std::log2(std::clamp(purity, kMinBranch, 1.0));
        }
        return -s2;
    };
    return maximize_over_mixings(objective, settings);
}

double expected_entropy(const Mps& state, int qubit, const KrausChannel& channel, int cut) {
    double out = 0.0;
    for (const auto& f : channel.operators()) {
        Mps trial = state;
        const double p = apply_local_op(trial, qubit, f, false);
        if (p <= kMinBranch) continue;
        trial.scale(1.0 / std::sqrt(p));
        out += p * bipartite_entropy(trial, cut);
    }
    return out;
}

Mat2 optimize_mixing_entropy(const Mps& state, int qubit, const KrausChannel& channel, int cut,
                             const UnravelingStrategy& settings) {
    require_two_operators(channel);
    return maximize_over_mixings(
        [&](const Mat2& u) { return -expected_entropy(state, qubit, mix_channel(channel, u), cut); }, settings);
}

}  // namespace grover
