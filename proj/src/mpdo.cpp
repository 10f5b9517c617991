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

#include "grover/mpdo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include <unsupported/Eigen/KroneckerProduct>

namespace grover {

namespace {

constexpr double kPhysicalSlack = 1e-8;

Index vec_index(Index i, Index j, int n) {
    Index out = 0;
    for (int q = 0; q < n; ++q) {
        const int shift = n - 1 - q;
        out = 4 * out + 2 * ((i >> shift) & 1) + ((j >> shift) & 1);
    }
    return out;
}

VectorXc trace_covector() {
    VectorXc t = VectorXc::Zero(4);
    t(0) = t(3) = 1.0;
    return t;
}

/// Covector v with sum_s v[s] rho_s = Tr(rho A) on one site.
VectorXc expectation_covector(const MatrixXc& a) {
    VectorXc v(4);
    for (Index i = 0; i < 2; ++i)
        for (Index j = 0; j < 2; ++j) v(2 * i + j) = a(j, i);
    return v;
}

void apply_noise(Mpdo& rho, const NoiseModel& noise) {
    if (const auto* ch = std::get_if<KrausChannel>(&noise)) {
        for (int q = 0; q < rho.size(); ++q) apply_channel_local(rho, q, *ch);
    }
}

}  // namespace

Mpdo::Mpdo(Mps vectorized) : vec_(std::move(vectorized)) {
    for (int i = 0; i < vec_.size(); ++i) {
        if (vec_.phys_dim(i) != 4) throw DomainError("MPDO sites must have dimension 4");
    }
}

Mpdo Mpdo::from_pure_product(std::span<const VectorXc> local_vectors) {
    std::vector<SiteTensor> sites;
    sites.reserve(local_vectors.size());
    for (const auto& v : local_vectors) {
        if (v.size() != 2 || std::abs(v.squaredNorm() - 1.0) > 1e-12) {
            throw DomainError("local vectors must be normalized qubit states");
        }
        SiteTensor a(1, 4, 1);
        for (Index i = 0; i < 2; ++i)
            for (Index j = 0; j < 2; ++j) a(0, 2 * i + j, 0) = v(i) * std::conj(v(j));
        sites.push_back(std::move(a));
    }
    return Mpdo(Mps(std::move(sites)));
}

Mpdo Mpdo::from_dense(const MatrixXc& rho, int n) {
    const Index dim = Index{1} << n;
    if (rho.rows() != dim || rho.cols() != dim) throw DomainError("operator dimension does not match qubit count");
    VectorXc v(dim * dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) v(vec_index(i, j, n)) = rho(i, j);
    return Mpdo(Mps::from_dense(v, n, 4));
}

MatrixXc Mpdo::to_dense() const {
    const int n = size();
    const Index dim = Index{1} << n;
    const VectorXc v = vec_.to_dense();
    MatrixXc rho(dim, dim);
    for (Index i = 0; i < dim; ++i)
        for (Index j = 0; j < dim; ++j) rho(i, j) = v(vec_index(i, j, n));
    return rho;
}

double Mpdo::renormalize_trace() {
    const double raw = trace(*this);
    if (!(raw > 0.0)) throw StateError("density operator lost its trace");
    trace_log_.push_back(raw);
    vec_.scale(1.0 / raw);
    return std::abs(raw - 1.0);
}

Mpo lift_unitary_mpo(const Mpo& unitary) {
    std::vector<MpoSite> sites;
    sites.reserve(static_cast<std::size_t>(unitary.size()));
    for (int i = 0; i < unitary.size(); ++i) {
        const auto& w = unitary.site(i);
        if (w.phys_out() != 2 || w.phys_in() != 2) throw DomainError("only qubit MPOs can be lifted");
        const Index bl = w.left();
        const Index br = w.right();
        MpoSite lifted(bl * bl, br * br, 4, 4);
        for (Index a1 = 0; a1 < bl; ++a1)
            for (Index a2 = 0; a2 < bl; ++a2)
                for (Index b1 = 0; b1 < br; ++b1)
                    for (Index b2 = 0; b2 < br; ++b2) {
                        lifted.block(a1 * bl + a2, b1 * br + b2) =
                            Eigen::kroneckerProduct(w.block(a1, b1), w.block(a2, b2).conjugate());
                    }
        sites.push_back(std::move(lifted));
    }
    return Mpo(std::move(sites), unitary.label() + "_lifted");
}

double apply_superoperator(Mpdo& rho, const Mpo& superoperator, const TruncationPolicy& policy) {
    TruncationPolicy p = policy;
    p.renormalize = false;
    rho.vectorized() = apply_mpo(std::move(rho.vectorized()), superoperator, p);
    return rho.renormalize_trace();
}

void apply_channel_local(Mpdo& rho, int qubit, const KrausChannel& channel) {
    if (qubit < 0 || qubit >= rho.size()) throw DomainError("qubit out of range");
    const Mat4 s = local_superoperator(channel);
    apply_local_op(rho.vectorized(), qubit, s, false);
}

double trace(const Mpdo& rho) {
    const std::vector<VectorXc> vs(static_cast<std::size_t>(rho.size()), trace_covector());
    return rho.vectorized().contract_with_product(vs).real();
}

double success_probability(const Mpdo& rho, const Bitstring& omega) {
    if (static_cast<int>(omega.size()) != rho.size()) throw DomainError("target length does not match qubit count");
    std::vector<VectorXc> vs;
    vs.reserve(omega.size());
    for (int q = 0; q < omega.size(); ++q) vs.push_back(VectorXc::Unit(4, 3 * omega[q]));
    return rho.vectorized().contract_with_product(vs).real();
}

double purity(Mpdo& rho) { return rho.vectorized().squared_norm(); }

double hermiticity_residual(const Mpdo& rho, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    double worst = 0.0;
    std::vector<VectorXc> direct(static_cast<std::size_t>(rho.size()));
    std::vector<VectorXc> adjoint(direct.size());
    for (int t = 0; t < samples; ++t) {
        for (std::size_t q = 0; q < direct.size(); ++q) {
            MatrixXc a(2, 2);
            for (Index k = 0; k < 4; ++k) a(k / 2, k % 2) = cplx(g(rng), g(rng));
            a *= std::sqrt(2.0) / a.norm();
            direct[q] = expectation_covector(a);
            adjoint[q] = expectation_covector(a.adjoint());
        }
        const cplx e = rho.vectorized().contract_with_product(direct);
        const cplx f = rho.vectorized().contract_with_product(adjoint);
        worst = std::max(worst, std::abs(e - std::conj(f)));
    }
    return worst;
}

double operator_entanglement(Mpdo& rho, int cut, OperatorSchmidtWeights weights) {
    return operator_schmidt_entropy(rho.vectorized().schmidt_values(cut), weights);
}

RunTrace run_grover_mpdo(int n, const Bitstring& omega, const NoiseModel& noise, long iterations,
                         const TruncationPolicy& policy, const RunOptions& options) {
    if (n < 2) throw DomainError("at least two qubits are required");
    if (static_cast<int>(omega.size()) != n) throw DomainError("target length does not match qubit count");
    if (iterations < 0) throw DomainError("iteration count must be non-negative");
    if (std::holds_alternative<GlobalDepolarizing>(noise)) {
        throw ValidationError("the MPDO engine supports local Kraus channels only");
    }
    policy.validate();
    if (policy.chi_max < 2) throw ValidationError("the MPDO engine needs chi_max >= 2");

    const Mpo oracle = lift_unitary_mpo(build_oracle_mpo(omega));
    const Mpo diffusion = lift_unitary_mpo(build_diffusion_mpo(n));
    const Mpo& first = options.order == IterationOrder::OracleFirst ? oracle : diffusion;
    const Mpo& second = options.order == IterationOrder::OracleFirst ? diffusion : oracle;

    const std::vector<VectorXc> plus(static_cast<std::size_t>(n), VectorXc::Constant(2, 1.0 / std::sqrt(2.0)));
    Mpdo rho = Mpdo::from_pure_product(plus);
    if (options.noise_after_preparation) apply_noise(rho, noise);

    const int cut = n / 2;
    RunTrace out;
    out.records.reserve(static_cast<std::size_t>(iterations) + 1);
    for (long k = 0; k <= iterations; ++k) {
        double drift = 0.0;
        if (k > 0) {
            drift = std::max(drift, apply_superoperator(rho, first, policy));
            drift = std::max(drift, apply_superoperator(rho, second, policy));
            apply_noise(rho, noise);
            if (drift > kMaxTraceDrift) {
                throw StateError("MPDO trace drift " + std::to_string(drift) + " at iteration " + std::to_string(k) +
                                 " exceeds tolerance; raise chi_max");
            }
        }
        const double p = success_probability(rho, omega);
        if (p < -kPhysicalSlack || p > 1.0 + kPhysicalSlack || purity(rho) > 1.0 + kPhysicalSlack) {
            throw StateError("MPDO left the physical region at iteration " + std::to_string(k));
        }
        out.records.push_back({.k = k,
                               .success_probability = p,
                               .entropy = operator_entanglement(rho, cut, options.oe_weights),
                               .trace_drift = drift,
                               .discarded_weight = rho.discarded_weight(),
                               .max_bond = static_cast<std::size_t>(rho.vectorized().max_bond())});
    }
    return out;
}

}  // namespace grover
