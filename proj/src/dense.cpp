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

#include "grover/dense.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "grover/linalg.hpp"

namespace grover {

double operator_schmidt_entropy(const Eigen::VectorXd& s, OperatorSchmidtWeights weights) {
    const double total = weights == OperatorSchmidtWeights::Normalized ? s.squaredNorm() : 1.0;
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i) w.push_back(s(i) * s(i) / total);
    return entropy_bits(w);
}

}  // namespace grover

namespace grover::dense {

namespace {

void guard(int n, int limit, const char* what) {
    if (n < 2 || n > limit) {
        throw ResourceError(std::string(what) + " supports 2 <= n <= " + std::to_string(limit) + ", got " +
                            std::to_string(n));
    }
}

void check_target(int n, const Bitstring& omega) {
    if (omega.size() != n) {
        throw DomainError("target has " + std::to_string(omega.size()) + " bits, register has " + std::to_string(n));
    }
}

void check_cut(int n, int cut) {
    if (cut < 1 || cut > n - 1) {
        throw DomainError("cut must satisfy 1 <= cut <= n-1, got " + std::to_string(cut));
    }
}

Eigen::Index bit_mask(int n, int qubit) { return Eigen::Index{1} << (n - 1 - qubit); }

// rho <- A_q rho
void apply_left(MatrixXc& rho, int n, int qubit, const Mat2& a) {
    const auto mask = bit_mask(n, qubit);
    for (Eigen::Index i = 0; i < rho.rows(); ++i) {
        if (i & mask) continue;
        const Eigen::Index j = i | mask;
        Eigen::RowVectorXcd r0 = rho.row(i);
        Eigen::RowVectorXcd r1 = rho.row(j);
        rho.row(i) = a(0, 0) * r0 + a(0, 1) * r1;
        rho.row(j) = a(1, 0) * r0 + a(1, 1) * r1;
    }
}

// rho <- rho A_q^dag
void apply_right_adjoint(MatrixXc& rho, int n, int qubit, const Mat2& a) {
    const auto mask = bit_mask(n, qubit);
    for (Eigen::Index i = 0; i < rho.cols(); ++i) {
        if (i & mask) continue;
        const Eigen::Index j = i | mask;
        VectorXc c0 = rho.col(i);
        VectorXc c1 = rho.col(j);
        rho.col(i) = std::conj(a(0, 0)) * c0 + std::conj(a(0, 1)) * c1;
        rho.col(j) = std::conj(a(1, 0)) * c0 + std::conj(a(1, 1)) * c1;
    }
}

void iterate(DenseState& state, const Bitstring& omega, IterationOrder order) {
    if (order == IterationOrder::OracleFirst) {
        apply_oracle(state, omega);
        apply_diffusion(state);
    } else {
        apply_diffusion(state);
        apply_oracle(state, omega);
    }
}

void iterate(DenseDensityMatrix& dm, const Bitstring& omega, IterationOrder order) {
    if (order == IterationOrder::OracleFirst) {
        apply_oracle(dm, omega);
        apply_diffusion(dm);
    } else {
        apply_diffusion(dm);
        apply_oracle(dm, omega);
    }
}

void apply_noise(DenseDensityMatrix& dm, const NoiseModel& noise) {
    if (const auto* ch = std::get_if<KrausChannel>(&noise)) {
        for (int q = 0; q < dm.n; ++q) apply_channel(dm, q, *ch);
    } else if (const auto* g = std::get_if<GlobalDepolarizing>(&noise)) {
        apply_depolarizing(dm, *g);
    }
}

}  // namespace

DenseDensityMatrix DenseDensityMatrix::from_state(const DenseState& state) {
    guard(state.n, kMaxDensityQubits, "dense density matrix");
    return {state.n, state.amplitudes * state.amplitudes.adjoint()};
}

DenseDensityMatrix DenseDensityMatrix::maximally_mixed(int n) {
    guard(n, kMaxDensityQubits, "dense density matrix");
    const auto dim = Eigen::Index{1} << n;
    return {n, MatrixXc::Identity(dim, dim) / static_cast<double>(dim)};
}

DenseState init_uniform(int n) {
    guard(n, kMaxStateQubits, "dense statevector");
    const auto dim = Eigen::Index{1} << n;
    return {n, VectorXc::Constant(dim, cplx(std::exp2(-0.5 * n), 0.0))};
}

DenseState basis_state(const Bitstring& bits) {
    guard(bits.size(), kMaxStateQubits, "dense statevector");
    const auto dim = Eigen::Index{1} << bits.size();
    DenseState s{bits.size(), VectorXc::Zero(dim)};
    s.amplitudes(static_cast<Eigen::Index>(bits.dense_index())) = 1.0;
    return s;
}

void apply_oracle(DenseState& state, const Bitstring& omega) {
    check_target(state.n, omega);
    state.amplitudes(static_cast<Eigen::Index>(omega.dense_index())) *= -1.0;
}

void apply_oracle(DenseDensityMatrix& dm, const Bitstring& omega) {
    check_target(dm.n, omega);
    const auto w = static_cast<Eigen::Index>(omega.dense_index());
    dm.entries.row(w) *= -1.0;
    dm.entries.col(w) *= -1.0;
}

void apply_diffusion(DenseState& state) {
    // (2|s><s| - I) v = 2 mean(v) 1 - v
    const cplx mean = state.amplitudes.mean();
    state.amplitudes = (2.0 * mean - state.amplitudes.array()).matrix();
}

void apply_diffusion(DenseDensityMatrix& dm) {
    auto& rho = dm.entries;
    const Eigen::RowVectorXcd col_means = rho.colwise().mean();
    rho = (2.0 * VectorXc::Ones(rho.rows()) * col_means - rho).eval();
    const VectorXc row_means = rho.rowwise().mean();
    rho = (2.0 * row_means * Eigen::RowVectorXcd::Ones(rho.cols()) - rho).eval();
}

void apply_single_qubit(DenseState& state, int qubit, const Mat2& op) {
    if (qubit < 0 || qubit >= state.n) throw DomainError("qubit out of range");
    const auto mask = bit_mask(state.n, qubit);
    auto& v = state.amplitudes;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i & mask) continue;
        const cplx a0 = v(i);
        const cplx a1 = v(i | mask);
        v(i) = op(0, 0) * a0 + op(0, 1) * a1;
        v(i | mask) = op(1, 0) * a0 + op(1, 1) * a1;
    }
}

void apply_channel(DenseDensityMatrix& dm, int qubit, const KrausChannel& channel) {
    if (qubit < 0 || qubit >= dm.n) throw DomainError("qubit out of range");
    MatrixXc out = MatrixXc::Zero(dm.entries.rows(), dm.entries.cols());
    for (const auto& f : channel.operators()) {
        MatrixXc term = dm.entries;
        apply_left(term, dm.n, qubit, f);
        apply_right_adjoint(term, dm.n, qubit, f);
        out += term;
    }
    dm.entries = std::move(out);
}

void apply_depolarizing(DenseDensityMatrix& dm, const GlobalDepolarizing& noise) {
    dm.entries = apply_depolarizing_dense(dm.entries, noise);
}

double success_probability(const DenseState& state, const Bitstring& omega) {
    check_target(state.n, omega);
    return std::norm(state.amplitudes(static_cast<Eigen::Index>(omega.dense_index())));
}

double success_probability(const DenseDensityMatrix& dm, const Bitstring& omega) {
    check_target(dm.n, omega);
    const auto w = static_cast<Eigen::Index>(omega.dense_index());
    return dm.entries(w, w).real();
}

MatrixXc reduced_density_matrix(const DenseState& state, int cut) {
    check_cut(state.n, cut);
    const auto left = Eigen::Index{1} << cut;
    const auto right = Eigen::Index{1} << (state.n - cut);
    // Column-major map: element (b, a) is amplitude of |a>_A |b>_B.
    Eigen::Map<const MatrixXc> psi(state.amplitudes.data(), right, left);
    return psi.transpose() * psi.conjugate();
}

MatrixXc reduced_density_matrix(const DenseDensityMatrix& dm, int cut) {
    check_cut(dm.n, cut);
    const auto left = Eigen::Index{1} << cut;
    const auto right = Eigen::Index{1} << (dm.n - cut);
    MatrixXc out = MatrixXc::Zero(left, left);
    for (Eigen::Index a = 0; a < left; ++a)
        for (Eigen::Index c = 0; c < left; ++c)
            for (Eigen::Index b = 0; b < right; ++b) out(a, c) += dm.entries(a * right + b, c * right + b);
    return out;
}

std::vector<double> spectrum(const MatrixXc& hermitian) {
    Eigen::SelfAdjointEigenSolver<MatrixXc> solver(hermitian, Eigen::EigenvaluesOnly);
    const auto& ev = solver.eigenvalues();
    std::vector<double> out(ev.data(), ev.data() + ev.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

double entropy_bits(const MatrixXc& rdm) {
    const auto ev = spectrum(rdm);
    return grover::entropy_bits(ev);
}

double entanglement_entropy(const DenseState& state, int cut) {
    check_cut(state.n, cut);
    const auto left = Eigen::Index{1} << cut;
    const auto right = Eigen::Index{1} << (state.n - cut);
    Eigen::Map<const MatrixXc> psi(state.amplitudes.data(), right, left);
    const Eigen::VectorXd sv = singular_values(psi);
    std::vector<double> probs;
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
        const double s = sv(i);
        probs.push_back(s * s);
    }
    return grover::entropy_bits(probs);
}

double operator_entanglement(const DenseDensityMatrix& dm, int cut, OperatorSchmidtWeights weights) {
    check_cut(dm.n, cut);
    const auto dl = Eigen::Index{1} << cut;
    const auto dr = Eigen::Index{1} << (dm.n - cut);
    MatrixXc reshaped(dl * dl, dr * dr);
    for (Eigen::Index ia = 0; ia < dl; ++ia)
        for (Eigen::Index ja = 0; ja < dl; ++ja)
            for (Eigen::Index ib = 0; ib < dr; ++ib)
                for (Eigen::Index jb = 0; jb < dr; ++jb)
                    reshaped(ia * dl + ja, ib * dr + jb) = dm.entries(ia * dr + ib, ja * dr + jb);
    return operator_schmidt_entropy(singular_values(reshaped), weights);
}

RunTrace run_grover(int n, const Bitstring& omega, const NoiseModel& noise, long iterations,
                    const RunOptions& options) {
    check_target(n, omega);
    if (iterations < 0) throw DomainError("iteration count must be non-negative");
    const int cut = n / 2;
    RunTrace trace;
    trace.records.reserve(static_cast<std::size_t>(iterations) + 1);

    if (std::holds_alternative<std::monostate>(noise)) {
        guard(n, kMaxStateQubits, "dense statevector");
        auto state = init_uniform(n);
        for (long k = 0; k <= iterations; ++k) {
            if (k > 0) iterate(state, omega, options.order);
            trace.records.push_back({.k = k,
                                     .success_probability = success_probability(state, omega),
                                     .entropy = entanglement_entropy(state, cut)});
        }
        return trace;
    }

    guard(n, kMaxDensityQubits, "dense density matrix");
    auto dm = DenseDensityMatrix::from_state(init_uniform(n));
    if (options.noise_after_preparation) apply_noise(dm, noise);
    for (long k = 0; k <= iterations; ++k) {
        if (k > 0) {
            iterate(dm, omega, options.order);
            apply_noise(dm, noise);
        }
        trace.records.push_back({.k = k,
                                 .success_probability = success_probability(dm, omega),
                                 .entropy = operator_entanglement(dm, cut, options.oe_weights),
                                 .trace_drift = std::abs(dm.entries.trace().real() - 1.0)});
    }
    return trace;
}

}  // namespace grover::dense
