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
#include <cmath>
#include <string>

#include "grover/linalg.hpp"
#include "grover/tensornet.hpp"

namespace grover {

void TruncationPolicy::validate() const {
    if (chi_max < 1) throw ValidationError("chi_max must be at least 1");
    if (!(sv_cutoff >= 0.0)) throw ValidationError("sv_cutoff must be non-negative");
}

SiteTensor::SiteTensor(Index left, Index phys, Index right)
    : left_(left), phys_(phys), right_(right), data_(VectorXc::Zero(left * phys * right)) {}

SiteTensor SiteTensor::from_left_grouped(const MatrixXc& m, Index phys) {
    SiteTensor t(m.rows() / phys, phys, m.cols());
    t.left_grouped() = m;
    return t;
}

SiteTensor SiteTensor::from_right_grouped(const MatrixXc& m, Index phys) {
    SiteTensor t(m.rows(), phys, m.cols() / phys);
    t.right_grouped() = m;
    return t;
}

Mps::Mps(std::vector<SiteTensor> sites) : sites_(std::move(sites)) {
    if (sites_.empty()) throw DomainError("an MPS needs at least one site");
    if (sites_.front().left() != 1 || sites_.back().right() != 1) {
        throw DomainError("boundary bonds must have dimension 1");
    }
    for (std::size_t i = 0; i + 1 < sites_.size(); ++i) {
        if (sites_[i].right() != sites_[i + 1].left()) throw DomainError("bond dimension mismatch");
    }
}

Mps Mps::from_product(std::span<const VectorXc> local_vectors) {
    std::vector<SiteTensor> sites;
    sites.reserve(local_vectors.size());
    for (const auto& v : local_vectors) {
        if (std::abs(v.squaredNorm() - 1.0) > 1e-12) {
            throw DomainError("local vectors must be normalized");
        }
        SiteTensor t(1, v.size(), 1);
        for (Index s = 0; s < v.size(); ++s) t(0, s, 0) = v(s);
        sites.push_back(std::move(t));
    }
    Mps out(std::move(sites));
    out.center_ = 0;
    return out;
}

Mps Mps::from_dense(const VectorXc& amplitudes, int n, Index phys) {
    Index remaining = amplitudes.size();
    std::vector<SiteTensor> sites;
    // Row-major reshape: leftmost site is the slowest index.
    MatrixXc rest = amplitudes.transpose();  // 1 x dim
    for (int i = 0; i < n - 1; ++i) {
        remaining /= phys;
        const Index left = rest.rows();
        // rest is left x (phys * remaining) with phys the slower column index.
        MatrixXc grouped(left * phys, remaining);
        for (Index l = 0; l < left; ++l)
            for (Index s = 0; s < phys; ++s) grouped.row(l + left * s) = rest.block(l, s * remaining, 1, remaining);
        ThinSvd svd = thin_svd(grouped);
        sites.push_back(SiteTensor::from_left_grouped(svd.u, phys));
        rest = svd.s.asDiagonal() * svd.v.adjoint();
    }
    sites.push_back(SiteTensor::from_right_grouped(rest, phys));
    Mps out(std::move(sites));
    out.center_ = n - 1;
    return out;
}

SiteTensor& Mps::site(int i) {
    center_.reset();
    return sites_[static_cast<std::size_t>(i)];
}

SiteTensor& Mps::center_site() {
    if (!center_) canonicalize(0);
    return sites_[static_cast<std::size_t>(*center_)];
}

std::vector<Index> Mps::bond_dims() const {
    std::vector<Index> dims;
    for (std::size_t i = 0; i + 1 < sites_.size(); ++i) dims.push_back(sites_[i].right());
    return dims;
}

Index Mps::max_bond() const {
    Index m = 1;
    for (const auto& s : sites_) m = std::max(m, s.right());
    return m;
}

void Mps::move_center_right(int from) {
    auto& a = sites_[static_cast<std::size_t>(from)];
    auto& b = sites_[static_cast<std::size_t>(from + 1)];
    auto qr = thin_qr(a.left_grouped());
    const Index phys = a.phys();
    a = SiteTensor::from_left_grouped(qr.q, phys);
    MatrixXc next = qr.r * b.right_grouped();
    b = SiteTensor::from_right_grouped(next, b.phys());
}

void Mps::move_center_left(int from) {
    auto& a = sites_[static_cast<std::size_t>(from)];
    auto& b = sites_[static_cast<std::size_t>(from - 1)];
    // a = L Q with Q having orthonormal rows: QR of the adjoint.
    auto qr = thin_qr(a.right_grouped().adjoint());
    const Index phys = a.phys();
    a = SiteTensor::from_right_grouped(qr.q.adjoint(), phys);
    MatrixXc prev = b.left_grouped() * qr.r.adjoint();
    b = SiteTensor::from_left_grouped(prev, b.phys());
}

void Mps::canonicalize(int target) {
    if (target < 0 || target >= size()) throw DomainError("canonical center out of range");
    if (!center_) {
        for (int i = 0; i < target; ++i) move_center_right(i);
        for (int i = size() - 1; i > target; --i) move_center_left(i);
    } else {
        for (int i = *center_; i < target; ++i) move_center_right(i);
        for (int i = *center_; i > target; --i) move_center_left(i);
    }
    center_ = target;
}

double Mps::squared_norm() {
    if (!center_) canonicalize(0);
    return sites_[static_cast<std::size_t>(*center_)].squared_norm();
}

void Mps::normalize() {
    const double nrm = std::sqrt(squared_norm());
    if (nrm == 0.0) throw NumericalError("cannot normalize a zero state");
    sites_[static_cast<std::size_t>(*center_)].scale(1.0 / nrm);
}

void Mps::scale(cplx factor) {
    const int at = center_.value_or(0);
    sites_[static_cast<std::size_t>(at)].scale(factor);
}

VectorXc Mps::to_dense() const {
    // rows: prefix configurations, cols: open right bond
    MatrixXc acc = MatrixXc::Ones(1, 1);
    for (const auto& a : sites_) {
        const Index d = a.phys();
        MatrixXc next(acc.rows() * d, a.right());
        for (Index p = 0; p < acc.rows(); ++p)
            for (Index s = 0; s < d; ++s) next.row(p * d + s) = acc.row(p) * a.slice(s);
        acc = std::move(next);
    }
    return acc.col(0);
}

cplx Mps::overlap(const Mps& other) const {
    if (other.size() != size()) throw DomainError("overlap of chains with different lengths");
    MatrixXc env = MatrixXc::Ones(1, 1);
    for (int i = 0; i < size(); ++i) {
        const auto& a = site(i);
        const auto& b = other.site(i);
        MatrixXc next = MatrixXc::Zero(a.right(), b.right());
        for (Index s = 0; s < a.phys(); ++s) next += a.slice(s).adjoint() * env * b.slice(s);
        env = std::move(next);
    }
    return env(0, 0);
}

cplx Mps::contract_with_product(std::span<const VectorXc> site_vectors) const {
    if (static_cast<int>(site_vectors.size()) != size()) throw DomainError("one vector per site required");
    Eigen::RowVectorXcd env = Eigen::RowVectorXcd::Ones(1);
    for (int i = 0; i < size(); ++i) {
        const auto& a = site(i);
        const auto& v = site_vectors[static_cast<std::size_t>(i)];
        const Index left = a.left();
        Eigen::RowVectorXcd next = Eigen::RowVectorXcd::Zero(a.right());
        const auto grouped = a.left_grouped();
        for (Index s = 0; s < a.phys(); ++s) {
            if (v(s) == cplx(0.0)) continue;
            next += v(s) * (env * grouped.middleRows(s * left, left));
        }
        env = std::move(next);
    }
    return env(0);
}

Eigen::VectorXd Mps::schmidt_values(int cut) {
    if (cut < 1 || cut >= size()) throw DomainError("cut must satisfy 1 <= cut <= n-1");
    canonicalize(cut);
    return singular_values(sites_[static_cast<std::size_t>(cut)].right_grouped());
}

void Mps::set_sites(std::vector<SiteTensor> sites, std::optional<int> center) {
    sites_ = std::move(sites);
    center_ = center;
}

double apply_local_op(Mps& state, int site, const MatrixXc& op, bool renormalize) {
    if (site < 0 || site >= state.size()) throw DomainError("site out of range");
    state.canonicalize(site);
    auto& a = state.center_site();
    const Index d = a.phys();
    if (op.rows() != d || op.cols() != d) throw DomainError("local operator dimension mismatch");
    SiteTensor out(a.left(), d, a.right());
    auto dst = out.left_grouped();
    const auto src = a.left_grouped();
    const Index left = a.left();
    for (Index t = 0; t < d; ++t)
        for (Index s = 0; s < d; ++s)
            if (op(t, s) != cplx(0.0)) dst.middleRows(t * left, left) += op(t, s) * src.middleRows(s * left, left);
    a = std::move(out);
    const double weight = a.squared_norm();
    if (renormalize) {
        if (!(weight > 1e-300)) throw ImpossibleOutcome("local operator annihilates the state");
        a.scale(1.0 / std::sqrt(weight));
    }
    return weight;
}

double bipartite_entropy(Mps& state, int cut) {
    const Eigen::VectorXd sv = state.schmidt_values(cut);
    const double total = sv.squaredNorm();
    std::vector<double> weights;
    weights.reserve(static_cast<std::size_t>(sv.size()));
    for (Index i = 0; i < sv.size(); ++i) weights.push_back(sv(i) * sv(i) / total);
    return entropy_bits(weights);
}

MatrixXc reduced_site_matrix(Mps& state, int site) {
    state.canonicalize(site);
    const auto& a = state.center_site();
    const Index d = a.phys();
    const Index left = a.left();
    const auto g = a.left_grouped();
    MatrixXc rho(d, d);
    for (Index s = 0; s < d; ++s)
        for (Index t = 0; t <= s; ++t) {
            // sum_{l,r} A[l,s,r] conj(A[l,t,r])
            const cplx v = (g.middleRows(t * left, left).conjugate().cwiseProduct(g.middleRows(s * left, left))).sum();
            rho(s, t) = v;
            rho(t, s) = std::conj(v);
        }
    return rho;
}

cplx local_expectation(Mps& state, int site, const MatrixXc& op) {
    const MatrixXc rho = reduced_site_matrix(state, site);
    if (op.rows() != rho.rows() || op.cols() != rho.cols()) throw DomainError("local operator dimension mismatch");
    return (op * rho).trace();
}

Mps apply_mpo(Mps state, const Mpo& op, const TruncationPolicy& policy) {
    policy.validate();
    const int n = state.size();
    if (op.size() != n) throw DomainError("MPO and MPS lengths differ");

    // Exact contraction: bond (l, w) -> l + L w.
    std::vector<SiteTensor> sites;
    sites.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const auto& a = state.site(i);
        const auto& w = op.site(i);
        if (w.phys_in() != a.phys()) throw DomainError("MPO input dimension mismatch");
        const Index left = a.left();
        const Index right = a.right();
        const Index new_left = left * w.left();
        SiteTensor b(new_left, w.phys_out(), right * w.right());
        auto dst = b.left_grouped();
        const auto src = a.left_grouped();
        for (Index wl = 0; wl < w.left(); ++wl)
            for (Index wr = 0; wr < w.right(); ++wr) {
                const auto& blk = w.block(wl, wr);
                for (Index t = 0; t < w.phys_out(); ++t)
                    for (Index s = 0; s < w.phys_in(); ++s) {
                        const cplx c = blk(t, s);
                        if (c == cplx(0.0)) continue;
                        dst.block(t * new_left + wl * left, wr * right, left, right) +=
                            c * src.middleRows(s * left, left);
                    }
            }
        sites.push_back(std::move(b));
    }

    // Left-to-right orthogonalization.
    for (int i = 0; i + 1 < n; ++i) {
        auto& a = sites[static_cast<std::size_t>(i)];
        auto& b = sites[static_cast<std::size_t>(i + 1)];
        auto qr = thin_qr(a.left_grouped());
        a = SiteTensor::from_left_grouped(qr.q, a.phys());
        b = SiteTensor::from_right_grouped(qr.r * b.right_grouped(), b.phys());
    }

    // Right-to-left truncating sweep.
    double discarded = 0.0;
    for (int i = n - 1; i > 0; --i) {
        auto& a = sites[static_cast<std::size_t>(i)];
        auto& prev = sites[static_cast<std::size_t>(i - 1)];
        const ThinSvd svd = thin_svd(a.right_grouped());
        const Eigen::VectorXd& sv = svd.s;
        if (sv.size() == 0 || sv(0) == 0.0) throw NumericalError("MPO application produced a zero state");
        const double threshold = policy.sv_cutoff * sv(0);
        Index keep = 0;
        while (keep < sv.size() && static_cast<std::size_t>(keep) < policy.chi_max && sv(keep) > threshold) ++keep;
        keep = std::max<Index>(keep, 1);
        const double total = sv.squaredNorm();
        discarded += sv.tail(sv.size() - keep).squaredNorm() / total;
        a = SiteTensor::from_right_grouped(svd.v.leftCols(keep).adjoint(), a.phys());
        MatrixXc us = svd.u.leftCols(keep) * sv.head(keep).asDiagonal();
        prev = SiteTensor::from_left_grouped(prev.left_grouped() * us, prev.phys());
    }

    state.set_sites(std::move(sites), 0);
    state.add_discarded_weight(discarded);
    if (policy.renormalize) state.normalize();
    return state;
}

}  // namespace grover
