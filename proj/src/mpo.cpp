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
#include <string>

#include "grover/tensornet.hpp"

#include <unsupported/Eigen/KroneckerProduct>

namespace grover {

MpoSite::MpoSite(Index left, Index right, Index phys_out, Index phys_in)
    : left_(left),
      right_(right),
      out_(phys_out),
      in_(phys_in),
      blocks_(static_cast<std::size_t>(left * right), MatrixXc::Zero(phys_out, phys_in)) {}

Mpo::Mpo(std::vector<MpoSite> sites, std::string label) : sites_(std::move(sites)), label_(std::move(label)) {
    if (sites_.empty()) throw DomainError("an MPO needs at least one site");
    if (sites_.front().left() != 1 || sites_.back().right() != 1) {
        throw DomainError("MPO boundary bonds must have dimension 1");
    }
    for (std::size_t i = 0; i + 1 < sites_.size(); ++i) {
        if (sites_[i].right() != sites_[i + 1].left()) throw DomainError("MPO bond dimension mismatch");
    }
}

Mpo Mpo::identity(int n, Index phys) {
    std::vector<MpoSite> sites;
    for (int i = 0; i < n; ++i) {
        MpoSite w(1, 1, phys, phys);
        w.block(0, 0) = MatrixXc::Identity(phys, phys);
        sites.push_back(std::move(w));
    }
    return Mpo(std::move(sites), "identity");
}

Index Mpo::max_bond() const {
    Index m = 1;
    for (const auto& s : sites_) m = std::max(m, s.right());
    return m;
}

MatrixXc Mpo::to_dense() const {
    // acc(w) holds the partial operator for every open bond index w.
    std::vector<MatrixXc> acc{MatrixXc::Ones(1, 1)};
    for (const auto& w : sites_) {
        std::vector<MatrixXc> next(static_cast<std::size_t>(w.right()));
        for (Index v = 0; v < w.right(); ++v) {
            const Index rows = acc[0].rows() * w.phys_out();
            const Index cols = acc[0].cols() * w.phys_in();
            MatrixXc sum = MatrixXc::Zero(rows, cols);
            for (Index u = 0; u < w.left(); ++u) {
                sum += Eigen::kroneckerProduct(acc[static_cast<std::size_t>(u)], w.block(u, v)).eval();
            }
            next[static_cast<std::size_t>(v)] = std::move(sum);
        }
        acc = std::move(next);
    }
    return acc[0];
}

namespace {

Mpo two_term_mpo(const std::vector<MatrixXc>& first, const std::vector<MatrixXc>& second, cplx c1, cplx c2,
                 std::string label) {
    // c1 (x)_j first_j + c2 (x)_j second_j with both coefficients on the last site.
    const int n = static_cast<int>(first.size());
    std::vector<MpoSite> sites;
    if (n == 1) {
        MpoSite w(1, 1, 2, 2);
        w.block(0, 0) = c1 * first[0] + c2 * second[0];
        sites.push_back(std::move(w));
        return Mpo(std::move(sites), std::move(label));
    }
    for (int j = 0; j < n; ++j) {
        const bool is_first = j == 0;
        const bool is_last = j == n - 1;
        MpoSite w(is_first ? 1 : 2, is_last ? 1 : 2, 2, 2);
        const auto& a = first[static_cast<std::size_t>(j)];
        const auto& b = second[static_cast<std::size_t>(j)];
        if (is_first) {
            w.block(0, 0) = a;
            w.block(0, 1) = b;
        } else if (is_last) {
            w.block(0, 0) = c1 * a;
            w.block(1, 0) = c2 * b;
        } else {
            w.block(0, 0) = a;
            w.block(1, 1) = b;
        }
        sites.push_back(std::move(w));
    }
    return Mpo(std::move(sites), std::move(label));
}

}  // namespace

Mpo build_oracle_mpo(const Bitstring& omega) {
    if (omega.empty()) throw DomainError("oracle target must be non-empty");
    std::vector<MatrixXc> ids;
    std::vector<MatrixXc> projectors;
    for (int j = 0; j < omega.size(); ++j) {
        ids.push_back(MatrixXc::Identity(2, 2));
        MatrixXc p = MatrixXc::Zero(2, 2);
        p(omega[j], omega[j]) = 1.0;
        projectors.push_back(std::move(p));
    }
    return two_term_mpo(ids, projectors, 1.0, -2.0, "oracle");
}

Mpo build_diffusion_mpo(int n) {
    if (n < 2) throw DomainError("diffusion needs n >= 2 qubits");
    std::vector<MatrixXc> ids(static_cast<std::size_t>(n), MatrixXc::Identity(2, 2));
    std::vector<MatrixXc> plus(static_cast<std::size_t>(n), MatrixXc::Constant(2, 2, 0.5));
    return two_term_mpo(ids, plus, -1.0, 2.0, "diffusion");
}

}  // namespace grover
