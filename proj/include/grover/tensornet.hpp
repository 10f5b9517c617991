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

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grover/common.hpp"

namespace grover {

struct TruncationPolicy {
    std::size_t chi_max = 64;
    /// Singular values below sv_cutoff * (largest singular value) are dropped.
    double sv_cutoff = 1e-12;
    bool renormalize = true;

    void validate() const;

    /// No truncation beyond exact zeros.
    static TruncationPolicy exact() { return {std::numeric_limits<std::size_t>::max(), 0.0, true}; }
};

/// Rank-3 tensor (left bond, physical, right bond). The left index runs
/// fastest, so the (left*phys) x right and left x (phys*right) matrix
/// groupings are both views of the same column-major buffer.
class SiteTensor {
   public:
    SiteTensor() = default;
    SiteTensor(Index left, Index phys, Index right);

    static SiteTensor from_left_grouped(const MatrixXc& m, Index phys);
    static SiteTensor from_right_grouped(const MatrixXc& m, Index phys);

    Index left() const { return left_; }
    Index phys() const { return phys_; }
    Index right() const { return right_; }

    Eigen::Map<MatrixXc> left_grouped() { return {data_.data(), left_ * phys_, right_}; }
    Eigen::Map<const MatrixXc> left_grouped() const { return {data_.data(), left_ * phys_, right_}; }
    Eigen::Map<MatrixXc> right_grouped() { return {data_.data(), left_, phys_ * right_}; }
    Eigen::Map<const MatrixXc> right_grouped() const { return {data_.data(), left_, phys_ * right_}; }

    /// left x right matrix for physical index s.
    MatrixXc slice(Index s) const { return left_grouped().middleRows(s * left_, left_); }

    cplx& operator()(Index l, Index s, Index r) { return data_(l + left_ * (s + phys_ * r)); }
    cplx operator()(Index l, Index s, Index r) const { return data_(l + left_ * (s + phys_ * r)); }

    void scale(cplx factor) { data_ *= factor; }
    double squared_norm() const { return data_.squaredNorm(); }

   private:
    Index left_ = 0;
    Index phys_ = 0;
    Index right_ = 0;
    VectorXc data_;
};

/// Matrix-product state with open boundaries and arbitrary local dimension
/// (2 for qubit registers, 4 for vectorized density operators).
///
/// The canonical center is tracked lazily: when set to c, every site left of
/// c is a left isometry and every site right of c a right isometry. Queries
/// that need the center move it; writes through site() clear it.
class Mps {
   public:
    Mps() = default;
    explicit Mps(std::vector<SiteTensor> sites);

    /// Product state from normalized local vectors (DomainError otherwise).
    static Mps from_product(std::span<const VectorXc> local_vectors);
    /// Exact decomposition of a dense vector with site 0 most significant.
    static Mps from_dense(const VectorXc& amplitudes, int sites, Index phys);

    int size() const { return static_cast<int>(sites_.size()); }
    Index phys_dim(int site) const { return sites_[static_cast<std::size_t>(site)].phys(); }
    const SiteTensor& site(int i) const { return sites_[static_cast<std::size_t>(i)]; }
    /// Mutable access; invalidates the canonical center.
    SiteTensor& site(int i);
    /// Mutable access to the center site without dropping canonical form.
    SiteTensor& center_site();

    std::vector<Index> bond_dims() const;
    Index max_bond() const;
    std::optional<int> center() const { return center_; }
    double discarded_weight() const { return discarded_weight_; }

    /// Brings the state into mixed-canonical form around `site`.
    void canonicalize(int site);

    double squared_norm();
    void normalize();
    void scale(cplx factor);

    VectorXc to_dense() const;
    /// <this|other>
    cplx overlap(const Mps& other) const;
    /// sum_s prod_j v_j[s_j] A_j^{s_j}; no conjugation.
    cplx contract_with_product(std::span<const VectorXc> site_vectors) const;

    /// Schmidt values across the bond between sites cut-1 and cut.
    Eigen::VectorXd schmidt_values(int cut);

    /// Replaces the tensors after a whole-chain update (used by apply_mpo).
    void set_sites(std::vector<SiteTensor> sites, std::optional<int> center);
    void add_discarded_weight(double w) { discarded_weight_ += w; }

   private:
    void move_center_right(int from);
    void move_center_left(int from);

    std::vector<SiteTensor> sites_;
    std::optional<int> center_;
    double discarded_weight_ = 0.0;
};

/// Rank-4 site tensor (left, out, in, right) as a grid of out x in blocks.
class MpoSite {
   public:
    MpoSite() = default;
    MpoSite(Index left, Index right, Index phys_out, Index phys_in);

    Index left() const { return left_; }
    Index right() const { return right_; }
    Index phys_out() const { return out_; }
    Index phys_in() const { return in_; }

    MatrixXc& block(Index w, Index v) { return blocks_[static_cast<std::size_t>(w * right_ + v)]; }
    const MatrixXc& block(Index w, Index v) const { return blocks_[static_cast<std::size_t>(w * right_ + v)]; }

   private:
    Index left_ = 0;
    Index right_ = 0;
    Index out_ = 0;
    Index in_ = 0;
    std::vector<MatrixXc> blocks_;
};

class Mpo {
   public:
    Mpo() = default;
    Mpo(std::vector<MpoSite> sites, std::string label);

    static Mpo identity(int sites, Index phys);

    int size() const { return static_cast<int>(sites_.size()); }
    const MpoSite& site(int i) const { return sites_[static_cast<std::size_t>(i)]; }
    const std::string& label() const { return label_; }
    Index max_bond() const;

    /// Dense operator matrix with site 0 most significant. Small chains only.
    MatrixXc to_dense() const;

   private:
    std::vector<MpoSite> sites_;
    std::string label_;
};

/// I - 2 (x)_j |w_j><w_j|, bond dimension 2; the -2 sits on the last site.
Mpo build_oracle_mpo(const Bitstring& omega);

/// 2 (x)_j |+><+| - I, bond dimension 2; the signs sit on the last site.
Mpo build_diffusion_mpo(int n);

/// Exact contraction followed by a left-to-right orthogonalization sweep and
/// a right-to-left truncating SVD sweep. The center ends on site 0.
Mps apply_mpo(Mps state, const Mpo& op, const TruncationPolicy& policy);

/// Contracts `op` into one site. Returns the squared norm after the
/// operator; with `renormalize` the state is rescaled to unit norm and an
/// ImpossibleOutcome is thrown for a vanishing branch.
double apply_local_op(Mps& state, int site, const MatrixXc& op, bool renormalize);

/// Entanglement entropy in bits across qubits [0, cut) | [cut, n).
double bipartite_entropy(Mps& state, int cut);

/// <psi| op_site |psi> for a normalized state.
cplx local_expectation(Mps& state, int site, const MatrixXc& op);

/// rho[s, s'] = <psi| (|s'><s|)_site |psi>, the one-site reduced density matrix.
MatrixXc reduced_site_matrix(Mps& state, int site);

}  // namespace grover
