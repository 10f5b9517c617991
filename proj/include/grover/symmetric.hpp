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

// Exact density-operator evolution restricted to permutation-symmetric
// states. The uniform preparation, the diffusion reflection and identical
// local noise on every qubit commute with qubit permutations, and the oracle
// only distinguishes the qubits where the target has a 1 from those where it
// has a 0. The state therefore stays in Sym^{n1}(C^4) (x) Sym^{n0}(C^4) of
// the vectorized operator space, whose dimension grows polynomially in n.

#include <array>
#include <span>
#include <vector>

#include "grover/channels.hpp"
#include "grover/common.hpp"
#include "grover/dense.hpp"

namespace grover::symmetric {

inline constexpr int kMaxQubits = 24;

/// Letter counts (|0><0|, |0><1|, |1><0|, |1><1|) of a symmetric basis word.
using Composition = std::array<int, 4>;

/// All compositions of m into four parts, in a fixed order, with inverse
/// lookup.
class Compositions {
   public:
    explicit Compositions(int m);

    int degree() const { return m_; }
    Index size() const { return static_cast<Index>(list_.size()); }
    const Composition& operator[](Index i) const { return list_[static_cast<std::size_t>(i)]; }
    Index index(const Composition& c) const;
    /// log(m! / prod_s c_s!), the number of words of this type.
    double log_multiplicity(Index i) const { return log_mult_[static_cast<std::size_t>(i)]; }

   private:
    int m_;
    std::vector<Composition> list_;
    std::vector<int> lookup_;
    std::vector<double> log_mult_;
};

/// Restriction of X^{(x) m} to the symmetric subspace, in the orthonormal
/// basis of normalized type sums. X must be real.
Eigen::MatrixXd symmetric_power(const Mat4& x, const Compositions& basis);

/// weight * (x1^{(x) n1} (x) x0^{(x) n0}) as a pair of symmetric powers.
struct ProductTerm {
    double weight = 1.0;
    Eigen::MatrixXd t1;
    Eigen::MatrixXd t0;
};

/// rho over a target with n1 ones and n0 zeros, stored as a D1 x D0 real
/// matrix of coefficients in the product of the two orthonormal bases.
/// Qubit order inside each group is irrelevant by construction.
class SymmetricState {
   public:
    /// |+><+|^{(x)(n1+n0)}.
    SymmetricState(int n1, int n0);

    int ones() const { return group1_.degree(); }
    int zeros() const { return group0_.degree(); }
    const Compositions& group1() const { return group1_; }
    const Compositions& group0() const { return group0_; }
    const Eigen::MatrixXd& coefficients() const { return v_; }

    /// rho -> (x1^{(x) n1} (x) x0^{(x) n0}) rho, given the two symmetric powers.
    void apply_product(const Eigen::MatrixXd& t1, const Eigen::MatrixXd& t0);
    /// rho -> sum of the terms applied to rho.
    void apply_sum(std::span<const ProductTerm> terms);
    void apply_oracle();
    /// rho -> (1 - p) rho + p I / 2^n.
    void apply_depolarizing(double p);

    /// <w|rho|w> for the target.
    double success_probability() const;
    double trace() const;
    /// Tr rho^2.
    double purity() const { return v_.squaredNorm(); }

   private:
    Compositions group1_;
    Compositions group0_;
    Eigen::MatrixXd v_;
    Eigen::MatrixXd oracle_sign_;
};

/// Same contract as dense::run_grover for mixed runs. The entropy column is
/// NaN (no cut is available in this representation), trace_drift holds
/// |Tr rho - 1| and max_bond is unused.
RunTrace run_grover(int n, const Bitstring& omega, const NoiseModel& noise, long iterations,
                    const RunOptions& options = {});

}  // namespace grover::symmetric
