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

#include "grover/common.hpp"

namespace grover {

/// a = q r with q (m x k) having orthonormal columns, k = min(m, n).
struct ThinQr {
    MatrixXc q;
    MatrixXc r;
};

ThinQr thin_qr(const MatrixXc& a);

/// a = u diag(s) v^dagger, s descending, k = min(m, n) columns in u and v.
struct ThinSvd {
    MatrixXc u;
    Eigen::VectorXd s;
    MatrixXc v;
};

/// Strongly rectangular inputs are first reduced to their square triangular
/// factor; the SVD itself is LAPACK's divide and conquer with a QR-iteration
/// fallback. Throws NumericalError if both fail to converge.
ThinSvd thin_svd(const MatrixXc& a);

Eigen::VectorXd singular_values(const MatrixXc& a);

}  // namespace grover
