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

#include "grover/linalg.hpp"

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

extern "C" {
void zgesdd_(const char* jobz, const int* m, const int* n, std::complex<double>* a, const int* lda, double* s,
             std::complex<double>* u, const int* ldu, std::complex<double>* vt, const int* ldvt,
             std::complex<double>* work, const int* lwork, double* rwork, int* iwork, int* info, std::size_t);
void zgesvd_(const char* jobu, const char* jobvt, const int* m, const int* n, std::complex<double>* a, const int* lda,
             double* s, std::complex<double>* u, const int* ldu, std::complex<double>* vt, const int* ldvt,
             std::complex<double>* work, const int* lwork, double* rwork, int* info, std::size_t, std::size_t);
}

namespace grover {

namespace {

// Below this aspect ratio LAPACK's own preprocessing is used as is.
constexpr Index kReduceRatio = 2;

int to_int(Index v) { return static_cast<int>(v); }

/// In-place LAPACK SVD of a square-ish matrix; `a` is destroyed.
bool lapack_gesdd(MatrixXc& a, bool vectors, ThinSvd& out) {
    const int m = to_int(a.rows());
    const int n = to_int(a.cols());
    const int k = std::min(m, n);
    const int mx = std::max(m, n);
    const char job = vectors ? 'S' : 'N';
    out.s.resize(k);
    if (vectors) {
        out.u.resize(m, k);
        out.v.resize(k, n);  // holds v^dagger until the end
    }
    const int ldu = std::max(1, m);
    const int ldvt = std::max(1, k);
    std::vector<double> rwork(vectors ? static_cast<std::size_t>(std::max(5 * k * k + 5 * k, 2 * mx * k + 2 * k * k + k))
                                      : static_cast<std::size_t>(7 * k));
    std::vector<int> iwork(static_cast<std::size_t>(8 * k));
    int info = 0;
    int lwork = -1;
    cplx query;
    cplx* u = vectors ? out.u.data() : nullptr;
    cplx* vt = vectors ? out.v.data() : nullptr;
    zgesdd_(&job, &m, &n, a.data(), &m, out.s.data(), u, &ldu, vt, &ldvt, &query, &lwork, rwork.data(), iwork.data(),
            &info, 1);
    if (info != 0) return false;
    lwork = std::max(1, static_cast<int>(query.real()));
    std::vector<cplx> work(static_cast<std::size_t>(lwork));
    zgesdd_(&job, &m, &n, a.data(), &m, out.s.data(), u, &ldu, vt, &ldvt, work.data(), &lwork, rwork.data(),
            iwork.data(), &info, 1);
    if (info != 0) return false;
    if (vectors) out.v = out.v.adjoint().eval();
    return true;
}

bool lapack_gesvd(MatrixXc& a, bool vectors, ThinSvd& out) {
    const int m = to_int(a.rows());
    const int n = to_int(a.cols());
    const int k = std::min(m, n);
    const char job = vectors ? 'S' : 'N';
    out.s.resize(k);
    if (vectors) {
        out.u.resize(m, k);
        out.v.resize(k, n);
    }
    const int ldu = std::max(1, m);
    const int ldvt = std::max(1, k);
    std::vector<double> rwork(static_cast<std::size_t>(std::max(1, 5 * k)));
    int info = 0;
    int lwork = -1;
    cplx query;
    cplx* u = vectors ? out.u.data() : nullptr;
    cplx* vt = vectors ? out.v.data() : nullptr;
    zgesvd_(&job, &job, &m, &n, a.data(), &m, out.s.data(), u, &ldu, vt, &ldvt, &query, &lwork, rwork.data(), &info,
            1, 1);
    if (info != 0) return false;
    lwork = std::max(1, static_cast<int>(query.real()));
    std::vector<cplx> work(static_cast<std::size_t>(lwork));
    zgesvd_(&job, &job, &m, &n, a.data(), &m, out.s.data(), u, &ldu, vt, &ldvt, work.data(), &lwork, rwork.data(),
            &info, 1, 1);
    if (info != 0) return false;
    if (vectors) out.v = out.v.adjoint().eval();
    return true;
}

ThinSvd core_svd(const MatrixXc& a, bool vectors) {
    ThinSvd out;
    MatrixXc work = a;
    if (lapack_gesdd(work, vectors, out)) return out;
    work = a;
    if (lapack_gesvd(work, vectors, out)) return out;
    throw NumericalError("SVD failed to converge on a " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                         " matrix");
}

ThinSvd svd_impl(const MatrixXc& a, bool vectors) {
    const Index m = a.rows();
    const Index n = a.cols();
    if (m == 0 || n == 0) {
        return {MatrixXc(m, 0), Eigen::VectorXd(0), MatrixXc(n, 0)};
    }
    if (n >= kReduceRatio * m) {
        // a^dagger = q r, so a = r^dagger q^dagger
        ThinQr qr = thin_qr(a.adjoint());
        ThinSvd inner = core_svd(qr.r.adjoint(), vectors);
        if (vectors) inner.v = qr.q * inner.v;
        return inner;
    }
    if (m >= kReduceRatio * n) {
        ThinQr qr = thin_qr(a);
        ThinSvd inner = core_svd(qr.r, vectors);
        if (vectors) inner.u = qr.q * inner.u;
        return inner;
    }
    return core_svd(a, vectors);
}

}  // namespace

ThinQr thin_qr(const MatrixXc& a) {
    const Index k = std::min(a.rows(), a.cols());
    Eigen::HouseholderQR<MatrixXc> qr(a);
    ThinQr out;
    out.q = qr.householderQ() * MatrixXc::Identity(a.rows(), k);
    out.r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    return out;
}

ThinSvd thin_svd(const MatrixXc& a) { return svd_impl(a, true); }

Eigen::VectorXd singular_values(const MatrixXc& a) { return svd_impl(a, false).s; }

}  // namespace grover
