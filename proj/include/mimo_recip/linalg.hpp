// SPDX-License-Identifier: Apache-2.0
//
// mimo-recip — output-SINR analysis and simulation of TDD massive MIMO
// downlink precoding under RF frontend mismatch and channel estimation errors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef MIMO_RECIP_LINALG_HPP
#define MIMO_RECIP_LINALG_HPP

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "common.hpp"

namespace mimo_recip {

/// Dense row-major complex matrix. Only the handful of operations the system
/// model needs; K x K inverses at most (never M x M), and diagonal frontends
/// are kept as vectors with diagonal-times-dense done as row/column scaling.
class ComplexMatrix {
  public:
    ComplexMatrix() : rows_(0), cols_(0) {}
    ComplexMatrix(int rows, int cols) : rows_(rows), cols_(cols), data_(std::size_t(rows) * cols) {
        require(rows >= 0 && cols >= 0, "ComplexMatrix: negative dimension");
    }

    static ComplexMatrix identity(int n) {
        ComplexMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            m(i, i) = 1.0;
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    cxdbl &operator()(int i, int j) { return data_[std::size_t(i) * cols_ + j]; }
    const cxdbl &operator()(int i, int j) const { return data_[std::size_t(i) * cols_ + j]; }

    cxdbl *row(int i) { return data_.data() + std::size_t(i) * cols_; }
    const cxdbl *row(int i) const { return data_.data() + std::size_t(i) * cols_; }

    const std::vector<cxdbl> &data() const { return data_; }
    std::vector<cxdbl> &data() { return data_; }

  private:
    int rows_, cols_;
    std::vector<cxdbl> data_;
};

struct TraceFrobenius {
    cxdbl trace;
    double fro2; ///< squared Frobenius norm, sum |a_ij|^2
};

inline double frobenius_norm2(const ComplexMatrix &a) {
    double s = 0.0;
    for (const cxdbl &v : a.data())
        s += std::norm(v);
    return s;
}

/// Trace (square input only) together with the squared Frobenius norm.
inline TraceFrobenius trace_frobenius(const ComplexMatrix &a) {
    require(a.rows() == a.cols(), "trace_frobenius: trace requires a square matrix");
    cxdbl tr = 0.0;
    for (int i = 0; i < a.rows(); ++i)
        tr += a(i, i);
    return {tr, frobenius_norm2(a)};
}

inline ComplexMatrix hermitian(const ComplexMatrix &a) {
    ComplexMatrix h(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        const cxdbl *ar = a.row(i);
        for (int j = 0; j < a.cols(); ++j)
            h(j, i) = std::conj(ar[j]);
    }
    return h;
}

inline ComplexMatrix matmul(const ComplexMatrix &a, const ComplexMatrix &b) {
    require(a.cols() == b.rows(), "matmul: inner dimensions do not match (" +
                                      std::to_string(a.cols()) + " vs " +
                                      std::to_string(b.rows()) + ")");
    ComplexMatrix c(a.rows(), b.cols());
    const int n = b.cols();
    for (int i = 0; i < a.rows(); ++i) {
        cxdbl *cr = c.row(i);
        const cxdbl *ar = a.row(i);
        for (int k = 0; k < a.cols(); ++k) {
            const cxdbl aik = ar[k];
            const cxdbl *br = b.row(k);
            for (int j = 0; j < n; ++j)
                cr[j] += aik * br[j];
        }
    }
    return c;
}

/// A * B^H without forming B^H; rows of both operands are contiguous, so this
/// reduces to conjugated dot products and is the hot kernel of the simulator.
inline ComplexMatrix matmul_nh(const ComplexMatrix &a, const ComplexMatrix &b) {
    require(a.cols() == b.cols(), "matmul_nh: column counts do not match");
    ComplexMatrix c(a.rows(), b.rows());
    const int p = a.cols();
    for (int i = 0; i < a.rows(); ++i) {
        const cxdbl *ar = a.row(i);
        for (int j = 0; j < b.rows(); ++j) {
            const cxdbl *br = b.row(j);
            double re = 0.0, im = 0.0;
            for (int k = 0; k < p; ++k) {
                const double axr = ar[k].real(), axi = ar[k].imag();
                const double bxr = br[k].real(), bxi = br[k].imag();
                re += axr * bxr + axi * bxi;
                im += axi * bxr - axr * bxi;
            }
            c(i, j) = {re, im};
        }
    }
    return c;
}

namespace detail {

/// In-place lower Cholesky factor of a Hermitian positive definite matrix.
inline void cholesky(ComplexMatrix &g) {
    const int n = g.rows();
    for (int j = 0; j < n; ++j) {
        double d = g(j, j).real();
        for (int k = 0; k < j; ++k)
            d -= std::norm(g(j, k));
        if (!(d > 0.0) || !std::isfinite(d))
            throw singular_matrix_error("cholesky: matrix not positive definite to working "
                                        "precision");
        const double ljj = std::sqrt(d);
        g(j, j) = ljj;
        const double inv = 1.0 / ljj;
        for (int i = j + 1; i < n; ++i) {
            cxdbl s = g(i, j);
            for (int k = 0; k < j; ++k)
                s -= g(i, k) * std::conj(g(j, k));
            g(i, j) = s * inv;
        }
    }
    // zero the strict upper triangle so the factor is usable as a matrix
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            g(i, j) = 0.0;
}

/// Solves L * L^H * X = B in place (B overwritten with X), L lower triangular.
inline void cholesky_solve_inplace(const ComplexMatrix &l, ComplexMatrix &b) {
    const int n = l.rows();
    const int m = b.cols();
    for (int j = 0; j < m; ++j) {
        for (int i = 0; i < n; ++i) { // forward: L y = b
            cxdbl s = b(i, j);
            for (int k = 0; k < i; ++k)
                s -= l(i, k) * b(k, j);
            b(i, j) = s / l(i, i).real();
        }
        for (int i = n - 1; i >= 0; --i) { // backward: L^H x = y
            cxdbl s = b(i, j);
            for (int k = i + 1; k < n; ++k)
                s -= std::conj(l(k, i)) * b(k, j);
            b(i, j) = s / l(i, i).real();
        }
    }
}

} // namespace detail

/// Inverse of a Hermitian positive definite matrix via Cholesky.
/// Throws singular_matrix_error when the factorization hits a non-positive
/// pivot (a rank-deficient Gram draw), std::invalid_argument when the input
/// is visibly non-Hermitian.
inline ComplexMatrix invert_hermitian_posdef(const ComplexMatrix &g) {
    require(g.rows() == g.cols(), "invert_hermitian_posdef: matrix must be square");
    const int n = g.rows();
    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        scale = std::max(scale, std::abs(g(i, i)));
    double asym = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j)
            asym = std::max(asym, std::abs(g(i, j) - std::conj(g(j, i))));
    require(asym <= 1e-10 * std::max(scale, 1.0),
            "invert_hermitian_posdef: matrix is not Hermitian within tolerance");

    ComplexMatrix l = g;
    detail::cholesky(l);
    ComplexMatrix inv = ComplexMatrix::identity(n);
    detail::cholesky_solve_inplace(l, inv);
    return inv;
}

/// Returns K x M result of diag-scaling columns: out(k, i) = a(i, k) * s[i].
/// Realizes A^T * diag(s) without materializing the diagonal matrix.
inline ComplexMatrix transpose_scale_columns(const ComplexMatrix &a, const std::vector<cxdbl> &s) {
    require(static_cast<int>(s.size()) == a.rows(),
            "transpose_scale_columns: scale length must equal rows");
    ComplexMatrix out(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        const cxdbl *ar = a.row(i);
        const cxdbl si = s[i];
        for (int k = 0; k < a.cols(); ++k)
            out(k, i) = ar[k] * si;
    }
    return out;
}

} // namespace mimo_recip

#endif
