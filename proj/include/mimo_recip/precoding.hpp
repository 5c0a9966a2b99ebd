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

#ifndef MIMO_RECIP_PRECODING_HPP
#define MIMO_RECIP_PRECODING_HPP

#include <cmath>
#include <string>

#include "common.hpp"
#include "linalg.hpp"
#include "rf_model.hpp"

namespace mimo_recip {

enum class Scheme { mrt, zf };
enum class Normalization { analytic, empirical };

inline const char *to_string(Scheme s) { return s == Scheme::mrt ? "mrt" : "zf"; }
inline const char *to_string(Normalization n) {
    return n == Normalization::analytic ? "analytic" : "empirical";
}

/// Matched-filter precoder: conjugate transpose of the channel estimate.
inline ComplexMatrix mrt_matrix(const ComplexMatrix &h_d_hat) {
    return hermitian(h_d_hat);
}

/// Zero-forcing precoder H^H (H H^H)^{-1}; throws singular_matrix_error on a
/// rank-deficient Gram draw (callers redraw the trial).
inline ComplexMatrix zf_matrix(const ComplexMatrix &h_d_hat) {
    require(h_d_hat.rows() <= h_d_hat.cols(), "zf_matrix: needs K <= M");
    const ComplexMatrix gram = matmul_nh(h_d_hat, h_d_hat);
    const ComplexMatrix inv = invert_hermitian_posdef(gram);
    return matmul(hermitian(h_d_hat), inv);
}

/// Normalization scalar from the closed-form expectation of tr(W W^H).
inline double lambda_analytic(const SystemConfig &cfg, const ErrorFactors &f, Scheme scheme) {
    cfg.validate();
    const double t2 = cfg.tau2();
    const double mix = (1.0 - t2) * f.a_r + t2;
    if (scheme == Scheme::mrt)
        return std::sqrt(1.0 / (double(cfg.m) * cfg.k * mix));
    require(cfg.m > cfg.k, "lambda_analytic: ZF requires M > K");
    return std::sqrt((double(cfg.m) - cfg.k) / cfg.k * mix);
}

/// Per-realization normalization 1 / sqrt(tr(W W^H)).
inline double lambda_empirical(const ComplexMatrix &w) {
    const double t = frobenius_norm2(w);
    require(t > 0.0, "lambda_empirical: zero precoding matrix");
    return 1.0 / std::sqrt(t);
}

struct PrecoderOutput {
    ComplexMatrix w;
    double lambda = 0.0;
    Scheme scheme = Scheme::mrt;
    Normalization normalization = Normalization::analytic;
};

inline PrecoderOutput build_precoder(const ComplexMatrix &h_d_hat, const SystemConfig &cfg,
                                     const ErrorFactors &f, Scheme scheme, Normalization norm) {
    PrecoderOutput out;
    out.scheme = scheme;
    out.normalization = norm;
    out.w = scheme == Scheme::mrt ? mrt_matrix(h_d_hat) : zf_matrix(h_d_hat);
    out.lambda = norm == Normalization::analytic ? lambda_analytic(cfg, f, scheme)
                                                 : lambda_empirical(out.w);
    return out;
}

struct UserPowers {
    double p_s; ///< desired signal power
    double p_i; ///< inter-user interference power
};

/// Per-realization signal and interference powers for user k. The transmit
/// symbols are independent with unit power, so their expectation is taken
/// analytically: P_s = rho lambda^2 |t_kk|^2, P_I = rho lambda^2 sum_{i != k}
/// |t_ki|^2 with t = h_k^T diag(h_bt) W.
inline UserPowers per_user_powers(const ChannelRealization &real, const ComplexMatrix &w,
                                  double lambda, const SystemConfig &cfg, int k) {
    require(k >= 0 && k < cfg.k, "per_user_powers: user index out of range");
    require(w.rows() == cfg.m && w.cols() == cfg.k, "per_user_powers: W must be M x K");
    const double scale = cfg.rho_d * lambda * lambda;
    // row_i = H(:,k)^T scaled by h_bt
    double p_s = 0.0, p_tot = 0.0;
    for (int i = 0; i < cfg.k; ++i) {
        cxdbl t = 0.0;
        for (int a = 0; a < cfg.m; ++a)
            t += real.h(a, k) * real.h_bt[a] * w(a, i);
        const double p = std::norm(t);
        p_tot += p;
        if (i == k)
            p_s = p;
    }
    return {scale * p_s, scale * (p_tot - p_s)};
}

} // namespace mimo_recip

#endif
