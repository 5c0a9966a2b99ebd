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

#ifndef MIMO_RECIP_ANALYTIC_SINR_HPP
#define MIMO_RECIP_ANALYTIC_SINR_HPP

#include <cmath>

#include "common.hpp"
#include "precoding.hpp"
#include "rf_model.hpp"

namespace mimo_recip {

/// Second-order inverse-moment approximation: E{1/X} ~= 1/mean + var/mean^3.
/// The correction term is what separates the output-SINR estimator used here
/// from the cruder E{P_s}/E{P_I + noise} ratio.
inline double inverse_moment_correction(double mean, double variance) {
    require(mean > 0.0, "inverse_moment_correction: mean must be > 0");
    require(variance >= 0.0, "inverse_moment_correction: variance must be >= 0");
    return 1.0 / mean + variance / (mean * mean * mean);
}

struct ExpectedPowers {
    double e_ps;   ///< E{P_s}
    double e_pi;   ///< E{P_I}
    double var_pi; ///< var(P_I)
};

/// MRT signal/interference moments under analytic normalization:
///   E{P_s} = (rho A_t / K) [(1-t2) A_r ((M-1) A_I + 2) + t2] / [(1-t2) A_r + t2]
///   E{P_I} = rho (K-1)/K A_t
///   var(P_I) = rho^2 (K-1) A_t^2 / K^2
inline ExpectedPowers expected_powers_mrt(const SystemConfig &cfg, const ErrorFactors &f) {
    cfg.validate();
    const double t2 = cfg.tau2(), rho = cfg.rho_d;
    const double m = cfg.m, k = cfg.k;
    const double mix = (1.0 - t2) * f.a_r + t2;
    ExpectedPowers p;
    p.e_ps = rho * f.a_t / k * ((1.0 - t2) * f.a_r * ((m - 1.0) * f.a_i + 2.0) + t2) / mix;
    p.e_pi = rho * (k - 1.0) / k * f.a_t;
    p.var_pi = rho * rho * (k - 1.0) * f.a_t * f.a_t / (k * k);
    return p;
}

/// ZF signal/interference moments (large-M/K approximations):
///   E{P_s} ~= rho (M-K)/K B_I
///   E{P_I} ~= rho (K-1)/K (A_t - B_I)
///   var(P_I) ~= rho^2 (K-1)/K^2 (A_t - B_I)^2
inline ExpectedPowers expected_powers_zf(const SystemConfig &cfg, const ErrorFactors &f) {
    cfg.validate();
    require(cfg.m > cfg.k, "expected_powers_zf: requires M > K");
    const double rho = cfg.rho_d;
    const double m = cfg.m, k = cfg.k;
    const double c = f.a_t - f.b_i;
    ExpectedPowers p;
    p.e_ps = rho * (m - k) / k * f.b_i;
    p.e_pi = rho * (k - 1.0) / k * c;
    p.var_pi = rho * rho * (k - 1.0) / (k * k) * c * c;
    return p;
}

struct SinrComponents {
    double e_ps = 0.0;
    double e_pi = 0.0;
    double inv_moment = 0.0; ///< E{1/(P_I + noise)} with the second-order correction
};

struct AnalyticSinr {
    Scheme scheme = Scheme::mrt;
    double sinr_linear = 0.0;
    double sinr_db = 0.0;
    SinrComponents components;
};

namespace detail {

inline AnalyticSinr pack(Scheme scheme, double sinr, const ExpectedPowers &p, double noise_var) {
    AnalyticSinr out;
    out.scheme = scheme;
    out.sinr_linear = sinr;
    out.sinr_db = to_db(sinr);
    out.components = {p.e_ps, p.e_pi,
                      inverse_moment_correction(p.e_pi + noise_var, p.var_pi)};
    return out;
}

} // namespace detail

/// Closed-form MRT output SINR, written out in the fully expanded form; it
/// agrees with components.e_ps * components.inv_moment to rounding error (the
/// factorization is an exact algebraic identity, covered by tests).
inline AnalyticSinr sinr_mrt(const SystemConfig &cfg, const ErrorFactors &f) {
    const ExpectedPowers p = expected_powers_mrt(cfg, f);
    const double t2 = cfg.tau2(), rho = cfg.rho_d;
    const double m = cfg.m, k = cfg.k;
    const double at = f.a_t;
    const double mix = (1.0 - t2) * f.a_r + t2;
    const double num = (1.0 - t2) * f.a_r * ((m - 1.0) * f.a_i + 2.0) + t2;
    const double den = std::pow(rho * (k - 1.0) * at + k, 3);
    const double bracket = (k * k + rho * k * (k - 1.0) * (rho * at * at + 2.0 * at)) / den;
    const double sinr = rho * at * (num / mix) * bracket;
    return detail::pack(Scheme::mrt, sinr, p, cfg.noise_var);
}

/// Closed-form ZF output SINR (expanded form).
inline AnalyticSinr sinr_zf(const SystemConfig &cfg, const ErrorFactors &f) {
    const ExpectedPowers p = expected_powers_zf(cfg, f);
    const double rho = cfg.rho_d;
    const double m = cfg.m, k = cfg.k;
    const double c = f.a_t - f.b_i;
    const double den = std::pow(rho * (k - 1.0) * c + k, 3);
    const double bracket = (k * k + rho * k * (k - 1.0) * c * (rho * c + 2.0)) / den;
    const double sinr = rho * (m - k) * f.b_i * bracket;
    return detail::pack(Scheme::zf, sinr, p, cfg.noise_var);
}

inline AnalyticSinr analytic_sinr(const SystemConfig &cfg, const ErrorFactors &f, Scheme scheme) {
    return scheme == Scheme::mrt ? sinr_mrt(cfg, f) : sinr_zf(cfg, f);
}

/// Output SINR with the estimation error removed (tau = 0): the
/// reciprocity-error-only specialization of the closed forms.
inline AnalyticSinr sinr_no_estimation(const SystemConfig &cfg, const ErrorFactors &f,
                                       Scheme scheme) {
    SystemConfig c0 = cfg;
    c0.tau = 0.0;
    ErrorFactors f0 = f;
    f0.tau2 = 0.0;
    f0.b_i = f.a_i * f.a_t; // B_I at tau = 0
    f0.b_i_tilde = f0.b_i / f0.a_i;
    return analytic_sinr(c0, f0, scheme);
}

enum class AsymptoticRegime {
    mrt_large_k,        ///< K >> 1 only, no estimation error
    mrt_no_est,         ///< M -> inf, K >> 1, high SNR, no estimation error
    zf_no_est,          ///< M -> inf, K >> 1, no estimation error
    zf_no_est_high_snr, ///< additionally rho (1 - A_I) >> 1
    mrt_est,            ///< M -> inf, K >> 1 with estimation error
    zf_est              ///< M -> inf, K >> 1 with estimation error
};

/// Asymptotic SINR limits. The estimation-error regimes use the
/// b_i_tilde_approx() form; with the exact b_i / a_i they would not reduce to
/// the no-estimation limits at tau = 0 (the discrepancy is surfaced by a
/// dedicated test rather than silently patched).
inline double asymptotic_limit(const SystemConfig &cfg, const ErrorFactors &f, Scheme scheme,
                               AsymptoticRegime regime) {
    cfg.validate();
    const double rho = cfg.rho_d;
    const double m = cfg.m, k = cfg.k;
    const double bt = f.b_i_tilde_approx();
    switch (regime) {
    case AsymptoticRegime::mrt_large_k:
        require(scheme == Scheme::mrt, "asymptotic_limit: mrt_large_k is an MRT regime");
        return rho * ((m - 1.0) * f.a_i + 2.0) / (k * (rho + 1.0 / f.a_t));
    case AsymptoticRegime::mrt_no_est:
        require(scheme == Scheme::mrt, "asymptotic_limit: mrt_no_est is an MRT regime");
        return m / k * f.a_i;
    case AsymptoticRegime::zf_no_est:
        require(scheme == Scheme::zf, "asymptotic_limit: zf_no_est is a ZF regime");
        return rho * (m - k) * f.a_i * f.a_t / (k * (rho * f.a_t * (1.0 - f.a_i) + 1.0));
    case AsymptoticRegime::zf_no_est_high_snr:
        require(scheme == Scheme::zf, "asymptotic_limit: zf_no_est_high_snr is a ZF regime");
        return m / k / (1.0 / f.a_i - 1.0); // +inf at perfect reciprocity
    case AsymptoticRegime::mrt_est:
        require(scheme == Scheme::mrt, "asymptotic_limit: mrt_est is an MRT regime");
        return m / k * rho * bt / (rho + 1.0 / f.a_i);
    case AsymptoticRegime::zf_est:
        require(scheme == Scheme::zf, "asymptotic_limit: zf_est is a ZF regime");
        return (m - k) / k * rho * bt / (rho * (1.0 - bt) + 1.0 / f.a_i);
    }
    throw std::invalid_argument("asymptotic_limit: unknown regime");
}

struct RatioResult {
    double value;  ///< +inf when !finite
    bool finite;
};

/// Asymptotic ZF-over-MRT SINR ratio: 1/(1 - A_I) without estimation error,
/// 1/(1 - (1-tau^2) A_I) with it. Always >= 1; infinite at perfect
/// reciprocity, reported as a flagged sentinel because sweeps legitimately
/// pass through that point.
inline RatioResult zf_mrt_ratio(const SystemConfig &cfg, const ErrorFactors &f,
                                bool with_estimation) {
    cfg.validate();
    const double bt = with_estimation ? f.b_i_tilde_approx() : f.a_i;
    if (bt >= 1.0)
        return {constants::inf, false};
    return {1.0 / (1.0 - bt), true};
}

} // namespace mimo_recip

#endif
