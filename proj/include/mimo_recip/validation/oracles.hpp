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
//
// Independent reference implementations used only by the self-validation
// suite and the tests. Nothing here shares code with the library paths it
// cross-checks: the erf oracle is a brute-force extended-precision Maclaurin
// series, the characteristic-function oracle is adaptive Simpson quadrature
// in long double, and the truncated-Gaussian oracle sampler uses plain
// rejection instead of the inverse CDF.

#ifndef MIMO_RECIP_VALIDATION_ORACLES_HPP
#define MIMO_RECIP_VALIDATION_ORACLES_HPP

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "../common.hpp"
#include "../random.hpp"

namespace mimo_recip {
namespace oracles {

#if defined(__SIZEOF_FLOAT128__)
using wide_float = __float128;
#else
using wide_float = long double;
#endif

struct WideComplex {
    wide_float re, im;
};

inline WideComplex wc_mul(WideComplex a, WideComplex b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

inline wide_float wide_sqrt(wide_float x) {
    wide_float s = std::sqrt(static_cast<double>(x));
    for (int i = 0; i < 4; ++i)
        s = wide_float(0.5) * (s + x / s);
    return s;
}

inline wide_float wide_pi() {
    // double-double split of pi, exact to ~32 digits
    return wide_float(3.1415926535897931) + wide_float(1.2246467991473532e-16);
}

namespace detail {

// Maclaurin series in extended precision:
// erf(z) = 2/sqrt(pi) * sum (-1)^n z^(2n+1) / (n! (2n+1)).
// The alternating terms peak at exp(|z|^2), so the result loses
// exp(|z|^2) / |erf(z)| of precision to cancellation; with a 113-bit mantissa
// the series stays at <= ~1e-14 relative as long as |Re z| <= 4.6 (the result
// magnitude then keeps up with the cancellation) or |z| <= 6.9.
inline cxdbl erf_maclaurin_wide(cxdbl z) {
    const WideComplex zz{wide_float(z.real()), wide_float(z.imag())};
    const WideComplex z2 = wc_mul(zz, zz);
    WideComplex term = zz; // z^(2n+1) / n!
    WideComplex sum{0, 0};
    double sign = 1.0;
    for (int n = 0; n < 1200; ++n) {
        const wide_float inv = wide_float(sign) / wide_float(2 * n + 1);
        sum.re += term.re * inv;
        sum.im += term.im * inv;
        const double tmag = std::fabs(static_cast<double>(term.re)) +
                            std::fabs(static_cast<double>(term.im));
        const double smag = std::fabs(static_cast<double>(sum.re)) +
                            std::fabs(static_cast<double>(sum.im)) + 1e-300;
        if (n > std::norm(z) && tmag / (2 * n + 1) < 1e-38 * smag)
            break;
        term = wc_mul(term, z2);
        const wide_float div = wide_float(n + 1);
        term.re /= div;
        term.im /= div;
        sign = -sign;
    }
    const wide_float c = wide_float(2) / wide_sqrt(wide_pi());
    return {static_cast<double>(sum.re * c), static_cast<double>(sum.im * c)};
}

// Large-real-part branch: erf(z) = 1 - exp(-z^2) S(z) / (z sqrt(pi)) with the
// asymptotic series S = sum (-1)^k (2k-1)!! / (2 z^2)^k, truncated at its
// smallest term (~exp(-|z|^2) relative, negligible for |Re z| > 4.6). Long
// double arithmetic; valid for |arg z| < 3 pi / 4, which the first-quadrant
// fold guarantees.
inline cxdbl erf_asymptotic_ld(cxdbl zd) {
    using cld = std::complex<long double>;
    const cld z(zd.real(), zd.imag());
    const cld z2 = z * z;
    const cld inv2z2 = cld(0.5L, 0.0L) / z2;
    cld term(1.0L, 0.0L), sum(1.0L, 0.0L);
    long double prev = 1e30L;
    for (int k = 1; k < 200; ++k) {
        term *= -inv2z2 * cld(2.0L * k - 1.0L, 0.0L);
        const long double mag = std::abs(term);
        if (mag >= prev)
            break; // asymptotic series started diverging
        sum += term;
        prev = mag;
        if (mag < 1e-40L)
            break;
    }
    const long double sqrt_pi = 1.772453850905516027298167483341145183L;
    const cld value = cld(1.0L, 0.0L) - std::exp(-z2) * sum / (z * sqrt_pi);
    return {static_cast<double>(value.real()), static_cast<double>(value.imag())};
}

} // namespace detail

/// Extended-precision erf reference. Maclaurin series where it is
/// well-conditioned, asymptotic continuation for large real parts; both
/// branches are independent of the library's sampling-series implementation.
inline cxdbl erf_series_wide(cxdbl z) {
    double x = z.real(), y = z.imag();
    const bool neg_x = x < 0.0, neg_y = y < 0.0;
    x = std::fabs(x);
    y = std::fabs(y);
    cxdbl v = x <= 4.6 ? detail::erf_maclaurin_wide({x, y}) : detail::erf_asymptotic_ld({x, y});
    if (neg_y)
        v = std::conj(v);
    if (neg_x)
        v = -std::conj(v);
    return v;
}

namespace detail {

template <typename F>
long double adaptive_simpson(F &f, long double a, long double b, long double fa, long double fb,
                             long double fm, long double whole, long double tol, int depth) {
    const long double m = 0.5L * (a + b);
    const long double lm = 0.5L * (a + m), rm = 0.5L * (m + b);
    const long double flm = f(lm), frm = f(rm);
    const long double left = (m - a) / 6.0L * (fa + 4.0L * flm + fm);
    const long double right = (b - m) / 6.0L * (fm + 4.0L * frm + fb);
    if (depth <= 0 || std::fabs(left + right - whole) <= 15.0L * tol)
        return left + right + (left + right - whole) / 15.0L;
    return adaptive_simpson(f, a, m, fa, fm, flm, left, 0.5L * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, fb, frm, right, 0.5L * tol, depth - 1);
}

} // namespace detail

/// Adaptive Simpson quadrature in long double, absolute tolerance tol.
template <typename F> long double integrate_adaptive(F f, long double a, long double b,
                                                     long double tol = 1e-12L) {
    const long double fa = f(a), fb = f(b), fm = f(0.5L * (a + b));
    const long double whole = (b - a) / 6.0L * (fa + 4.0L * fm + fb);
    return detail::adaptive_simpson(f, a, b, fa, fb, fm, whole, tol, 40);
}

/// Truncated-normal density in long double, written directly from the
/// definition (normal pdf over interval mass); independent of the library's
/// TruncatedGaussian code path.
struct TruncatedDensityRef {
    long double mu, sigma, lo, hi, z;

    TruncatedDensityRef(double mu_, double sigma2, double a, double b)
        : mu(mu_), sigma(std::sqrt((long double)sigma2)), lo(a), hi(b) {
        const long double sq2 = std::sqrt(2.0L);
        const long double ca = std::isinf(a) ? 0.0L : 0.5L * std::erfc(-((long double)a - mu) / (sigma * sq2));
        const long double cb = std::isinf(b) ? 1.0L : 0.5L * std::erfc(-((long double)b - mu) / (sigma * sq2));
        z = cb - ca;
    }

    long double operator()(long double x) const {
        const long double t = (x - mu) / sigma;
        const long double inv_sqrt_2pi = 0.3989422804014326779399460599343818685L;
        return inv_sqrt_2pi * std::exp(-0.5L * t * t) / (sigma * z);
    }
};

/// E{exp(jX)} of a truncated normal by adaptive quadrature over the density.
inline cxdbl char_exp_quadrature(double mu, double sigma2, double a, double b,
                                 long double tol = 1e-11L) {
    const TruncatedDensityRef pdf(mu, sigma2, a, b);
    // integrate over the effective support when the bounds are infinite
    const long double sig = std::sqrt((long double)sigma2);
    const long double lo = std::isinf(a) ? (long double)mu - 14.0L * sig : (long double)a;
    const long double hi = std::isinf(b) ? (long double)mu + 14.0L * sig : (long double)b;
    const long double re =
        integrate_adaptive([&](long double x) { return pdf(x) * std::cos(x); }, lo, hi, tol);
    const long double im =
        integrate_adaptive([&](long double x) { return pdf(x) * std::sin(x); }, lo, hi, tol);
    return {static_cast<double>(re), static_cast<double>(im)};
}

/// Plain rejection sampler from the parent normal; independent of the
/// library's inverse-CDF sampler.
inline double rejection_sample(double mu, double sigma, double a, double b, RandomStream &rng) {
    for (;;) {
        const double x = mu + sigma * rng.normal();
        if (x >= a && x <= b)
            return x;
    }
}

struct SampleMoments {
    double mean, variance;
    double se_mean, se_variance;
    std::int64_t n;
};

/// Streaming sample moments with standard errors (the variance SE uses the
/// fourth central moment).
template <typename Gen> SampleMoments sample_moments(std::int64_t n, Gen &&gen) {
    long double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
    // two-pass is memory-heavy at 1e7 draws; accumulate shifted around the
    // first draw instead
    const double x0 = gen();
    for (std::int64_t i = 0; i < n; ++i) {
        const long double d = (i == 0 ? x0 : gen()) - (long double)x0;
        s1 += d;
        s2 += d * d;
        s3 += d * d * d;
        s4 += d * d * d * d;
    }
    const long double m1 = s1 / n;
    const long double m2 = s2 / n - m1 * m1; // population variance
    const long double m3 = s3 / n - 3 * m1 * (s2 / n) + 2 * m1 * m1 * m1;
    const long double m4 =
        s4 / n - 4 * m1 * (s3 / n) + 6 * m1 * m1 * (s2 / n) - 3 * m1 * m1 * m1 * m1;
    (void)m3;
    SampleMoments r;
    r.n = n;
    r.mean = static_cast<double>(x0 + m1);
    r.variance = static_cast<double>(m2 * n / (n - 1.0L));
    r.se_mean = static_cast<double>(std::sqrt((double)(m2 / n)));
    const long double var_of_var = (m4 - m2 * m2) / n;
    r.se_variance = static_cast<double>(std::sqrt(std::max(0.0, (double)var_of_var)));
    return r;
}

/// Deterministic low-discrepancy points on the complex disc |z| <= radius
/// (R2 golden-ratio sequence mapped to the disc).
inline std::vector<cxdbl> quasi_random_disc(int count, double radius) {
    std::vector<cxdbl> pts;
    pts.reserve(count);
    const double g = 1.32471795724474602596; // plastic constant
    const double a1 = 1.0 / g, a2 = 1.0 / (g * g);
    double u = 0.5, v = 0.5;
    for (int i = 0; i < count; ++i) {
        u += a1;
        u -= std::floor(u);
        v += a2;
        v -= std::floor(v);
        const double r = radius * std::sqrt(u);
        pts.emplace_back(r * std::cos(constants::two_pi * v), r * std::sin(constants::two_pi * v));
    }
    return pts;
}

} // namespace oracles
} // namespace mimo_recip

#endif
