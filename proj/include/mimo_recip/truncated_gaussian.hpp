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

#ifndef MIMO_RECIP_TRUNCATED_GAUSSIAN_HPP
#define MIMO_RECIP_TRUNCATED_GAUSSIAN_HPP

#include <cmath>
#include <complex>

#include "common.hpp"
#include "random.hpp"
#include "special_functions.hpp"

namespace mimo_recip {

/// Gaussian N(mu, sigma2) conditioned on [a, b].
///
/// Bounds may be +-infinity (the untruncated reductions then fall out of the
/// same code paths). A zero-variance point mass is represented by an explicit
/// degenerate flag, never by sigma2 == 0, since density and the closed-form
/// moments are 0/0 there while the limits are well defined.
class TruncatedGaussian {
  public:
    struct Moments {
        double mean;
        double variance;
    };

    static TruncatedGaussian make(double mu, double sigma2, double a, double b) {
        require(std::isfinite(mu), "TruncatedGaussian: mu must be finite");
        require(std::isfinite(sigma2) && sigma2 > 0.0,
                "TruncatedGaussian: sigma2 must be > 0 (use point_mass for a degenerate "
                "distribution)");
        require(!std::isnan(a) && !std::isnan(b) && a < b,
                "TruncatedGaussian: bounds must satisfy a < b");
        TruncatedGaussian d;
        d.mu_ = mu;
        d.sigma2_ = sigma2;
        d.a_ = a;
        d.b_ = b;
        d.degenerate_ = false;
        d.sigma_ = std::sqrt(sigma2);
        d.alpha_ = (a - mu) / d.sigma_;
        d.beta_ = (b - mu) / d.sigma_;
        d.cdf_lo_ = std_normal_cdf(d.alpha_);
        d.big_z_ = std_normal_cdf(d.beta_) - d.cdf_lo_;
        require(d.big_z_ > 0.0, "TruncatedGaussian: truncation interval has zero mass");
        return d;
    }

    /// Degenerate point mass at mu (the sigma2 -> 0+ limit).
    static TruncatedGaussian point_mass(double mu) {
        require(std::isfinite(mu), "TruncatedGaussian: mu must be finite");
        TruncatedGaussian d;
        d.mu_ = mu;
        d.sigma2_ = 0.0;
        d.a_ = mu;
        d.b_ = mu;
        d.degenerate_ = true;
        d.sigma_ = 0.0;
        d.alpha_ = d.beta_ = 0.0;
        d.cdf_lo_ = 0.0;
        d.big_z_ = 1.0;
        return d;
    }

    double mu() const { return mu_; }
    double sigma2() const { return sigma2_; }
    double low() const { return a_; }
    double high() const { return b_; }
    bool is_degenerate() const { return degenerate_; }

    /// Density of the truncated distribution; zero outside [a, b].
    double pdf(double x) const {
        require(!degenerate_, "TruncatedGaussian::pdf: point mass has no density");
        if (x < a_ || x > b_)
            return 0.0;
        return std_normal_pdf((x - mu_) / sigma_) / (sigma_ * big_z_);
    }

    /// Mean and variance conditioned on the truncation interval.
    Moments moments() const {
        if (degenerate_)
            return {mu_, 0.0};
        const double pa = std::isfinite(alpha_) ? std_normal_pdf(alpha_) : 0.0;
        const double pb = std::isfinite(beta_) ? std_normal_pdf(beta_) : 0.0;
        const double apa = std::isfinite(alpha_) ? alpha_ * pa : 0.0;
        const double bpb = std::isfinite(beta_) ? beta_ * pb : 0.0;
        const double r = (pa - pb) / big_z_;
        const double mean = mu_ + sigma_ * r;
        const double variance = sigma2_ * (1.0 + (apa - bpb) / big_z_ - r * r);
        return {mean, variance};
    }

    /// Inverse-CDF draw; always lands inside [a, b] and costs O(1) regardless
    /// of how hard the truncation is.
    double sample(RandomStream &rng) const {
        if (degenerate_)
            return mu_;
        const double u = cdf_lo_ + rng.uniform01() * big_z_;
        double x = mu_ + sigma_ * inv_std_normal_cdf(u);
        if (x < a_)
            x = a_;
        if (x > b_)
            x = b_;
        return x;
    }

    /// E{exp(jX)} with X in radians.
    ///
    /// Numerator erf terms saturate to +-1 once their real part passes 7.5:
    /// with |imag| <= 2 the deviation is below e^{4 - 56}, so arguments far
    /// outside the erf_complex envelope along the real direction are exact.
    cxdbl char_exp() const {
        if (degenerate_)
            return std::polar(1.0, mu_);
        const double y = sigma_ * constants::inv_sqrt_two;
        const double xb = std::isinf(b_) ? constants::inf : (b_ - mu_) / (sigma_ * std::sqrt(2.0));
        const double xa = std::isinf(a_) ? -constants::inf : (a_ - mu_) / (sigma_ * std::sqrt(2.0));
        const cxdbl num = erf_saturated(xb, -y) - erf_saturated(xa, -y);
        const double den = erf_real_saturated(xb) - erf_real_saturated(xa);
        const cxdbl scale = std::exp(-0.5 * sigma2_) * std::polar(1.0, mu_);
        return scale * num / den;
    }

  private:
    TruncatedGaussian() = default;

    static cxdbl erf_saturated(double x, double y) {
        if (std::isinf(x) || (std::fabs(x) >= 7.5 && x * x - y * y >= 40.0))
            return {x > 0 ? 1.0 : -1.0, 0.0};
        return erf_complex(cxdbl(x, y)).value;
    }
    static double erf_real_saturated(double x) {
        if (std::isinf(x))
            return x > 0 ? 1.0 : -1.0;
        return std::erf(x);
    }

    double mu_, sigma2_, a_, b_;
    bool degenerate_;
    double sigma_, alpha_, beta_, cdf_lo_, big_z_;
};

} // namespace mimo_recip

#endif
