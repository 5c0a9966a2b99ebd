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

#ifndef MIMO_RECIP_RF_MODEL_HPP
#define MIMO_RECIP_RF_MODEL_HPP

#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include "common.hpp"
#include "linalg.hpp"
#include "quadrature.hpp"
#include "random.hpp"
#include "truncated_gaussian.hpp"

namespace mimo_recip {

enum class AmplitudeDomain { db, linear };
enum class PhaseVarianceUnit { rad2, deg2 };

/// One truncated-Gaussian quadruple as entered in configs: (mean, variance,
/// [low, high]). Units depend on which error component it parameterizes and
/// on the profile flags.
struct Quad {
    double mean = 0.0;
    double variance = 0.0;
    double low = 0.0;
    double high = 0.0;
};

/// Raw per-frontend error description. Amplitude quadruples are read in dB or
/// linear units according to amplitude_domain; phase means/bounds are entered
/// in degrees, the phase variance in rad^2 or deg^2 according to
/// phase_variance_unit.
struct ProfileSpec {
    Quad amp_tx, amp_rx;
    Quad phase_tx, phase_rx;
    AmplitudeDomain amplitude_domain = AmplitudeDomain::db;
    PhaseVarianceUnit phase_variance_unit = PhaseVarianceUnit::rad2;
};

/// Validated RF error model: four truncated Gaussians (Tx/Rx x amp/phase).
/// Phase distributions are stored in radians, amplitude distributions in the
/// configured domain; sampling converts dB amplitudes to linear.
class RfErrorProfile {
  public:
    static RfErrorProfile make(const ProfileSpec &spec) {
        RfErrorProfile p;
        p.amplitude_domain_ = spec.amplitude_domain;
        p.amp_tx_ = make_component(spec.amp_tx, "amp_tx");
        p.amp_rx_ = make_component(spec.amp_rx, "amp_rx");
        if (spec.amplitude_domain == AmplitudeDomain::linear) {
            require(spec.amp_tx.low > 0.0 && spec.amp_rx.low > 0.0,
                    "RfErrorProfile: linear amplitude bounds must be positive");
        }
        p.phase_tx_ = make_phase(spec.phase_tx, spec.phase_variance_unit, "phase_tx");
        p.phase_rx_ = make_phase(spec.phase_rx, spec.phase_variance_unit, "phase_rx");
        return p;
    }

    AmplitudeDomain amplitude_domain() const { return amplitude_domain_; }
    const TruncatedGaussian &amp_tx() const { return amp_tx_; }
    const TruncatedGaussian &amp_rx() const { return amp_rx_; }
    /// Phase distributions in radians.
    const TruncatedGaussian &phase_tx() const { return phase_tx_; }
    const TruncatedGaussian &phase_rx() const { return phase_rx_; }

    /// Draws one linear-scale amplitude from the given component.
    double sample_amplitude(const TruncatedGaussian &amp, RandomStream &rng) const {
        const double x = amp.sample(rng);
        return amplitude_domain_ == AmplitudeDomain::db ? amp_from_db(x) : x;
    }

  private:
    static TruncatedGaussian make_component(const Quad &q, const char *name) {
        require(q.variance >= 0.0, std::string("RfErrorProfile: ") + name +
                                       ": variance must be >= 0");
        if (q.variance == 0.0)
            return TruncatedGaussian::point_mass(q.mean);
        return TruncatedGaussian::make(q.mean, q.variance, q.low, q.high);
    }

    static TruncatedGaussian make_phase(const Quad &q, PhaseVarianceUnit unit, const char *name) {
        const double d2r = constants::deg_to_rad;
        Quad rad;
        rad.mean = q.mean * d2r;
        rad.low = q.low * d2r;
        rad.high = q.high * d2r;
        rad.variance = unit == PhaseVarianceUnit::rad2 ? q.variance : q.variance * d2r * d2r;
        require(rad.low > -constants::pi - 1e-12 && rad.high <= constants::pi + 1e-12,
                std::string("RfErrorProfile: ") + name +
                    ": phase bounds must lie within (-180, 180] degrees");
        return make_component(rad, name);
    }

    TruncatedGaussian amp_tx_ = TruncatedGaussian::point_mass(1.0);
    TruncatedGaussian amp_rx_ = TruncatedGaussian::point_mass(1.0);
    TruncatedGaussian phase_tx_ = TruncatedGaussian::point_mass(0.0);
    TruncatedGaussian phase_rx_ = TruncatedGaussian::point_mass(0.0);
    AmplitudeDomain amplitude_domain_ = AmplitudeDomain::db;
};

/// Scalar factors derived from the error profile: first/second moments of the
/// linear amplitudes, the phase characteristic values g_t/g_r, and the
/// aggregate factors the closed-form SINR expressions are built from.
struct ErrorFactors {
    double alpha_t = 1.0, alpha_r = 1.0;   ///< mean linear amplitude
    double sigma_t2 = 0.0, sigma_r2 = 0.0; ///< linear amplitude variance
    cxdbl g_t{1.0, 0.0}, g_r{1.0, 0.0};    ///< E{exp(j phase)}
    double a_t = 1.0, a_r = 1.0;           ///< second moments alpha^2 + sigma^2
    double a_i = 1.0;                      ///< aggregated reciprocity error factor, (0, 1]
    double b_i = 1.0;                      ///< estimation-aware signal-power factor
    double b_i_tilde = 1.0;                ///< b_i / a_i (definition)
    double tau2 = 0.0;

    /// b_i_tilde under the small-amplitude-deviation approximation the
    /// asymptotic expressions are stated with: (1 - tau^2) * a_i. The exact
    /// b_i / a_i exceeds one whenever a_t, a_r > 1, which would make the
    /// asymptotic ZF/MRT ratio meaningless.
    double b_i_tilde_approx() const { return (1.0 - tau2) * a_i; }
};

namespace detail {

struct AmpMoments {
    double alpha, sigma2;
};

/// Linear-domain amplitude moments. In dB mode: 64-point Gauss-Legendre
/// integration of 10^(x/20) and 10^(x/10) against the dB-domain truncated
/// density; in linear mode the closed-form truncated moments apply directly.
inline AmpMoments amp_linear_moments(const TruncatedGaussian &amp, AmplitudeDomain domain) {
    if (domain == AmplitudeDomain::linear) {
        const auto m = amp.moments();
        return {m.mean, m.variance};
    }
    if (amp.is_degenerate())
        return {amp_from_db(amp.mu()), 0.0};
    // integrate over the effective support: the quadrature must resolve the
    // density even when sigma is far smaller than the truncation interval.
    // The density peaks at clamp(mu, a, b); 13 sigma of margin (plus one for
    // the exponential tilt of 10^(x/20)) keeps the discarded mass irrelevant.
    const double sigma = std::sqrt(amp.sigma2());
    const double peak = std::min(std::max(amp.mu(), amp.low()), amp.high());
    const double w = std::sqrt((peak - amp.mu()) * (peak - amp.mu()) + 170.0 * sigma * sigma) +
                     sigma;
    const double lo = std::max(amp.low(), amp.mu() - w);
    const double hi = std::min(amp.high(), amp.mu() + w);
    const double m1 =
        integrate_gl64([&](double x) { return amp.pdf(x) * amp_from_db(x); }, lo, hi);
    const double m2 = integrate_gl64([&](double x) { return amp.pdf(x) * from_db(x); }, lo, hi);
    return {m1, m2 - m1 * m1};
}

} // namespace detail

/// Derives all scalar error factors for a profile at estimation level tau.
inline ErrorFactors derive_error_factors(const RfErrorProfile &profile, double tau) {
    require(tau >= 0.0 && tau <= 1.0, "derive_error_factors: tau must lie in [0, 1]");
    ErrorFactors f;
    f.tau2 = tau * tau;

    const auto mt = detail::amp_linear_moments(profile.amp_tx(), profile.amplitude_domain());
    const auto mr = detail::amp_linear_moments(profile.amp_rx(), profile.amplitude_domain());
    f.alpha_t = mt.alpha;
    f.sigma_t2 = mt.sigma2;
    f.alpha_r = mr.alpha;
    f.sigma_r2 = mr.sigma2;
    f.g_t = profile.phase_tx().char_exp();
    f.g_r = profile.phase_rx().char_exp();

    f.a_t = f.alpha_t * f.alpha_t + f.sigma_t2;
    f.a_r = f.alpha_r * f.alpha_r + f.sigma_r2;
    const double at2 = f.alpha_t * f.alpha_t, ar2 = f.alpha_r * f.alpha_r;
    f.a_i = (at2 * ar2) / (f.a_t * f.a_r) * std::norm(f.g_t) * std::norm(f.g_r);
    f.b_i = (1.0 - f.tau2) * f.a_i * f.a_t * f.a_r / ((1.0 - f.tau2) * f.a_r + f.tau2);
    f.b_i_tilde = f.b_i / f.a_i;
    return f;
}

/// Per-antenna Tx/Rx response vectors h_bt, h_br (diagonals of the frontend
/// matrices): amplitude times exp(j phase), i.i.d. across antennas,
/// independent across the two frontends.
inline std::pair<std::vector<cxdbl>, std::vector<cxdbl>>
sample_frontends(const RfErrorProfile &profile, int m, RandomStream &rng) {
    require(m >= 1, "sample_frontends: M must be >= 1");
    std::vector<cxdbl> h_bt(m), h_br(m);
    for (int i = 0; i < m; ++i) {
        const double a = profile.sample_amplitude(profile.amp_tx(), rng);
        h_bt[i] = std::polar(a, profile.phase_tx().sample(rng));
    }
    for (int i = 0; i < m; ++i) {
        const double a = profile.sample_amplitude(profile.amp_rx(), rng);
        h_br[i] = std::polar(a, profile.phase_rx().sample(rng));
    }
    return {std::move(h_bt), std::move(h_br)};
}

/// Diagonal of the compound mismatch E = H_bt * H_br^{-1}.
inline std::vector<cxdbl> reciprocity_error_matrix(const std::vector<cxdbl> &h_bt,
                                                   const std::vector<cxdbl> &h_br) {
    require(h_bt.size() == h_br.size(), "reciprocity_error_matrix: length mismatch");
    std::vector<cxdbl> e(h_bt.size());
    for (std::size_t i = 0; i < h_br.size(); ++i) {
        if (std::abs(h_br[i]) == 0.0)
            throw singular_matrix_error("reciprocity_error_matrix: zero Rx response entry");
        e[i] = h_bt[i] / h_br[i];
    }
    return e;
}

struct SystemConfig {
    int m = 500;             ///< BS antennas
    int k = 20;              ///< single-antenna user terminals
    double rho_d = 10.0;     ///< transmit SNR, linear
    double tau = 0.0;        ///< estimation error weight, [0, 1]
    double noise_var = 1.0;  ///< per-user noise variance (model fixes this at 1)

    double tau2() const { return tau * tau; }

    void validate() const {
        require(m >= 1, "SystemConfig: M must be >= 1");
        require(k >= 1, "SystemConfig: K must be >= 1");
        require(std::isfinite(rho_d) && rho_d > 0.0, "SystemConfig: rho_d must be > 0");
        require(tau >= 0.0 && tau <= 1.0, "SystemConfig: tau must lie in [0, 1]");
        require(noise_var == 1.0, "SystemConfig: noise variance is fixed at 1");
    }
};

/// One channel draw: propagation matrix H, estimation error V (both M x K,
/// i.i.d. CN(0,1)), and frontend response vectors.
struct ChannelRealization {
    ComplexMatrix h;  ///< M x K propagation channel
    ComplexMatrix v;  ///< M x K estimation error
    std::vector<cxdbl> h_bt, h_br;
};

inline void sample_channel(const SystemConfig &cfg, RandomStream &rng, ComplexMatrix &h,
                           ComplexMatrix &v) {
    cfg.validate();
    h = ComplexMatrix(cfg.m, cfg.k);
    v = ComplexMatrix(cfg.m, cfg.k);
    for (cxdbl &x : h.data())
        x = rng.complex_normal();
    for (cxdbl &x : v.data())
        x = rng.complex_normal();
}

inline ChannelRealization sample_realization(const SystemConfig &cfg,
                                             const RfErrorProfile &profile, RandomStream &rng) {
    ChannelRealization r;
    sample_channel(cfg, rng, r.h, r.v);
    auto fr = sample_frontends(profile, cfg.m, rng);
    r.h_bt = std::move(fr.first);
    r.h_br = std::move(fr.second);
    return r;
}

struct DownlinkChannels {
    ComplexMatrix h_d_true; ///< K x M actual downlink channel H^T H_bt
    ComplexMatrix h_d_hat;  ///< K x M predicted downlink channel
};

/// Downlink channel pair: the estimate sqrt(1-tau^2) H^T diag(h_br) + tau V^T
/// the precoder sees, and the true channel H^T diag(h_bt) the signal passes
/// through.
inline DownlinkChannels build_channels(const ChannelRealization &real, double tau) {
    require(tau >= 0.0 && tau <= 1.0, "build_channels: tau must lie in [0, 1]");
    DownlinkChannels d;
    d.h_d_true = transpose_scale_columns(real.h, real.h_bt);
    d.h_d_hat = transpose_scale_columns(real.h, real.h_br);
    const double c = std::sqrt(1.0 - tau * tau);
    const int k = d.h_d_hat.rows(), m = d.h_d_hat.cols();
    for (int i = 0; i < k; ++i) {
        cxdbl *hr = d.h_d_hat.row(i);
        for (int j = 0; j < m; ++j)
            hr[j] = c * hr[j] + tau * real.v(j, i);
    }
    return d;
}

} // namespace mimo_recip

#endif
