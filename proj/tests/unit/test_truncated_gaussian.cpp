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

#include <catch2/catch_amalgamated.hpp>

#include "mimo_recip/truncated_gaussian.hpp"
#include "mimo_recip/validation/oracles.hpp"

using namespace mimo_recip;

namespace {
constexpr double inf = constants::inf;
}

TEST_CASE("TruncatedGaussian - construction guards") {
    CHECK_THROWS_AS(TruncatedGaussian::make(0.0, 0.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TruncatedGaussian::make(0.0, -0.5, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TruncatedGaussian::make(0.0, 1.0, 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(TruncatedGaussian::make(0.0, 1.0, 2.0, -2.0), std::invalid_argument);
    CHECK_NOTHROW(TruncatedGaussian::make(0.0, 1.0, -inf, inf));
}

TEST_CASE("pdf - support, untruncated reduction, reference value") {
    const auto box = TruncatedGaussian::make(0.0, 1.0, -1.0, 1.0);
    CHECK(box.pdf(2.0) == 0.0);
    CHECK(box.pdf(-1.5) == 0.0);

    const auto full = TruncatedGaussian::make(0.0, 1.0, -inf, inf);
    CHECK(full.pdf(0.0) == Catch::Approx(0.3989422804014327).epsilon(1e-14));

    // phi(0) / (Phi(1) - Phi(-1)), computed with an independent high-precision CDF
    CHECK(box.pdf(0.0) == Catch::Approx(0.5843685672568166).epsilon(1e-13));

    // density integrates to one over the support
    for (const auto &d :
         {TruncatedGaussian::make(0.0, 1.0, -1.0, 1.0), TruncatedGaussian::make(0.3, 0.25, -0.2, 0.9),
          TruncatedGaussian::make(-0.1, 1.5, -0.4, 0.2)}) {
        const long double mass = oracles::integrate_adaptive(
            [&](long double x) { return (long double)d.pdf((double)x); }, d.low(), d.high(),
            1e-12L);
        CHECK(double(mass) == Catch::Approx(1.0).epsilon(1e-9));
    }
}

TEST_CASE("moments - symmetric, untruncated, reference variance") {
    const auto sym = TruncatedGaussian::make(0.0, 1.0, -0.7, 0.7);
    CHECK(sym.moments().mean == Catch::Approx(0.0).margin(1e-15));

    const auto full = TruncatedGaussian::make(0.0, 1.0, -inf, inf);
    CHECK(full.moments().mean == Catch::Approx(0.0).margin(1e-15));
    CHECK(full.moments().variance == Catch::Approx(1.0).epsilon(1e-14));

    const auto box = TruncatedGaussian::make(0.0, 1.0, -1.0, 1.0);
    CHECK(box.moments().variance == Catch::Approx(0.2911250947727932).epsilon(1e-13));
}

TEST_CASE("moments - bounds on a parameter grid") {
    for (double mu : {-0.3, 0.0, 0.4})
        for (double s2 : {0.1, 0.6, 1.5})
            for (double b : {0.25, 0.8, 1.2}) {
                const auto d = TruncatedGaussian::make(mu, s2, mu - b, mu + b);
                const auto m = d.moments();
                CHECK(m.mean >= d.low());
                CHECK(m.mean <= d.high());
                CHECK(m.variance > 0.0);
                CHECK(m.variance <= s2 * (1.0 + 1e-12));
                CHECK(m.variance <= b * b); // ((high-low)/2)^2
            }
}

TEST_CASE("moments - match sample moments from an independent rejection sampler") {
    RandomStream rng(20211);
    const auto d = TruncatedGaussian::make(0.0, 1.0, -1.0, 1.0);
    const auto m = d.moments();
    const auto sm = oracles::sample_moments(
        2000000, [&] { return oracles::rejection_sample(0.0, 1.0, -1.0, 1.0, rng); });
    CHECK(std::fabs(sm.mean - m.mean) <= 4.0 * sm.se_mean);
    CHECK(std::fabs(sm.variance - m.variance) <= 4.0 * sm.se_variance);
}

TEST_CASE("sample - stays inside the support") {
    RandomStream rng(7);
    const auto d = TruncatedGaussian::make(0.2, 2.0, -0.5, 0.4);
    for (int i = 0; i < 100000; ++i) {
        const double x = d.sample(rng);
        CHECK(x >= -0.5);
        CHECK(x <= 0.4);
    }
}

TEST_CASE("sample - mean matches moments() within Monte Carlo error") {
    RandomStream rng(99);
    const auto d = TruncatedGaussian::make(0.0, 1.0, -1.0, 1.0);
    const auto m = d.moments();
    const std::int64_t n = 1000000;
    long double s = 0;
    for (std::int64_t i = 0; i < n; ++i)
        s += d.sample(rng);
    const double mean = double(s / n);
    const double se = std::sqrt(m.variance / double(n));
    CHECK(std::fabs(mean - m.mean) <= 4.0 * se);
}

TEST_CASE("sample - deterministic for a fixed seed") {
    const auto d = TruncatedGaussian::make(0.1, 0.5, -1.0, 1.2);
    RandomStream a(42), b(42);
    for (int i = 0; i < 1000; ++i)
        CHECK(d.sample(a) == d.sample(b));
}

TEST_CASE("char_exp - point mass, untruncated, quadrature reference") {
    const auto pm = TruncatedGaussian::point_mass(0.3);
    const cxdbl v = pm.char_exp();
    CHECK(v.real() == Catch::Approx(std::cos(0.3)).epsilon(1e-15));
    CHECK(v.imag() == Catch::Approx(std::sin(0.3)).epsilon(1e-15));

    const auto full = TruncatedGaussian::make(0.0, 1.0, -inf, inf);
    const cxdbl g = full.char_exp();
    CHECK(g.real() == Catch::Approx(std::exp(-0.5)).epsilon(1e-12));
    CHECK(std::fabs(g.imag()) <= 1e-14);

    // frozen from the adaptive-quadrature oracle
    const auto d = TruncatedGaussian::make(0.0, 0.25, -0.5, 0.5);
    CHECK(d.char_exp().real() == Catch::Approx(0.9640352920566222).epsilon(1e-10));
    CHECK(std::fabs(d.char_exp().imag()) <= 1e-12);
}

TEST_CASE("char_exp - modulus bounded by one and symmetric-case reality") {
    for (double s2 : {0.1, 0.45, 0.8, 1.15, 1.5})
        for (double b : {0.2, 0.45, 0.7, 0.95, 1.2}) {
            const auto d = TruncatedGaussian::make(0.0, s2, -b, b);
            const cxdbl v = d.char_exp();
            CHECK(std::abs(v) <= 1.0 + 1e-12);
            CHECK(std::fabs(v.imag()) <= 1e-12);
        }
}

TEST_CASE("char_exp - matches adaptive quadrature on the parameter grid") {
    double worst = 0.0;
    for (double s2 : {0.1, 0.45, 0.8, 1.15, 1.5})
        for (double b : {0.2, 0.45, 0.7, 0.95, 1.2})
            for (double mu : {-0.3, -0.15, 0.0, 0.15, 0.3}) {
                const auto d = TruncatedGaussian::make(mu, s2, mu - b, mu + b);
                const cxdbl ref = oracles::char_exp_quadrature(mu, s2, mu - b, mu + b);
                worst = std::max(worst, std::abs(d.char_exp() - ref));
            }
    CHECK(worst <= 1e-8);
}

TEST_CASE("char_exp - matches the Monte Carlo mean of exp(jX)") {
    RandomStream rng(314);
    const auto d = TruncatedGaussian::make(0.1, 0.7, -0.8, 1.0);
    const cxdbl v = d.char_exp();
    const std::int64_t n = 1000000;
    long double sre = 0, sim = 0, sre2 = 0, sim2 = 0;
    for (std::int64_t i = 0; i < n; ++i) {
        const double x = d.sample(rng);
        sre += std::cos(x);
        sim += std::sin(x);
        sre2 += std::cos(x) * std::cos(x);
        sim2 += std::sin(x) * std::sin(x);
    }
    const double mre = double(sre / n), mim = double(sim / n);
    const double se_re = std::sqrt((double(sre2 / n) - mre * mre) / n);
    const double se_im = std::sqrt((double(sim2 / n) - mim * mim) / n);
    CHECK(std::fabs(mre - v.real()) <= 4.0 * se_re);
    CHECK(std::fabs(mim - v.imag()) <= 4.0 * se_im);
}

TEST_CASE("point mass - sample and moments degenerate cleanly, pdf rejected") {
    const auto pm = TruncatedGaussian::point_mass(1.0);
    CHECK_THROWS_AS(pm.pdf(1.0), std::invalid_argument);
    RandomStream rng(1);
    CHECK(pm.sample(rng) == 1.0);
    CHECK(pm.moments().mean == 1.0);
    CHECK(pm.moments().variance == 0.0);
}
