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

#include "mimo_recip/special_functions.hpp"
#include "mimo_recip/validation/oracles.hpp"

using namespace mimo_recip;

TEST_CASE("std_normal_pdf - reference values and symmetry") {
    CHECK(std_normal_pdf(0.0) == Catch::Approx(0.3989422804014327).epsilon(1e-14));
    CHECK(std_normal_pdf(1.0) == Catch::Approx(std::exp(-0.5) / std::sqrt(2.0 * constants::pi))
                                     .epsilon(1e-14));
    for (double x : {0.3, 1.7, 2.9, 5.5}) {
        CHECK(std_normal_pdf(x) == std_normal_pdf(-x));
        CHECK(std_normal_pdf(x) > 0.0);
    }
}

TEST_CASE("std_normal_cdf - midpoint, tails, complement") {
    CHECK(std_normal_cdf(0.0) == 0.5);
    CHECK(std_normal_cdf(8.0) >= 1.0 - 1e-15);
    CHECK(std_normal_cdf(-8.0) <= 1e-15);
    double prev = -1.0;
    for (double x = -6.0; x <= 6.0; x += 0.25) {
        const double c = std_normal_cdf(x);
        CHECK(c >= prev);
        prev = c;
        CHECK(std::fabs(std_normal_cdf(x) + std_normal_cdf(-x) - 1.0) <= 1e-14);
    }
}

TEST_CASE("inv_std_normal_cdf - round trip against erfc-based CDF") {
    CHECK(inv_std_normal_cdf(0.5) == Catch::Approx(0.0).margin(1e-12));
    CHECK(inv_std_normal_cdf(0.975) == Catch::Approx(1.959963984540054).epsilon(1e-8));
    // the ~1.2e-9 relative error in x amplifies by x^2 in probability space,
    // so the tail round trip is good to ~4e-8 relative rather than 1e-9
    for (double u = 1e-8; u < 1.0; u = u < 0.5 ? u * 3.7 : 1.0 - (1.0 - u) / 3.7) {
        const double x = inv_std_normal_cdf(u);
        CHECK(std_normal_cdf(x) == Catch::Approx(u).epsilon(1e-7).margin(1e-14));
    }
    CHECK_THROWS_AS(inv_std_normal_cdf(0.0), std::invalid_argument);
    CHECK_THROWS_AS(inv_std_normal_cdf(1.0), std::invalid_argument);
}

TEST_CASE("erf_complex - trivial points") {
    CHECK(erf_complex({0.0, 0.0}).value == cxdbl(0.0, 0.0));
    // value confirmed with the extended-precision series oracle
    const cxdbl v = erf_complex({1.0, 1.0}).value;
    CHECK(v.real() == Catch::Approx(1.3161512816979476).epsilon(1e-12));
    CHECK(v.imag() == Catch::Approx(0.19045346923783469).epsilon(1e-12));
}

TEST_CASE("erf_complex - odd and conjugate symmetry") {
    for (const cxdbl z : oracles::quasi_random_disc(60, 5.0)) {
        const cxdbl a = erf_complex(z).value;
        const cxdbl b = erf_complex(-z).value;
        const cxdbl c = erf_complex(std::conj(z)).value;
        const double scale = std::max(1.0, std::abs(a));
        CHECK(std::abs(a + b) <= 1e-12 * scale);
        CHECK(std::abs(std::conj(a) - c) <= 1e-12 * scale);
    }
}

TEST_CASE("erf_complex - real axis agrees with std::erf") {
    for (double x = -6.0; x <= 6.0; x += 0.1) {
        const cxdbl v = erf_complex({x, 0.0}).value;
        CHECK(std::fabs(v.real() - std::erf(x)) <= 1e-12);
        CHECK(v.imag() == 0.0);
    }
}

TEST_CASE("erf_complex - oracle equivalence for |z| <= 4") {
    double worst = 0.0;
    for (const cxdbl z : oracles::quasi_random_disc(200, 4.0)) {
        const cxdbl mine = erf_complex(z).value;
        const cxdbl ref = oracles::erf_series_wide(z);
        worst = std::max(worst, std::abs(mine - ref) / std::max(std::abs(ref), 1e-300));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("erf_complex - accurate across the whole envelope") {
    double worst = 0.0;
    for (const cxdbl z : oracles::quasi_random_disc(150, 12.0)) {
        const cxdbl mine = erf_complex(z).value;
        const cxdbl ref = oracles::erf_series_wide(z);
        worst = std::max(worst, std::abs(mine - ref) / std::max(std::abs(ref), 1e-300));
    }
    CHECK(worst <= 1e-10);
}

TEST_CASE("erf_complex - envelope status flag") {
    CHECK(erf_complex({3.0, 3.0}).status == ErfStatus::ok);
    CHECK(erf_complex({12.5, 0.0}).status == ErfStatus::outside_envelope);
    CHECK(erf_complex({0.0, 13.0}).status == ErfStatus::outside_envelope);
    // value is still produced, not silently dropped
    CHECK(std::isfinite(erf_complex({12.5, 0.0}).value.real()));
}
