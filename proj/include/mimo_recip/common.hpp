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

#ifndef MIMO_RECIP_COMMON_HPP
#define MIMO_RECIP_COMMON_HPP

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <string>

namespace mimo_recip {

using cxdbl = std::complex<double>;

/// Thrown when a matrix that must be inverted is singular (or not positive
/// definite) to working precision. Callers that draw random matrices treat
/// this as a redraw signal rather than a fatal condition.
class singular_matrix_error : public std::runtime_error {
  public:
    explicit singular_matrix_error(const std::string &msg) : std::runtime_error(msg) {}
};

namespace constants {
inline constexpr double pi = 3.14159265358979323846264338327950288;
inline constexpr double two_pi = 2.0 * pi;
inline constexpr double inv_sqrt_two_pi = 0.398942280401432677939946059934381868;
inline constexpr double inv_sqrt_two = 0.707106781186547524400844362104849039;
inline constexpr double deg_to_rad = pi / 180.0;
inline constexpr double inf = std::numeric_limits<double>::infinity();
} // namespace constants

inline double to_db(double linear) { return 10.0 * std::log10(linear); }
inline double from_db(double db) { return std::pow(10.0, db / 10.0); }

/// Amplitude ratio conversions (voltage convention, 20 dB per decade).
inline double amp_from_db(double db) { return std::pow(10.0, db / 20.0); }

inline void require(bool cond, const std::string &msg) {
    if (!cond)
        throw std::invalid_argument(msg);
}

} // namespace mimo_recip

#endif
