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

#ifndef MIMO_RECIP_PRESETS_HPP
#define MIMO_RECIP_PRESETS_HPP

#include <vector>

#include "monte_carlo.hpp"
#include "rf_model.hpp"

namespace mimo_recip {
namespace presets {

inline Quad quad(double mean, double variance, double low, double high) {
    return Quad{mean, variance, low, high};
}

/// "Normal level" error profile: amplitude (0 dB, 0.5, [-1, 1] dB) on both
/// frontends, phase (0 deg, 0.5 rad^2, [-20, 20] deg).
inline ProfileSpec normal_profile() {
    ProfileSpec p;
    p.amp_tx = p.amp_rx = quad(0.0, 0.5, -1.0, 1.0);
    p.phase_tx = p.phase_rx = quad(0.0, 0.5, -20.0, 20.0);
    return p;
}

/// "High level" error profile: amplitude (0 dB, 1, [-4, 4] dB), phase
/// (0 deg, 1 rad^2, [-50, 50] deg).
inline ProfileSpec high_profile() {
    ProfileSpec p;
    p.amp_tx = p.amp_rx = quad(0.0, 1.0, -4.0, 4.0);
    p.phase_tx = p.phase_rx = quad(0.0, 1.0, -50.0, 50.0);
    return p;
}

/// Ideal frontends: point masses at 0 dB amplitude and 0 deg phase.
inline ProfileSpec error_free_profile() {
    ProfileSpec p;
    p.amp_tx = p.amp_rx = quad(0.0, 0.0, -1.0, 1.0);
    p.phase_tx = p.phase_rx = quad(0.0, 0.0, -20.0, 20.0);
    return p;
}

/// Default experiment geometry: M = 500, K = 20, transmit SNR 10 dB.
inline SystemConfig default_system() {
    SystemConfig cfg;
    cfg.m = 500;
    cfg.k = 20;
    cfg.rho_d = from_db(10.0);
    cfg.tau = 0.0;
    return cfg;
}

/// Variance grid for the error-level sweeps: [0, 1] in 11 steps.
inline std::vector<double> variance_grid() {
    std::vector<double> v;
    for (int i = 0; i <= 10; ++i)
        v.push_back(0.1 * i);
    return v;
}

inline std::vector<double> antenna_grid() { return {10, 20, 50, 100, 200, 500}; }

inline std::vector<double> snr_grid_db() {
    std::vector<double> v;
    for (int d = 0; d <= 40; d += 5)
        v.push_back(double(d));
    return v;
}

} // namespace presets
} // namespace mimo_recip

#endif
