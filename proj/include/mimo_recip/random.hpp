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

#ifndef MIMO_RECIP_RANDOM_HPP
#define MIMO_RECIP_RANDOM_HPP

#include <cmath>
#include <complex>
#include <cstdint>

#include "common.hpp"

namespace mimo_recip {

inline std::uint64_t splitmix64(std::uint64_t &state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Derives the per-trial seed from (master_seed, sweep_index, trial_index).
/// Pure function of its arguments, so trial results do not depend on worker
/// count or execution schedule.
inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t sweep_index,
                              std::uint64_t trial_index) {
    std::uint64_t s = master;
    std::uint64_t a = splitmix64(s) ^ (sweep_index + 0x9e3779b97f4a7c15ULL);
    std::uint64_t b = splitmix64(a) ^ (trial_index + 0x517cc1b727220a95ULL);
    return splitmix64(b);
}

/// Deterministic seeded random stream (xoshiro256++ core, Box-Muller normals).
/// One exclusive stream per trial/worker; streams derived via mix_seed are
/// independent for practical purposes.
class RandomStream {
  public:
    explicit RandomStream(std::uint64_t seed) {
        std::uint64_t sm = seed;
        for (auto &w : s_)
            w = splitmix64(sm);
        cached_ = false;
        cache_ = 0.0;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const std::uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    /// Uniform double in [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal (Marsaglia polar pair, second variate cached).
    double normal() {
        if (cached_) {
            cached_ = false;
            return cache_;
        }
        double a, b;
        polar_pair(a, b);
        cache_ = b;
        cached_ = true;
        return a;
    }

    /// Circularly-symmetric complex normal CN(0, 1): Re, Im ~ N(0, 1/2).
    cxdbl complex_normal() {
        double a, b;
        polar_pair(a, b);
        return {a * constants::inv_sqrt_two, b * constants::inv_sqrt_two};
    }

  private:
    static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    void polar_pair(double &a, double &b) {
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        a = u * f;
        b = v * f;
    }

    std::uint64_t s_[4];
    double cache_;
    bool cached_;
};

} // namespace mimo_recip

#endif
