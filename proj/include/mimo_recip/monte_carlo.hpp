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

#ifndef MIMO_RECIP_MONTE_CARLO_HPP
#define MIMO_RECIP_MONTE_CARLO_HPP

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

#include "analytic_sinr.hpp"
#include "common.hpp"
#include "linalg.hpp"
#include "precoding.hpp"
#include "random.hpp"
#include "rf_model.hpp"

namespace mimo_recip {

/// Per-realization outcome: one desired-signal and one interference power per
/// user, plus how many rank-deficient ZF draws were discarded along the way.
struct TrialResult {
    std::vector<double> p_s;
    std::vector<double> p_i;
    int redraws = 0;
};

namespace detail {

inline constexpr int max_zf_redraws = 8;

/// Core of one trial. Powers are evaluated through the K x K effective gain
/// matrix T = H_d W: for MRT T = H_d Hhat^H, for ZF T = (H_d Hhat^H) G^{-1}
/// with G the Gram matrix — algebraically identical to forming the M x K
/// precoder first but O(K^2 M) instead of O(M K^2 + M K).
inline TrialResult run_trial_impl(const SystemConfig &cfg, const RfErrorProfile &profile,
                                  const ErrorFactors &factors, Scheme scheme, Normalization norm,
                                  std::uint64_t trial_seed) {
    RandomStream rng(trial_seed);
    TrialResult out;
    for (int attempt = 0;; ++attempt) {
        const ChannelRealization real = sample_realization(cfg, profile, rng);
        const DownlinkChannels d = build_channels(real, cfg.tau);
        ComplexMatrix t = matmul_nh(d.h_d_true, d.h_d_hat); // K x K
        double lambda2;
        if (scheme == Scheme::mrt) {
            lambda2 = norm == Normalization::analytic
                          ? 1.0 / (double(cfg.m) * cfg.k * ((1.0 - cfg.tau2()) * factors.a_r +
                                                            cfg.tau2()))
                          : 1.0 / frobenius_norm2(d.h_d_hat); // tr(W W^H) = ||Hhat||_F^2
        } else {
            require(cfg.m > cfg.k, "run_trial: ZF requires M > K");
            ComplexMatrix g = matmul_nh(d.h_d_hat, d.h_d_hat);
            try {
                cholesky(g); // in place, g becomes L
            } catch (const singular_matrix_error &) {
                if (attempt >= max_zf_redraws)
                    throw std::runtime_error("run_trial: repeated singular ZF Gram draws");
                ++out.redraws;
                continue;
            }
            // T <- T G^{-1} done as G X = T^H, T = X^H
            ComplexMatrix th = hermitian(t);
            cholesky_solve_inplace(g, th);
            t = hermitian(th);
            if (norm == Normalization::analytic) {
                const double mix = (1.0 - cfg.tau2()) * factors.a_r + cfg.tau2();
                lambda2 = (double(cfg.m) - cfg.k) / cfg.k * mix;
            } else {
                // tr(W W^H) = tr(G^{-1}) = ||L^{-1}||_F^2
                double tr = 0.0;
                ComplexMatrix li = ComplexMatrix::identity(cfg.k);
                for (int j = 0; j < cfg.k; ++j) { // forward solve L X = I
                    for (int i = 0; i < cfg.k; ++i) {
                        cxdbl s = li(i, j);
                        for (int kk = 0; kk < i; ++kk)
                            s -= g(i, kk) * li(kk, j);
                        li(i, j) = s / g(i, i).real();
                    }
                }
                for (const cxdbl &vv : li.data())
                    tr += std::norm(vv);
                lambda2 = 1.0 / tr;
            }
        }
        const double scale = cfg.rho_d * lambda2;
        out.p_s.resize(cfg.k);
        out.p_i.resize(cfg.k);
        for (int k = 0; k < cfg.k; ++k) {
            double tot = 0.0;
            for (int i = 0; i < cfg.k; ++i)
                tot += std::norm(t(k, i));
            const double ps = std::norm(t(k, k));
            out.p_s[k] = scale * ps;
            out.p_i[k] = scale * (tot - ps);
        }
        return out;
    }
}

} // namespace detail

/// One seeded trial; deterministic in (all inputs, trial_seed).
inline TrialResult run_trial(const SystemConfig &cfg, const RfErrorProfile &profile, Scheme scheme,
                             Normalization norm, std::uint64_t trial_seed) {
    cfg.validate();
    const ErrorFactors f = derive_error_factors(profile, cfg.tau);
    return detail::run_trial_impl(cfg, profile, f, scheme, norm, trial_seed);
}

struct SinrEstimate {
    double sinr_eq19 = 0.0;       ///< mean(P_s) x mean(1/(P_I + noise))
    double sinr_mean_ratio = 0.0; ///< mean(P_s / (P_I + noise)), diagnostic
    double std_error = 0.0;       ///< delta-method standard error of sinr_eq19
    int trials = 0;
};

/// Pools users (statistically identical by construction) and trials. The
/// standard error comes from the delta method applied to the product of the
/// two sample means, with moments taken over per-trial user averages so that
/// within-trial correlation across users is accounted for.
inline SinrEstimate estimate_sinr(const std::vector<TrialResult> &trials, double noise_var) {
    require(trials.size() >= 2, "estimate_sinr: needs at least 2 trials");
    require(noise_var > 0.0, "estimate_sinr: noise variance must be > 0");
    const std::size_t n = trials.size();
    std::vector<double> a(n), b(n);
    double mean_ratio = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        const TrialResult &tr = trials[t];
        require(!tr.p_s.empty() && tr.p_s.size() == tr.p_i.size(),
                "estimate_sinr: malformed trial result");
        double sa = 0.0, sb = 0.0, sr = 0.0;
        for (std::size_t k = 0; k < tr.p_s.size(); ++k) {
            sa += tr.p_s[k];
            sb += 1.0 / (tr.p_i[k] + noise_var);
            sr += tr.p_s[k] / (tr.p_i[k] + noise_var);
        }
        const double inv_k = 1.0 / double(tr.p_s.size());
        a[t] = sa * inv_k;
        b[t] = sb * inv_k;
        mean_ratio += sr * inv_k;
    }
    double ma = 0.0, mb = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        ma += a[t];
        mb += b[t];
    }
    ma /= double(n);
    mb /= double(n);
    double va = 0.0, vb = 0.0, cab = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        va += (a[t] - ma) * (a[t] - ma);
        vb += (b[t] - mb) * (b[t] - mb);
        cab += (a[t] - ma) * (b[t] - mb);
    }
    const double dof = double(n - 1) * double(n);
    va /= dof;
    vb /= dof;
    cab /= dof;

    SinrEstimate e;
    e.trials = static_cast<int>(n);
    e.sinr_eq19 = ma * mb;
    e.sinr_mean_ratio = mean_ratio / double(n);
    const double v = mb * mb * va + ma * ma * vb + 2.0 * ma * mb * cab;
    e.std_error = v > 0.0 ? std::sqrt(v) : 0.0;
    return e;
}

/// Runs fn(i) for i in [0, n) on `workers` threads; results land in a vector
/// indexed by i, so any later reduction is schedule-independent.
template <typename F, typename R = std::invoke_result_t<F, int>>
std::vector<R> run_indexed_parallel(int n, int workers, F &&fn) {
    std::vector<R> results(n);
    workers = std::max(1, std::min(workers, n));
    if (workers == 1) {
        for (int i = 0; i < n; ++i)
            results[i] = fn(i);
        return results;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    std::exception_ptr error;
    std::atomic<bool> failed{false};
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= n || failed.load())
                    return;
                try {
                    results[i] = fn(i);
                } catch (...) {
                    if (!failed.exchange(true))
                        error = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto &t : pool)
        t.join();
    if (failed.load())
        std::rethrow_exception(error);
    return results;
}

enum class SweepVariable { amp_variance, phase_variance, both_variances, antennas, rho_db, tau2 };

inline const char *to_string(SweepVariable v) {
    switch (v) {
    case SweepVariable::amp_variance: return "amp_variance";
    case SweepVariable::phase_variance: return "phase_variance";
    case SweepVariable::both_variances: return "both_variances";
    case SweepVariable::antennas: return "M";
    case SweepVariable::rho_db: return "rho_db";
    case SweepVariable::tau2: return "tau2";
    }
    return "?";
}

struct SweepSpec {
    SweepVariable variable = SweepVariable::rho_db;
    std::vector<double> values;
};

struct SweepRow {
    SweepVariable variable;
    double value = 0.0;
    Scheme scheme = Scheme::mrt;
    double sinr_analytic_db = 0.0;
    double sinr_mc_db = 0.0;
    double sinr_mc_stderr_db = 0.0;
    double sinr_mean_ratio_db = 0.0;
    double a_t = 1.0, a_r = 1.0, a_i = 1.0, b_i = 1.0;
    double tau2 = 0.0;
    int m = 0, k = 0;
    double rho_db = 0.0;
    int trials = 0;
    std::uint64_t master_seed = 0;
    long redraws = 0;
};

/// Applies one sweep value to a (config, profile-spec) pair.
inline void apply_sweep_value(SweepVariable var, double value, SystemConfig &cfg,
                              ProfileSpec &spec) {
    switch (var) {
    case SweepVariable::amp_variance:
        require(value >= 0.0, "sweep: amp_variance must be >= 0");
        spec.amp_tx.variance = spec.amp_rx.variance = value;
        return;
    case SweepVariable::phase_variance:
        require(value >= 0.0, "sweep: phase_variance must be >= 0");
        spec.phase_tx.variance = spec.phase_rx.variance = value;
        return;
    case SweepVariable::both_variances:
        require(value >= 0.0, "sweep: both_variances must be >= 0");
        spec.amp_tx.variance = spec.amp_rx.variance = value;
        spec.phase_tx.variance = spec.phase_rx.variance = value;
        return;
    case SweepVariable::antennas: {
        const int m = static_cast<int>(value);
        require(m >= 1 && double(m) == value, "sweep: M values must be positive integers");
        cfg.m = m;
        return;
    }
    case SweepVariable::rho_db:
        cfg.rho_d = from_db(value);
        return;
    case SweepVariable::tau2:
        require(value >= 0.0 && value <= 1.0, "sweep: tau2 must lie in [0, 1]");
        cfg.tau = std::sqrt(value);
        return;
    }
    throw std::invalid_argument("sweep: unknown variable");
}

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// Full sweep: one row per (value, scheme). Trial seeds are derived from
/// (master_seed, sweep_index, trial_index) only — shared across schemes on
/// purpose (common random numbers) and independent of the worker schedule.
/// ZF rows whose geometry is invalid (M <= K) are skipped.
inline std::vector<SweepRow>
run_sweep(const SystemConfig &base_cfg, const ProfileSpec &profile_template, const SweepSpec &sweep,
          const std::vector<Scheme> &schemes, int trials, std::uint64_t master_seed,
          Normalization norm = Normalization::analytic, int workers = 1,
          const ProgressFn &progress = {}) {
    require(trials >= 2, "run_sweep: trials must be >= 2");
    require(!schemes.empty(), "run_sweep: at least one scheme");
    std::vector<SweepRow> rows;
    const std::size_t total = sweep.values.size() * schemes.size();
    std::size_t done = 0;
    for (std::size_t vi = 0; vi < sweep.values.size(); ++vi) {
        SystemConfig cfg = base_cfg;
        ProfileSpec spec = profile_template;
        apply_sweep_value(sweep.variable, sweep.values[vi], cfg, spec);
        cfg.validate();
        const RfErrorProfile profile = RfErrorProfile::make(spec);
        const ErrorFactors f = derive_error_factors(profile, cfg.tau);
        for (Scheme scheme : schemes) {
            if (scheme == Scheme::zf && cfg.m <= cfg.k) {
                ++done;
                continue; // ZF undefined for this geometry; row omitted
            }
            const AnalyticSinr an = analytic_sinr(cfg, f, scheme);
            const std::vector<TrialResult> results =
                run_indexed_parallel(trials, workers, [&](int ti) {
                    return detail::run_trial_impl(cfg, profile, f, scheme, norm,
                                                  mix_seed(master_seed, vi, ti));
                });
            const SinrEstimate est = estimate_sinr(results, cfg.noise_var);
            long redraws = 0;
            for (const TrialResult &r : results)
                redraws += r.redraws;

            SweepRow row;
            row.variable = sweep.variable;
            row.value = sweep.values[vi];
            row.scheme = scheme;
            row.sinr_analytic_db = an.sinr_db;
            row.sinr_mc_db = to_db(est.sinr_eq19);
            // dB-domain standard error by the delta method
            row.sinr_mc_stderr_db = 10.0 / std::log(10.0) * est.std_error / est.sinr_eq19;
            row.sinr_mean_ratio_db = to_db(est.sinr_mean_ratio);
            row.a_t = f.a_t;
            row.a_r = f.a_r;
            row.a_i = f.a_i;
            row.b_i = f.b_i;
            row.tau2 = cfg.tau2();
            row.m = cfg.m;
            row.k = cfg.k;
            row.rho_db = to_db(cfg.rho_d);
            row.trials = trials;
            row.master_seed = master_seed;
            row.redraws = redraws;
            rows.push_back(row);
            ++done;
            if (progress)
                progress(done, total);
        }
    }
    return rows;
}

} // namespace mimo_recip

#endif
