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

#ifndef MIMO_RECIP_EXPERIMENT_HPP
#define MIMO_RECIP_EXPERIMENT_HPP

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "analytic_sinr.hpp"
#include "config.hpp"
#include "monte_carlo.hpp"
#include "presets.hpp"

namespace mimo_recip {

namespace csv {

/// Locale-independent number formatting, 12 significant digits.
inline std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 12);
    return std::string(buf, res.ptr);
}

inline std::string fmt(int v) { return std::to_string(v); }
inline std::string fmt(long v) { return std::to_string(v); }
inline std::string fmt(std::uint64_t v) { return std::to_string(v); }

/// RFC-4180 line termination.
inline constexpr const char *eol = "\r\n";

inline std::string header() {
    return std::string("sweep_variable,sweep_value,scheme,sinr_analytic_db,sinr_mc_db,"
                       "sinr_mc_stderr_db,sinr_mean_ratio_db,A_t,A_r,A_I,B_I,tau2,M,K,rho_db,"
                       "trials,master_seed,redraws") +
           eol;
}

inline std::string row(const SweepRow &r) {
    std::string s;
    s += to_string(r.variable);
    s += ',';
    s += fmt(r.value);
    s += ',';
    s += to_string(r.scheme);
    s += ',';
    s += fmt(r.sinr_analytic_db);
    s += ',';
    s += fmt(r.sinr_mc_db);
    s += ',';
    s += fmt(r.sinr_mc_stderr_db);
    s += ',';
    s += fmt(r.sinr_mean_ratio_db);
    s += ',';
    s += fmt(r.a_t);
    s += ',';
    s += fmt(r.a_r);
    s += ',';
    s += fmt(r.a_i);
    s += ',';
    s += fmt(r.b_i);
    s += ',';
    s += fmt(r.tau2);
    s += ',';
    s += fmt(r.m);
    s += ',';
    s += fmt(r.k);
    s += ',';
    s += fmt(r.rho_db);
    s += ',';
    s += fmt(r.trials);
    s += ',';
    s += fmt(r.master_seed);
    s += ',';
    s += fmt(r.redraws);
    s += eol;
    return s;
}

inline std::string table(const std::vector<SweepRow> &rows) {
    std::string s = header();
    for (const SweepRow &r : rows)
        s += row(r);
    return s;
}

inline void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

} // namespace csv

/// Ratio overlay row for the ZF/MRT comparison figure.
struct RatioRow {
    SweepVariable variable;
    double value = 0.0;
    double tau2 = 0.0;
    double ratio_analytic = 0.0; ///< sinr_zf / sinr_mrt, exact closed forms
    double ratio_mc = 0.0;
    double ratio_mc_stderr = 0.0;
    double c_asymptotic = 0.0;   ///< 1/(1 - (1-tau2) A_I); +inf at perfect reciprocity
    int m = 0, k = 0;
    double rho_db = 0.0;
    int trials = 0;
    std::uint64_t master_seed = 0;
};

namespace csv {

inline std::string ratio_header() {
    return std::string("sweep_variable,sweep_value,tau2,ratio_analytic,ratio_mc,ratio_mc_stderr,"
                       "c_asymptotic,M,K,rho_db,trials,master_seed") +
           eol;
}

inline std::string ratio_row(const RatioRow &r) {
    std::string s;
    s += to_string(r.variable);
    s += ',';
    s += fmt(r.value);
    s += ',';
    s += fmt(r.tau2);
    s += ',';
    s += fmt(r.ratio_analytic);
    s += ',';
    s += fmt(r.ratio_mc);
    s += ',';
    s += fmt(r.ratio_mc_stderr);
    s += ',';
    s += fmt(r.c_asymptotic);
    s += ',';
    s += fmt(r.m);
    s += ',';
    s += fmt(r.k);
    s += ',';
    s += fmt(r.rho_db);
    s += ',';
    s += fmt(r.trials);
    s += ',';
    s += fmt(r.master_seed);
    s += eol;
    return s;
}

} // namespace csv

/// Builds ratio rows from a sweep table that contains both schemes per value.
inline std::vector<RatioRow> ratio_rows_from_sweep(const std::vector<SweepRow> &rows) {
    std::vector<RatioRow> out;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].scheme != Scheme::mrt)
            continue;
        for (std::size_t j = 0; j < rows.size(); ++j) {
            if (rows[j].scheme == Scheme::zf && rows[j].value == rows[i].value) {
                const SweepRow &m = rows[i], &z = rows[j];
                RatioRow r;
                r.variable = m.variable;
                r.value = m.value;
                r.tau2 = m.tau2;
                r.ratio_analytic = from_db(z.sinr_analytic_db - m.sinr_analytic_db);
                r.ratio_mc = from_db(z.sinr_mc_db - m.sinr_mc_db);
                const double rel_m = m.sinr_mc_stderr_db, rel_z = z.sinr_mc_stderr_db;
                r.ratio_mc_stderr =
                    r.ratio_mc * std::log(10.0) / 10.0 * std::sqrt(rel_m * rel_m + rel_z * rel_z);
                const double bt = (1.0 - m.tau2) * m.a_i;
                r.c_asymptotic = bt >= 1.0 ? constants::inf : 1.0 / (1.0 - bt);
                r.m = m.m;
                r.k = m.k;
                r.rho_db = m.rho_db;
                r.trials = m.trials;
                r.master_seed = m.master_seed;
                out.push_back(r);
            }
        }
    }
    return out;
}

namespace gnuplot {

inline std::string preamble(const std::string &svg_name, const std::string &xlabel,
                            const std::string &ylabel) {
    std::string s;
    s += "set terminal svg size 840,540 dynamic\n";
    s += "set output \"" + svg_name + "\"\n";
    s += "set datafile separator \",\"\n";
    s += "set grid\n";
    s += "set key outside right\n";
    s += "set xlabel \"" + xlabel + "\"\n";
    s += "set ylabel \"" + ylabel + "\"\n";
    return s;
}

/// One analytic line plus one simulated point series per scheme in the file.
inline std::string series(const std::string &file, const std::string &scheme,
                          const std::string &label, bool first) {
    std::string s = first ? "plot " : ", \\\n     ";
    s += "\"" + file + "\" skip 1 using 2:(strcol(3) eq \"" + scheme + "\" ? $4 : 1/0) with lines title \"" +
         label + " analytic\"";
    s += ", \\\n     \"" + file + "\" skip 1 using 2:(strcol(3) eq \"" + scheme +
         "\" ? $5 : 1/0) with points pt 6 title \"" + label + " simulated\"";
    return s;
}

} // namespace gnuplot

struct SweepOutput {
    std::vector<std::string> files;   ///< everything written, CSV first
    std::vector<SweepRow> rows;
};

/// Executes one configured sweep and writes the CSV (plus optional plot
/// script). Byte-identical output for identical inputs.
inline SweepOutput run_sweep_to_files(const ExperimentConfig &cfg, const std::string &out_csv,
                                      bool plot, int workers, const ProgressFn &progress = {}) {
    SweepOutput out;
    out.rows = run_sweep(cfg.system, cfg.profile, cfg.sweep, cfg.schemes, cfg.trials,
                         cfg.master_seed, cfg.normalization, workers, progress);
    csv::write_file(out_csv, csv::table(out.rows));
    out.files.push_back(out_csv);
    if (plot) {
        const std::filesystem::path p(out_csv);
        const std::string base = p.stem().string();
        const std::string gp = (p.parent_path() / (base + ".gp")).string();
        std::string s = gnuplot::preamble(base + ".svg", to_string(cfg.sweep.variable),
                                          "Output SINR (dB)");
        bool first = true;
        for (Scheme sc : cfg.schemes) {
            s += gnuplot::series(p.filename().string(), to_string(sc),
                                 sc == Scheme::mrt ? "MRT" : "ZF", first);
            first = false;
        }
        s += "\n";
        csv::write_file(gp, s);
        out.files.push_back(gp);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Figure presets
// ---------------------------------------------------------------------------

struct FigureOutput {
    std::vector<std::string> files;
};

namespace detail {

struct FigureVariant {
    std::string label; ///< file suffix, e.g. "normal"
    SystemConfig cfg;
    ProfileSpec profile;
    SweepSpec sweep;
    std::vector<Scheme> schemes;
};

inline std::string figure_xlabel(int id) {
    switch (id) {
    case 2:
    case 3:
        return "amplitude error variance";
    case 4:
    case 5:
        return "phase error variance";
    case 6:
        return "number of BS antennas M";
    case 7:
    case 8:
        return "transmit SNR (dB)";
    case 9:
        return "error variance (amp = phase)";
    }
    return "sweep value";
}

inline std::vector<FigureVariant> figure_variants(int id) {
    using namespace presets;
    std::vector<FigureVariant> v;
    SystemConfig base = default_system();
    switch (id) {
    case 2:
    case 3: {
        FigureVariant f;
        f.label = "";
        f.cfg = base;
        f.profile = normal_profile(); // phase errors stay fixed at the normal level
        f.sweep = {SweepVariable::amp_variance, variance_grid()};
        f.schemes = {id == 2 ? Scheme::mrt : Scheme::zf};
        v.push_back(f);
        return v;
    }
    case 4:
    case 5: {
        FigureVariant f;
        f.label = "";
        f.cfg = base;
        f.profile = normal_profile(); // amplitude errors stay fixed at the normal level
        f.sweep = {SweepVariable::phase_variance, variance_grid()};
        f.schemes = {id == 4 ? Scheme::mrt : Scheme::zf};
        v.push_back(f);
        return v;
    }
    case 6: {
        for (const auto &[label, prof] :
             {std::pair{std::string("normal"), normal_profile()},
              std::pair{std::string("high"), high_profile()}}) {
            FigureVariant f;
            f.label = label;
            f.cfg = base;
            f.profile = prof;
            f.sweep = {SweepVariable::antennas, antenna_grid()};
            f.schemes = {Scheme::mrt, Scheme::zf};
            v.push_back(f);
        }
        return v;
    }
    case 7:
    case 8: {
        for (const auto &[label, prof] :
             {std::pair{std::string("none"), error_free_profile()},
              std::pair{std::string("normal"), normal_profile()},
              std::pair{std::string("high"), high_profile()}}) {
            FigureVariant f;
            f.label = label;
            f.cfg = base;
            if (id == 8)
                f.cfg.tau = std::sqrt(0.1);
            f.profile = prof;
            f.sweep = {SweepVariable::rho_db, snr_grid_db()};
            f.schemes = {Scheme::mrt, Scheme::zf};
            v.push_back(f);
        }
        return v;
    }
    case 9: {
        for (const auto &[label, t2] : {std::pair{std::string("tau2_0"), 0.0},
                                        std::pair{std::string("tau2_001"), 0.01}}) {
            FigureVariant f;
            f.label = label;
            f.cfg = base;
            f.cfg.rho_d = from_db(20.0);
            f.cfg.tau = std::sqrt(t2);
            f.profile = high_profile(); // ranges from the high level; variances swept
            f.sweep = {SweepVariable::both_variances, variance_grid()};
            f.schemes = {Scheme::mrt, Scheme::zf};
            v.push_back(f);
        }
        return v;
    }
    default:
        throw config_error("figure: unknown id " + std::to_string(id) + " (expected 2..9)");
    }
}

} // namespace detail

/// Runs the preset behind one published figure and writes its CSV file(s)
/// plus a gnuplot script. Figure 9 additionally writes the ZF/MRT ratio
/// overlay table.
inline FigureOutput run_figure(int id, const std::string &out_dir, int trials,
                               std::uint64_t master_seed, int workers,
                               const ProgressFn &progress = {}) {
    const std::vector<detail::FigureVariant> variants = detail::figure_variants(id);
    std::filesystem::create_directories(out_dir.empty() ? "." : out_dir);
    const std::filesystem::path dir(out_dir.empty() ? "." : out_dir);

    FigureOutput out;
    const std::string stem = "figure" + std::to_string(id);
    std::string gp = gnuplot::preamble(stem + ".svg", detail::figure_xlabel(id),
                                       id == 9 ? "SINR ratio ZF / MRT" : "Output SINR (dB)");
    bool first = true;
    std::vector<RatioRow> ratio_rows;

    for (const auto &var : variants) {
        const std::string name = var.label.empty() ? stem : stem + "_" + var.label;
        const std::string file = (dir / (name + ".csv")).string();
        const std::vector<SweepRow> rows =
            run_sweep(var.cfg, var.profile, var.sweep, var.schemes, trials, master_seed,
                      Normalization::analytic, workers, progress);
        csv::write_file(file, csv::table(rows));
        out.files.push_back(file);
        if (id == 9) {
            const auto rr = ratio_rows_from_sweep(rows);
            ratio_rows.insert(ratio_rows.end(), rr.begin(), rr.end());
        } else {
            for (Scheme sc : var.schemes) {
                const std::string label =
                    (sc == Scheme::mrt ? std::string("MRT") : std::string("ZF")) +
                    (var.label.empty() ? "" : " " + var.label);
                gp += gnuplot::series(name + ".csv", to_string(sc), label, first);
                first = false;
            }
        }
    }

    if (id == 9) {
        const std::string rfile = (dir / (stem + "_ratio.csv")).string();
        std::string body = csv::ratio_header();
        for (const RatioRow &r : ratio_rows)
            body += csv::ratio_row(r);
        csv::write_file(rfile, body);
        out.files.push_back(rfile);
        for (const auto &t2 : {std::string("0"), std::string("0.01")}) {
            gp += first ? "plot " : ", \\\n     ";
            first = false;
            gp += "\"" + stem + "_ratio.csv\" skip 1 using 2:(strcol(3) eq \"" + t2 +
                  "\" ? $4 : 1/0) with lines title \"analytic tau2=" + t2 + "\"";
            gp += ", \\\n     \"" + stem + "_ratio.csv\" skip 1 using 2:(strcol(3) eq \"" + t2 +
                  "\" ? $5 : 1/0) with points pt 6 title \"simulated tau2=" + t2 + "\"";
            gp += ", \\\n     \"" + stem + "_ratio.csv\" skip 1 using 2:(strcol(3) eq \"" + t2 +
                  "\" ? $7 : 1/0) with lines dt 2 title \"asymptote tau2=" + t2 + "\"";
        }
    }

    gp += "\n";
    const std::string gpfile = (dir / (stem + ".gp")).string();
    csv::write_file(gpfile, gp);
    out.files.push_back(gpfile);
    return out;
}

} // namespace mimo_recip

#endif
