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

#ifndef MIMO_RECIP_CONFIG_HPP
#define MIMO_RECIP_CONFIG_HPP

#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "monte_carlo.hpp"
#include "precoding.hpp"
#include "rf_model.hpp"

namespace mimo_recip {

/// Raised for anything wrong with an experiment config: JSON syntax (with
/// line:column), unknown keys, missing keys, out-of-range values. Maps to
/// exit code 2 at the CLI.
class config_error : public std::runtime_error {
  public:
    explicit config_error(const std::string &msg) : std::runtime_error(msg) {}
};

struct ExperimentConfig {
    SystemConfig system;
    ProfileSpec profile;
    SweepSpec sweep;
    std::vector<Scheme> schemes{Scheme::mrt, Scheme::zf};
    int trials = 2000;
    std::uint64_t master_seed = 0x5eed2017ULL;
    Normalization normalization = Normalization::analytic;
    std::string output; ///< optional CSV path; CLI --out wins
};

namespace detail {

using json = nlohmann::json;

inline void reject_unknown_keys(const json &obj, std::initializer_list<const char *> allowed,
                                const std::string &where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char *k : allowed)
            if (it.key() == k)
                ok = true;
        if (!ok)
            throw config_error(where + ": unknown key '" + it.key() + "'");
    }
}

inline const json &get_required(const json &obj, const char *key, const std::string &where) {
    auto it = obj.find(key);
    if (it == obj.end())
        throw config_error(where + ": missing required key '" + key + "'");
    return *it;
}

inline double get_number(const json &obj, const char *key, const std::string &where) {
    const json &v = get_required(obj, key, where);
    if (!v.is_number())
        throw config_error(where + "." + key + ": expected a number");
    return v.get<double>();
}

inline int get_int(const json &obj, const char *key, const std::string &where) {
    const json &v = get_required(obj, key, where);
    if (!v.is_number_integer())
        throw config_error(where + "." + key + ": expected an integer");
    return v.get<int>();
}

inline Quad parse_quad(const json &obj, const std::string &where) {
    if (!obj.is_object())
        throw config_error(where + ": expected an object {mean, variance, low, high}");
    reject_unknown_keys(obj, {"mean", "variance", "low", "high"}, where);
    Quad q;
    q.mean = get_number(obj, "mean", where);
    q.variance = get_number(obj, "variance", where);
    q.low = get_number(obj, "low", where);
    q.high = get_number(obj, "high", where);
    if (q.variance < 0.0)
        throw config_error(where + ".variance: must be >= 0");
    if (q.variance > 0.0 && !(q.low < q.high))
        throw config_error(where + ": requires low < high");
    return q;
}

inline ProfileSpec parse_profile(const json &obj) {
    const std::string where = "profile";
    if (!obj.is_object())
        throw config_error(where + ": expected an object");
    reject_unknown_keys(obj,
                        {"amp_tx", "amp_rx", "phase_tx", "phase_rx", "amplitude_domain",
                         "phase_variance_unit"},
                        where);
    ProfileSpec p;
    p.amp_tx = parse_quad(get_required(obj, "amp_tx", where), where + ".amp_tx");
    p.amp_rx = parse_quad(get_required(obj, "amp_rx", where), where + ".amp_rx");
    p.phase_tx = parse_quad(get_required(obj, "phase_tx", where), where + ".phase_tx");
    p.phase_rx = parse_quad(get_required(obj, "phase_rx", where), where + ".phase_rx");
    if (auto it = obj.find("amplitude_domain"); it != obj.end()) {
        const std::string s = it->get<std::string>();
        if (s == "db")
            p.amplitude_domain = AmplitudeDomain::db;
        else if (s == "linear")
            p.amplitude_domain = AmplitudeDomain::linear;
        else
            throw config_error(where + ".amplitude_domain: must be 'db' or 'linear'");
    }
    if (auto it = obj.find("phase_variance_unit"); it != obj.end()) {
        const std::string s = it->get<std::string>();
        if (s == "rad2")
            p.phase_variance_unit = PhaseVarianceUnit::rad2;
        else if (s == "deg2")
            p.phase_variance_unit = PhaseVarianceUnit::deg2;
        else
            throw config_error(where + ".phase_variance_unit: must be 'rad2' or 'deg2'");
    }
    return p;
}

inline SweepVariable parse_sweep_variable(const std::string &s) {
    if (s == "amp_variance")
        return SweepVariable::amp_variance;
    if (s == "phase_variance")
        return SweepVariable::phase_variance;
    if (s == "both_variances")
        return SweepVariable::both_variances;
    if (s == "M")
        return SweepVariable::antennas;
    if (s == "rho_db")
        return SweepVariable::rho_db;
    if (s == "tau2")
        return SweepVariable::tau2;
    throw config_error("sweep.variable: unknown variable '" + s +
                       "' (expected amp_variance, phase_variance, both_variances, M, rho_db, "
                       "tau2)");
}

inline std::string line_anchor(const std::string &text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

} // namespace detail

/// Parses and fully validates an experiment config from JSON text.
inline ExperimentConfig parse_config(const std::string &text, const std::string &name = "config") {
    using detail::json;
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error &e) {
        throw config_error(name + ": JSON syntax error at " + detail::line_anchor(text, e.byte) +
                           ": " + e.what());
    }
    if (!root.is_object())
        throw config_error(name + ": top level must be an object");
    detail::reject_unknown_keys(root,
                                {"system", "profile", "sweep", "schemes", "trials", "master_seed",
                                 "normalization", "output"},
                                name);

    ExperimentConfig cfg;

    const json &sys = detail::get_required(root, "system", name);
    if (!sys.is_object())
        throw config_error("system: expected an object");
    detail::reject_unknown_keys(sys, {"M", "K", "rho_db", "tau2"}, "system");
    cfg.system.m = detail::get_int(sys, "M", "system");
    cfg.system.k = detail::get_int(sys, "K", "system");
    cfg.system.rho_d = from_db(detail::get_number(sys, "rho_db", "system"));
    const double tau2 = detail::get_number(sys, "tau2", "system");
    if (tau2 < 0.0 || tau2 > 1.0)
        throw config_error("system.tau2: must lie in [0, 1]");
    cfg.system.tau = std::sqrt(tau2);

    cfg.profile = detail::parse_profile(detail::get_required(root, "profile", name));

    const json &sw = detail::get_required(root, "sweep", name);
    if (!sw.is_object())
        throw config_error("sweep: expected an object");
    detail::reject_unknown_keys(sw, {"variable", "values"}, "sweep");
    cfg.sweep.variable =
        detail::parse_sweep_variable(detail::get_required(sw, "variable", "sweep").get<std::string>());
    const json &vals = detail::get_required(sw, "values", "sweep");
    if (!vals.is_array())
        throw config_error("sweep.values: expected an array of numbers");
    for (const auto &v : vals) {
        if (!v.is_number())
            throw config_error("sweep.values: expected an array of numbers");
        cfg.sweep.values.push_back(v.get<double>());
    }

    if (auto it = root.find("schemes"); it != root.end()) {
        cfg.schemes.clear();
        if (!it->is_array() || it->empty())
            throw config_error("schemes: expected a non-empty array");
        for (const auto &s : *it) {
            const std::string v = s.get<std::string>();
            if (v == "mrt")
                cfg.schemes.push_back(Scheme::mrt);
            else if (v == "zf")
                cfg.schemes.push_back(Scheme::zf);
            else
                throw config_error("schemes: unknown scheme '" + v + "'");
        }
    }
    if (auto it = root.find("trials"); it != root.end()) {
        if (!it->is_number_integer() || it->get<long long>() < 2)
            throw config_error("trials: expected an integer >= 2");
        cfg.trials = it->get<int>();
    }
    if (auto it = root.find("master_seed"); it != root.end()) {
        if (!it->is_number_unsigned() && !it->is_number_integer())
            throw config_error("master_seed: expected a non-negative integer");
        cfg.master_seed = it->get<std::uint64_t>();
    }
    if (auto it = root.find("normalization"); it != root.end()) {
        const std::string v = it->get<std::string>();
        if (v == "analytic")
            cfg.normalization = Normalization::analytic;
        else if (v == "empirical")
            cfg.normalization = Normalization::empirical;
        else
            throw config_error("normalization: must be 'analytic' or 'empirical'");
    }
    if (auto it = root.find("output"); it != root.end())
        cfg.output = it->get<std::string>();

    // run the nested model validations up front so bad configs fail before
    // any computation starts
    try {
        cfg.system.validate();
        (void)RfErrorProfile::make(cfg.profile);
        for (double v : cfg.sweep.values) {
            SystemConfig c2 = cfg.system;
            ProfileSpec p2 = cfg.profile;
            apply_sweep_value(cfg.sweep.variable, v, c2, p2);
            c2.validate();
            (void)RfErrorProfile::make(p2);
        }
    } catch (const std::invalid_argument &e) {
        throw config_error(name + ": " + e.what());
    }
    return cfg;
}

inline ExperimentConfig load_config(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw config_error(path + ": cannot open config file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path);
}

} // namespace mimo_recip

#endif
