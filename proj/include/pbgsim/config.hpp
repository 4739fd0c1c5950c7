#pragma once

// Flat key-value run configuration. Keys are the long CLI flag names without
// the leading dashes; the same table reads config files, command-line
// overrides and the "config" block of a run.json sidecar.

#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "pbgsim/dos.hpp"
#include "pbgsim/errors.hpp"
#include "pbgsim/observables.hpp"

namespace pbgsim {

enum class Experiment { decay, two_photon, convergence, oracle };

inline const char* to_string(Experiment e) {
    switch (e) {
        case Experiment::decay: return "decay";
        case Experiment::two_photon: return "two-photon";
        case Experiment::convergence: return "convergence";
        case Experiment::oracle: return "oracle";
    }
    return "?";
}

inline Experiment experiment_from_string(const std::string& s) {
    if (s == "decay") return Experiment::decay;
    if (s == "two-photon") return Experiment::two_photon;
    if (s == "convergence") return Experiment::convergence;
    if (s == "oracle") return Experiment::oracle;
    throw ConfigError("unknown experiment '" + s + "'");
}

struct RunConfig {
    Experiment kind = Experiment::decay;
    std::size_t n_modes = 150;
    std::vector<std::size_t> sweep{50, 150, 500};
    double omega_u = 36.0;
    std::optional<double> delta_seed;  // empty: one unit cell above the edge
    Scheme scheme = Scheme::FirstOrder;
    double delta_o = 0.0;
    double delta_d = 0.0;
    double g_d = 0.0;
    double coupling_C = 1.0;  // 1 in the natural C^(2/3) units
    double t_max = 10.0;
    double dt = 1e-3;
    std::size_t sample_stride = 10;
    std::string out = "out";
    bool include_shift = true;
    OnePhotonSector sector = OnePhotonSector::AllStates;
    double sup_window = 10.0;
    double revival_threshold = 0.05;
    std::size_t max_states = 20'000'000;
    bool with_oracle = false;
};

inline RunConfig default_config(Experiment kind) {
    RunConfig cfg;
    cfg.kind = kind;
    switch (kind) {
        case Experiment::decay:
        case Experiment::oracle:
            break;
        case Experiment::two_photon:
            cfg.t_max = 20.0;
            cfg.g_d = 1.0;
            cfg.delta_o = -0.1;
            cfg.delta_d = -0.1;
            break;
        case Experiment::convergence:
            cfg.t_max = 80.0;
            break;
    }
    return cfg;
}

namespace detail {

inline std::string format_double(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(const std::string& key, const std::string& v) {
    std::size_t used = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != v.size())
        throw ConfigError("'" + key + "': expected a number, got '" + v + "'");
    return x;
}

inline std::size_t parse_count(const std::string& key, const std::string& v) {
    std::size_t x = 0;
    const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
    if (ec != std::errc{} || ptr != v.data() + v.size())
        throw ConfigError("'" + key + "': expected a nonnegative integer, got '" + v + "'");
    return x;
}

inline bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError("'" + key + "': expected true/false, got '" + v + "'");
}

using Setter = std::function<void(RunConfig&, const std::string&)>;

inline const std::map<std::string, Setter>& setters() {
    static const std::map<std::string, Setter> table = {
        {"modes", [](RunConfig& c, const std::string& v) { c.n_modes = parse_count("modes", v); }},
        {"sweep",
         [](RunConfig& c, const std::string& v) {
             c.sweep.clear();
             std::stringstream ss(v);
             std::string item;
             while (std::getline(ss, item, ','))
                 if (!trim(item).empty()) c.sweep.push_back(parse_count("sweep", trim(item)));
         }},
        {"omega-u", [](RunConfig& c, const std::string& v) { c.omega_u = parse_double("omega-u", v); }},
        {"delta-seed",
         [](RunConfig& c, const std::string& v) {
             if (v == "auto") c.delta_seed.reset();
             else c.delta_seed = parse_double("delta-seed", v);
         }},
        {"scheme",
         [](RunConfig& c, const std::string& v) {
             if (v == "first-order") c.scheme = Scheme::FirstOrder;
             else if (v == "midpoint") c.scheme = Scheme::Midpoint;
             else throw ConfigError("'scheme': expected first-order or midpoint, got '" + v + "'");
         }},
        {"delta0", [](RunConfig& c, const std::string& v) { c.delta_o = parse_double("delta0", v); }},
        {"deltad", [](RunConfig& c, const std::string& v) { c.delta_d = parse_double("deltad", v); }},
        {"gd", [](RunConfig& c, const std::string& v) { c.g_d = parse_double("gd", v); }},
        {"coupling-c", [](RunConfig& c, const std::string& v) { c.coupling_C = parse_double("coupling-c", v); }},
        {"tmax", [](RunConfig& c, const std::string& v) { c.t_max = parse_double("tmax", v); }},
        {"dt", [](RunConfig& c, const std::string& v) { c.dt = parse_double("dt", v); }},
        {"stride", [](RunConfig& c, const std::string& v) { c.sample_stride = parse_count("stride", v); }},
        {"out", [](RunConfig& c, const std::string& v) { c.out = v; }},
        {"no-shift", [](RunConfig& c, const std::string& v) { c.include_shift = !parse_bool("no-shift", v); }},
        {"sector",
         [](RunConfig& c, const std::string& v) {
             if (v == "inclusive") c.sector = OnePhotonSector::AllStates;
             else if (v == "ground-atom") c.sector = OnePhotonSector::GroundAtom;
             else throw ConfigError("'sector': expected inclusive or ground-atom, got '" + v + "'");
         }},
        {"sup-window", [](RunConfig& c, const std::string& v) { c.sup_window = parse_double("sup-window", v); }},
        {"revival-threshold",
         [](RunConfig& c, const std::string& v) { c.revival_threshold = parse_double("revival-threshold", v); }},
        {"max-states", [](RunConfig& c, const std::string& v) { c.max_states = parse_count("max-states", v); }},
        {"oracle", [](RunConfig& c, const std::string& v) { c.with_oracle = parse_bool("oracle", v); }},
    };
    return table;
}

}  // namespace detail

inline void apply_setting(RunConfig& cfg, const std::string& key,
                          const std::string& value) {
    const auto& table = detail::setters();
    const auto it = table.find(key);
    if (it == table.end()) throw ConfigError("unknown configuration key '" + key + "'");
    it->second(cfg, detail::trim(value));
}

inline void apply_settings(RunConfig& cfg,
                           const std::map<std::string, std::string>& kv) {
    for (const auto& [k, v] : kv) apply_setting(cfg, k, v);
}

/// `key = value` per line; `#` starts a comment.
inline std::map<std::string, std::string> parse_config_text(const std::string& text) {
    std::map<std::string, std::string> kv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = detail::trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
        kv[detail::trim(line.substr(0, eq))] = detail::trim(line.substr(eq + 1));
    }
    return kv;
}

inline std::map<std::string, std::string> read_config_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config_text(ss.str());
}

/// Inverse of apply_settings: every field as a lossless string.
inline std::map<std::string, std::string> to_settings(const RunConfig& c) {
    using detail::format_double;
    std::string sweep;
    for (std::size_t i = 0; i < c.sweep.size(); ++i)
        sweep += (i ? "," : "") + std::to_string(c.sweep[i]);
    return {
        {"modes", std::to_string(c.n_modes)},
        {"sweep", sweep},
        {"omega-u", format_double(c.omega_u)},
        {"delta-seed", c.delta_seed ? format_double(*c.delta_seed) : "auto"},
        {"scheme", to_string(c.scheme)},
        {"delta0", format_double(c.delta_o)},
        {"deltad", format_double(c.delta_d)},
        {"gd", format_double(c.g_d)},
        {"coupling-c", format_double(c.coupling_C)},
        {"tmax", format_double(c.t_max)},
        {"dt", format_double(c.dt)},
        {"stride", std::to_string(c.sample_stride)},
        {"out", c.out},
        {"no-shift", c.include_shift ? "false" : "true"},
        {"sector", c.sector == OnePhotonSector::AllStates ? "inclusive" : "ground-atom"},
        {"sup-window", format_double(c.sup_window)},
        {"revival-threshold", format_double(c.revival_threshold)},
        {"max-states", std::to_string(c.max_states)},
        {"oracle", c.with_oracle ? "true" : "false"},
    };
}

/// Basis size of the sector a run will allocate.
inline std::size_t sector_size(const RunConfig& c, std::size_t n_modes) {
    switch (c.kind) {
        case Experiment::two_photon:
            return 2 + 2 * n_modes + n_modes * (n_modes + 1) / 2;
        case Experiment::oracle:
            return 1;
        default:
            return 1 + (c.g_d != 0.0 ? 1 : 0) + n_modes;
    }
}

/// Cheap checks run before anything is allocated.
inline void validate(const RunConfig& c) {
    auto fail = [](const std::string& m) { throw ConfigError(m); };
    if (!(c.dt > 0.0)) fail("dt must be positive");
    if (!(c.t_max >= 0.0)) fail("tmax must be nonnegative");
    if (c.sample_stride < 1) fail("stride must be at least 1");
    if (c.kind != Experiment::oracle) {
        if (!(c.omega_u > 0.0)) fail("omega-u must lie above the band edge");
        if (c.delta_seed && !(*c.delta_seed > 0.0)) fail("delta-seed must be positive");
        if (c.delta_seed && !(*c.delta_seed < c.omega_u)) fail("delta-seed must be below omega-u");
    }
    if (!(c.coupling_C >= 0.0)) fail("coupling-c must be nonnegative");
    std::vector<std::size_t> ns;
    if (c.kind == Experiment::convergence) ns = c.sweep;
    else if (c.kind != Experiment::oracle) ns = {c.n_modes};
    if (c.kind == Experiment::convergence && ns.empty()) fail("sweep must list at least one N");
    for (std::size_t n : ns) {
        if (n < 1) fail("modes must be at least 1");
        if (c.scheme == Scheme::Midpoint && n < 2) fail("midpoint scheme needs at least 2 modes");
        const std::size_t size = sector_size(c, n);
        if (size > c.max_states)
            fail("N = " + std::to_string(n) + " needs " + std::to_string(size) +
                 " amplitudes, above max-states = " + std::to_string(c.max_states) +
                 "; the sector grows as N^p for p excitations");
    }
    if (c.kind == Experiment::convergence && !(c.sup_window > 0.0)) fail("sup-window must be positive");
}

}  // namespace pbgsim
