#pragma once

// Command-line front end. Precedence: command line > --config file > defaults.
// Exit codes: 0 success, 2 configuration error, 3 numerical failure.

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pbgsim/config.hpp"
#include "pbgsim/experiments.hpp"

namespace pbgsim {

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericalError = 3 };

namespace detail {

struct SubcommandSpec {
    Experiment kind;
    const char* name;
    const char* help;
};

inline void add_run_options(CLI::App* sub, Experiment kind,
                            std::map<std::string, std::string>& cli,
                            std::string& config_path) {
    auto opt = [&](const std::string& key, const std::string& help) {
        sub->add_option_function<std::string>(
            "--" + key, [&cli, key](const std::string& v) { cli[key] = v; }, help);
    };
    sub->add_option("--config", config_path, "flat key = value file (keys are flag names)");
    if (kind != Experiment::oracle) {
        if (kind == Experiment::convergence)
            opt("sweep", "comma-separated list of mode counts N");
        else
            opt("modes", "number of discrete reservoir modes N");
        opt("omega-u", "upper edge of the discretized band (C^(2/3))");
        opt("delta-seed", "offset of the first mode above the edge, or 'auto'");
        opt("scheme", "first-order | midpoint");
        opt("sector", "inclusive | ground-atom (one-photon sector definition)");
        sub->add_flag_callback("--no-shift", [&cli] { cli["no-shift"] = "true"; },
                               "drop the vacuum shift of the eliminated modes");
        opt("max-states", "refuse runs whose sector has more amplitudes than this");
    }
    opt("delta0", "atomic detuning from the band edge");
    if (kind == Experiment::two_photon || kind == Experiment::decay) {
        opt("deltad", "defect detuning from the band edge");
        opt("gd", "atom-defect coupling");
    }
    opt("coupling-c", "effective coupling C (1 in natural units)");
    opt("tmax", "end time (C^(-2/3))");
    opt("dt", "integration step (C^(-2/3))");
    opt("stride", "write every k-th step");
    opt("out", "output directory");
    if (kind == Experiment::convergence) {
        opt("sup-window", "sup-norm deviation is taken over [0, sup-window]");
        opt("revival-threshold", "|dP| marking the revival onset");
    }
    if (kind == Experiment::decay)
        sub->add_flag_callback("--oracle", [&cli] { cli["oracle"] = "true"; },
                               "also solve the exact memory-kernel equation");
}

inline void report(std::ostream& out, const RunConfig& cfg) {
    out << to_string(cfg.kind) << ": wrote " << (std::filesystem::path(cfg.out) / "run.csv").string()
        << " and run.json\n";
}

inline int execute(const RunConfig& cfg, std::ostream& out) {
    switch (cfg.kind) {
        case Experiment::decay: {
            const auto r = run_decay(cfg);
            out << "N = " << cfg.n_modes << ", P_e(t_max) = " << r.trajectory.observables.back().p_excited
                << ", " << r.seconds << " s\n";
            break;
        }
        case Experiment::two_photon: {
            const auto r = run_two_photon(cfg);
            out << "N = " << cfg.n_modes << ", " << r.basis_size << " amplitudes, " << r.seconds << " s\n";
            break;
        }
        case Experiment::convergence: {
            const auto r = run_convergence(cfg);
            for (const auto& row : r.rows) {
                out << "N = " << row.n_modes << ": sup dev " << row.deviation.sup_window << ", t_rev ";
                if (row.deviation.revival) out << *row.deviation.revival;
                else out << "none";
                out << '\n';
            }
            break;
        }
        case Experiment::oracle:
            run_oracle(cfg);
            break;
    }
    report(out, cfg);
    return kOk;
}

}  // namespace detail

/// Entry point shared by the pbgsim executable and the tests.
inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
    CLI::App app{"Atom at a photonic band edge: discretized-continuum dynamics"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kVersion);

    static const detail::SubcommandSpec specs[] = {
        {Experiment::decay, "decay", "single-excitation spontaneous decay"},
        {Experiment::two_photon, "two-photon", "atom + loaded defect, two excitations"},
        {Experiment::convergence, "convergence", "N sweep against the exact solution"},
        {Experiment::oracle, "oracle", "exact memory-kernel decay"},
    };
    std::map<std::string, std::string> cli;
    std::string config_path;
    std::map<CLI::App*, Experiment> kinds;
    for (const auto& s : specs) {
        auto* sub = app.add_subcommand(s.name, s.help);
        detail::add_run_options(sub, s.kind, cli, config_path);
        kinds[sub] = s.kind;
    }
    auto* replay = app.add_subcommand("replay", "rerun from a run.json sidecar");
    std::string replay_path, replay_out;
    replay->add_option("sidecar", replay_path, "run.json written by an earlier run")->required();
    replay->add_option("--out", replay_out, "output directory (default: the recorded one)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    try {
        RunConfig cfg;
        if (replay->parsed()) {
            std::ifstream f(replay_path);
            if (!f) throw ConfigError("cannot open '" + replay_path + "'");
            nlohmann::json j;
            try {
                j = nlohmann::json::parse(f);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError("'" + replay_path + "' is not valid JSON: " + e.what());
            }
            cfg = default_config(experiment_from_string(j.at("experiment").get<std::string>()));
            apply_settings(cfg, j.at("config").get<std::map<std::string, std::string>>());
            if (!replay_out.empty()) cfg.out = replay_out;
        } else {
            Experiment kind{};
            for (const auto& [sub, k] : kinds)
                if (sub->parsed()) kind = k;
            cfg = default_config(kind);
            if (!config_path.empty()) apply_settings(cfg, read_config_file(config_path));
            apply_settings(cfg, cli);
        }
        validate(cfg);
        return detail::execute(cfg, out);
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kConfigError;
    } catch (const nlohmann::json::exception& e) {
        err << "error: malformed sidecar: " << e.what() << '\n';
        return kConfigError;
    }
}

}  // namespace pbgsim
