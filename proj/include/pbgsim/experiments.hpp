#pragma once

// Experiment drivers behind the CLI subcommands. The simulate_* functions
// return results in memory; the run_* functions additionally write
// <out>/run.csv and <out>/run.json.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <future>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "json.hpp"
#include "pbgsim/config.hpp"
#include "pbgsim/dos.hpp"
#include "pbgsim/dynamics.hpp"
#include "pbgsim/observables.hpp"
#include "pbgsim/oracle.hpp"
#include "pbgsim/statespace.hpp"

namespace pbgsim {

inline constexpr const char* kVersion = "1.0.0";

struct Model {
    DensityOfStates dos;
    DiscretizedReservoir reservoir;
};

inline Model build_model(const RunConfig& cfg, std::size_t n_modes) {
    Model m;
    m.dos = band_edge_dos(n_modes, cfg.omega_u, 0.0, cfg.coupling_C);
    const double delta = cfg.delta_seed.value_or(unit_cell_seed(m.dos));
    m.reservoir = discretize(m.dos, n_modes, cfg.omega_u, delta, cfg.scheme);
    return m;
}

inline SystemParams system_params(const RunConfig& cfg) {
    return {cfg.delta_o, cfg.delta_d, cfg.g_d, cfg.include_shift};
}

inline PropagationConfig propagation_config(const RunConfig& cfg) {
    PropagationConfig p;
    p.t_max = cfg.t_max;
    p.dt = cfg.dt;
    p.sample_stride = cfg.sample_stride;
    return p;
}

struct RunResult {
    Model model;
    std::size_t basis_size = 0;
    Trajectory trajectory;
    double seconds = 0.0;

    double max_norm_drift() const {
        double d = 0.0;
        for (const auto& r : trajectory.observables) d = std::max(d, std::abs(r.norm_sq - 1.0));
        return d;
    }
    std::vector<double> p_excited() const {
        std::vector<double> v;
        v.reserve(trajectory.observables.size());
        for (const auto& r : trajectory.observables) v.push_back(r.p_excited);
        return v;
    }
};

namespace detail {
inline double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}
}  // namespace detail

/// Single excitation from |e,0>; the defect joins the basis when g_d != 0.
inline RunResult simulate_decay(const RunConfig& cfg, std::size_t n_modes) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult out;
    out.model = build_model(cfg, n_modes);
    const auto basis = build_basis(1, n_modes, cfg.g_d != 0.0);
    out.basis_size = basis.size();
    const OneExcitationGenerator gen(system_params(cfg), out.model.reservoir, basis);
    out.trajectory = propagate(gen, initial_state(basis, initial::AtomExcited{}),
                               propagation_config(cfg),
                               [&](std::span<const cplx> psi) { return observe(basis, psi, cfg.sector); });
    out.seconds = detail::seconds_since(t0);
    return out;
}

/// Two excitations from |e,1_d,0>.
inline RunResult simulate_two_photon(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    RunResult out;
    out.model = build_model(cfg, cfg.n_modes);
    const auto basis = build_basis(2, cfg.n_modes, true);
    out.basis_size = basis.size();
    const TwoExcitationGenerator gen(system_params(cfg), out.model.reservoir, basis);
    out.trajectory = propagate(gen, initial_state(basis, initial::AtomExcitedDefectLoaded{}),
                               propagation_config(cfg),
                               [&](std::span<const cplx> psi) { return observe(basis, psi, cfg.sector); });
    out.seconds = detail::seconds_since(t0);
    return out;
}

struct OracleCurve {
    std::vector<double> times;       // sample times
    std::vector<cplx> amplitude;     // a0 at the sample times
    double step = 0.0;
    double seconds = 0.0;

    std::vector<double> p_excited() const {
        std::vector<double> v;
        for (const cplx& a : amplitude) v.push_back(std::norm(a));
        return v;
    }
};

/// Oracle on the propagation grid (step dt), sampled like a trajectory.
inline OracleCurve oracle_curve(const RunConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto grid = uniform_grid(cfg.t_max, cfg.dt);
    const auto a = solve_decay_exact({cfg.coupling_C, cfg.delta_o}, grid);
    OracleCurve c;
    c.step = cfg.dt;
    const std::size_t last = grid.size() - 1;
    for (std::size_t i = 0; i <= last; ++i) {
        if (i % cfg.sample_stride == 0 || i == last) {
            c.times.push_back(grid[i]);
            c.amplitude.push_back(a[i]);
        }
    }
    c.seconds = detail::seconds_since(t0);
    return c;
}

struct OracleDeviation {
    double sup_window = 0.0;  // max |dP| over [0, window]
    double sup_full = 0.0;    // max |dP| over the whole run
    std::optional<double> revival;  // first t with |dP| > threshold
};

inline OracleDeviation compare_to_oracle(const std::vector<double>& times,
                                         const std::vector<double>& p,
                                         const std::vector<double>& p_oracle,
                                         double window, double threshold) {
    if (p.size() != p_oracle.size() || times.size() != p.size())
        throw ShapeError("compare_to_oracle: curves sampled on different grids");
    OracleDeviation d;
    for (std::size_t i = 0; i < p.size(); ++i) {
        const double dev = std::abs(p[i] - p_oracle[i]);
        d.sup_full = std::max(d.sup_full, dev);
        if (times[i] <= window + 1e-12) d.sup_window = std::max(d.sup_window, dev);
        if (!d.revival && dev > threshold) d.revival = times[i];
    }
    return d;
}

struct ConvergenceRow {
    std::size_t n_modes = 0;
    OracleDeviation deviation;
    RunResult run;
};

struct ConvergenceResult {
    OracleCurve oracle;
    std::vector<ConvergenceRow> rows;
};

/// Decay runs for every N in cfg.sweep, concurrently, against one oracle.
inline ConvergenceResult simulate_convergence(const RunConfig& cfg) {
    ConvergenceResult out;
    std::vector<std::future<RunResult>> jobs;
    for (std::size_t n : cfg.sweep)
        jobs.push_back(std::async(std::launch::async, [&cfg, n] { return simulate_decay(cfg, n); }));
    out.oracle = oracle_curve(cfg);
    const auto p_oracle = out.oracle.p_excited();
    for (std::size_t i = 0; i < jobs.size(); ++i) {
        ConvergenceRow row;
        row.n_modes = cfg.sweep[i];
        row.run = jobs[i].get();
        row.deviation = compare_to_oracle(row.run.trajectory.times, row.run.p_excited(), p_oracle,
                                          cfg.sup_window, cfg.revival_threshold);
        out.rows.push_back(std::move(row));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Output

namespace detail {

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
        : f_(path) {
        if (!f_) throw ConfigError("cannot write '" + path.string() + "'");
        for (std::size_t i = 0; i < header.size(); ++i) f_ << (i ? "," : "") << header[i];
        f_ << '\n';
    }
    void row(std::initializer_list<double> values) {
        bool first = true;
        for (double v : values) {
            f_ << (first ? "" : ",") << format_double(v);
            first = false;
        }
        f_ << '\n';
    }
    void raw(const std::string& line) { f_ << line << '\n'; }

private:
    std::ofstream f_;
};

inline std::string utc_now() {
    const std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
}

inline nlohmann::json model_json(const Model& m, std::size_t basis_size) {
    const auto& r = m.reservoir;
    return {
        {"n_modes", r.n_modes},
        {"k", m.dos.k_const},
        {"coupling_g", r.coupling_g},
        {"vacuum_shift", r.vacuum_shift},
        {"delta_seed", r.delta_seed},
        {"omega_e", r.omega_e},
        {"omega_u", r.omega_u},
        {"omega_first", r.frequencies.front()},
        {"omega_last", r.frequencies.back()},
        {"basis_size", basis_size},
    };
}

inline nlohmann::json sidecar(const RunConfig& cfg) {
    nlohmann::json j;
    j["experiment"] = to_string(cfg.kind);
    j["config"] = to_settings(cfg);
    j["runtime"] = {
        {"version", kVersion},
        {"started_utc", utc_now()},
        {"hardware_threads", std::thread::hardware_concurrency()},
        {"integrator", "rk4-fixed-step"},
    };
    return j;
}

inline void write_json(const std::filesystem::path& path, const nlohmann::json& j) {
    std::ofstream f(path);
    if (!f) throw ConfigError("cannot write '" + path.string() + "'");
    f << j.dump(2) << '\n';
}

inline void write_decay_csv(const std::filesystem::path& path, const Trajectory& traj) {
    CsvWriter csv(path, {"t", "p_excited", "p_res_one", "norm_sq", "n_total"});
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& r = traj.observables[i];
        csv.row({traj.times[i], r.p_excited, r.p_res_one, r.norm_sq, r.n_total});
    }
}

inline void write_oracle_csv(const std::filesystem::path& path, const OracleCurve& c) {
    CsvWriter csv(path, {"t", "p_excited"});
    for (std::size_t i = 0; i < c.times.size(); ++i) csv.row({c.times[i], std::norm(c.amplitude[i])});
}

inline std::filesystem::path prepare_out(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ConfigError("cannot create output directory '" + cfg.out + "': " + ec.message());
    return dir;
}

inline nlohmann::json deviation_json(const OracleDeviation& d) {
    nlohmann::json j = {{"sup_dev_window", d.sup_window}, {"sup_dev_full", d.sup_full}};
    j["t_rev"] = d.revival ? nlohmann::json(*d.revival) : nlohmann::json(nullptr);
    return j;
}

}  // namespace detail

inline RunResult run_decay(const RunConfig& cfg) {
    validate(cfg);
    const auto dir = detail::prepare_out(cfg);
    RunResult res = simulate_decay(cfg, cfg.n_modes);
    detail::write_decay_csv(dir / "run.csv", res.trajectory);
    auto j = detail::sidecar(cfg);
    j["derived"] = detail::model_json(res.model, res.basis_size);
    j["runtime"]["seconds"] = res.seconds;
    j["checks"] = {{"max_norm_drift", res.max_norm_drift()}};
    if (cfg.with_oracle) {
        const auto oracle = oracle_curve(cfg);
        detail::write_oracle_csv(dir / "oracle.csv", oracle);
        j["oracle"] = detail::deviation_json(compare_to_oracle(
            res.trajectory.times, res.p_excited(), oracle.p_excited(), cfg.t_max, cfg.revival_threshold));
    }
    detail::write_json(dir / "run.json", j);
    return res;
}

inline RunResult run_two_photon(const RunConfig& cfg) {
    validate(cfg);
    const auto dir = detail::prepare_out(cfg);
    RunResult res = simulate_two_photon(cfg);
    {
        detail::CsvWriter csv(dir / "run.csv",
                              {"t", "p_excited", "n_defect", "p_res_one", "p_res_two", "norm_sq", "n_total"});
        const auto& traj = res.trajectory;
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const auto& r = traj.observables[i];
            csv.row({traj.times[i], r.p_excited, r.n_defect, r.p_res_one, r.p_res_two, r.norm_sq, r.n_total});
        }
    }
    auto j = detail::sidecar(cfg);
    j["derived"] = detail::model_json(res.model, res.basis_size);
    j["runtime"]["seconds"] = res.seconds;
    j["checks"] = {{"max_norm_drift", res.max_norm_drift()}};
    detail::write_json(dir / "run.json", j);
    return res;
}

inline ConvergenceResult run_convergence(const RunConfig& cfg) {
    validate(cfg);
    const auto dir = detail::prepare_out(cfg);
    ConvergenceResult res = simulate_convergence(cfg);
    detail::write_oracle_csv(dir / "run.csv", res.oracle);
    detail::CsvWriter summary(dir / "summary.csv", {"n_modes", "sup_dev", "sup_dev_full", "t_rev"});
    auto j = detail::sidecar(cfg);
    j["oracle"] = {{"step", res.oracle.step}, {"seconds", res.oracle.seconds}};
    j["runs"] = nlohmann::json::array();
    for (const auto& row : res.rows) {
        detail::write_decay_csv(dir / ("run_N" + std::to_string(row.n_modes) + ".csv"),
                                row.run.trajectory);
        const auto& d = row.deviation;
        summary.raw(std::to_string(row.n_modes) + "," + detail::format_double(d.sup_window) + "," +
                    detail::format_double(d.sup_full) + "," +
                    (d.revival ? detail::format_double(*d.revival) : ""));
        auto r = detail::model_json(row.run.model, row.run.basis_size);
        r["deviation"] = detail::deviation_json(d);
        r["seconds"] = row.run.seconds;
        r["max_norm_drift"] = row.run.max_norm_drift();
        j["runs"].push_back(r);
    }
    detail::write_json(dir / "run.json", j);
    return res;
}

inline OracleCurve run_oracle(const RunConfig& cfg) {
    validate(cfg);
    const auto dir = detail::prepare_out(cfg);
    OracleCurve c = oracle_curve(cfg);
    detail::write_oracle_csv(dir / "run.csv", c);
    auto j = detail::sidecar(cfg);
    j["derived"] = {{"step", c.step}};
    j["runtime"]["seconds"] = c.seconds;
    j["checks"] = {{"refinement_error", refinement_error({cfg.coupling_C, cfg.delta_o}, cfg.t_max, cfg.dt)}};
    detail::write_json(dir / "run.json", j);
    return c;
}

}  // namespace pbgsim
