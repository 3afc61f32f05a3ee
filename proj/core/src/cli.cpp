#include "tfelab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tfelab/config.hpp"
#include "tfelab/csv_io.hpp"
#include "tfelab/experiments.hpp"

namespace tfelab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitSolverAbort = 3;
constexpr int kExitVerify = 4;

std::string snapshot_name(size_t index) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "snap_%06zu.csv", index);
    return buf;
}

void prepare_output_dir(const RunConfig& cfg) {
    fs::create_directories(cfg.outputs.directory);
    write_config_echo(cfg, cfg.outputs.directory + "/run_config.toml");
}

int cmd_simulate(const RunConfig& cfg) {
    prepare_output_dir(cfg);
    const Field u0 = initial_condition(cfg.initial, cfg.grid);
    Trajectory traj;
    try {
        traj = solve(u0, cfg.solver);
    } catch (const SolverAbort& abort) {
        std::cerr << "solver abort: " << abort.what() << " at t=" << abort.state.t
                  << " (dt=" << abort.state.dt << ")\n";
        write_snapshot(abort.state.u, abort.state.t, cfg.model,
                       cfg.outputs.directory + "/abort_snapshot.csv");
        return kExitSolverAbort;
    }
    std::vector<DiagnosticsRecord> records;
    records.reserve(traj.size());
    for (const auto& pt : traj) records.push_back(pt.record);
    write_timeseries(records, cfg.outputs.directory + "/timeseries.csv");
    if (cfg.outputs.emit_snapshots) {
        fs::create_directories(cfg.outputs.directory + "/snapshots");
        for (size_t i = 0; i < traj.size(); ++i)
            write_snapshot(traj[i].u, traj[i].t, cfg.model,
                           cfg.outputs.directory + "/snapshots/" +
                               snapshot_name(i));
    }
    std::cout << "simulate: " << traj.size() << " records, final t="
              << traj.back().t << ", mass=" << traj.back().record.mass << "\n";
    return kExitOk;
}

int cmd_quasistatic(const RunConfig& cfg) {
    prepare_output_dir(cfg);
    const std::vector<QsSample> traj = qs_solve(cfg.droplets, cfg.qs);
    write_qs_trajectory(traj, cfg.outputs.directory + "/qs_trajectory.csv");
    std::cout << "quasistatic: " << traj.size() << " records, final support="
              << total_support(traj.back().state) << "\n";
    return kExitOk;
}

json fit_to_json(const PowerLawFit& f) {
    return json{{"exponent", f.exponent},
                {"prefactor", f.prefactor},
                {"rms_residual", f.rms_residual},
                {"n_samples", f.n_samples}};
}

double json_safe(double v) {
    return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
}

int cmd_sweep(const RunConfig& cfg) {
    prepare_output_dir(cfg);
    const SweepReport rep =
        epsilon_sweep(cfg.solver, cfg.initial, cfg.grid, cfg.sweep.eps_list,
                      cfg.sweep.fit_window_fraction);
    json out;
    out["fit_window_fraction"] = rep.fit_window_fraction;
    out["grid"] = {{"x_left", rep.grid.x_left},
                   {"x_right", rep.grid.x_right},
                   {"n_cells", rep.grid.n_cells}};
    out["n"] = rep.n_exponent;
    out["gamma_model"] = "constant mass fractions between merge events";
    out["entries"] = json::array();
    for (const auto& e : rep.entries) {
        json je;
        je["epsilon"] = e.epsilon;
        je["aborted"] = e.aborted;
        if (!e.error.empty()) je["error"] = e.error;
        je["times"] = e.times;
        je["supports"] = e.supports;
        je["initial_support"] = e.initial_support;
        if (e.fit) je["fit"] = fit_to_json(*e.fit);
        je["fit_window"] = {e.fit_t_lo, e.fit_t_hi};
        je["min_margin"] = json_safe(e.min_margin);
        je["max_lipschitz_ratio"] = e.max_lipschitz_ratio;
        je["flux_bound_ok"] = e.flux_bound_ok;
        je["mass_drift"] = e.mass_drift;
        je["energy_monotone"] = e.energy_monotone;
        je["config"] = {{"epsilon", e.config_used.params.epsilon},
                        {"n", e.config_used.params.n},
                        {"delta", e.config_used.reg.delta},
                        {"dt_init", e.config_used.dt_init},
                        {"dt_min", e.config_used.dt_min},
                        {"dt_max", e.config_used.dt_max},
                        {"newton_tol", e.config_used.newton_tol},
                        {"newton_max_iter", e.config_used.newton_max_iter},
                        {"t_end", e.config_used.t_end},
                        {"record_every", e.config_used.record_every},
                        {"undershoot_tol", e.config_used.undershoot_tol}};
        out["entries"].push_back(std::move(je));
    }
    std::ofstream f(cfg.outputs.directory + "/sweep_report.json");
    if (!f)
        throw std::runtime_error("cannot write file: " +
                                 cfg.outputs.directory + "/sweep_report.json");
    f << out.dump(2) << "\n";
    for (const auto& e : rep.entries)
        std::cout << "sweep: eps=" << e.epsilon << " exponent="
                  << (e.fit ? e.fit->exponent
                            : std::numeric_limits<double>::quiet_NaN())
                  << (e.aborted ? " (aborted)" : "") << "\n";
    return kExitOk;
}

int cmd_fit(const std::string& input, double t_lo, double t_hi) {
    const CsvTable table = read_csv(input);
    int ct = table.column_index("t");
    int cs = table.column_index("support_measure");
    if (ct < 0 || cs < 0) {
        if (table.columns.size() == 2) {
            ct = 0;
            cs = 1;
        } else {
            throw std::runtime_error(
                input + ": need columns 't' and 'support_measure' (or exactly "
                        "two columns)");
        }
    }
    std::vector<double> t, s;
    for (const auto& row : table.rows) {
        t.push_back(row[static_cast<size_t>(ct)]);
        s.push_back(row[static_cast<size_t>(cs)]);
    }
    const PowerLawFit fit = power_law_fit(t, s, t_lo, t_hi);
    std::printf("exponent=%.10g prefactor=%.10g rms=%.3g n_samples=%d\n",
                fit.exponent, fit.prefactor, fit.rms_residual, fit.n_samples);
    return kExitOk;
}

int cmd_compare(const RunConfig& cfg) {
    prepare_output_dir(cfg);
    const CompareReport rep =
        compare_with_quasistatic(cfg.solver, cfg.initial, cfg.grid, cfg.qs);
    std::ofstream out(cfg.outputs.directory + "/compare.csv");
    if (!out)
        throw std::runtime_error("cannot write file: " + cfg.outputs.directory +
                                 "/compare.csv");
    out << "t,profile_distance,qs_peak,support_pde,support_qs\n";
    char buf[256];
    for (size_t i = 0; i < rep.t.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.15g,%.15g,%.15g,%.15g,%.15g\n",
                      rep.t[i], rep.profile_distance[i], rep.qs_peak[i],
                      rep.support_pde[i], rep.support_qs[i]);
        out << buf;
    }
    std::cout << "compare: " << rep.t.size() << " records written\n";
    return kExitOk;
}

struct VerifyContext {
    int violations = 0;
    void fail(const std::string& msg) {
        ++violations;
        std::cout << "[verify] FAIL: " << msg << "\n";
    }
};

bool close_rel(double a, double b, double rel, double abs_tol) {
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b)) + abs_tol;
}

int cmd_verify(const RunConfig& cfg) {
    VerifyContext v;
    const std::string dir = cfg.outputs.directory;
    const std::string ts_path = dir + "/timeseries.csv";
    if (!fs::exists(ts_path)) {
        v.fail("missing " + ts_path);
        return kExitVerify;
    }
    const CsvTable ts = read_csv(ts_path);
    auto col = [&](const char* name) {
        const int c = ts.column_index(name);
        if (c < 0) throw std::runtime_error(std::string("missing column ") + name);
        return static_cast<size_t>(c);
    };
    const size_t ct = col("t"), cmass = col("mass"), cenergy = col("energy"),
                 cdiss = col("dissipation_h"), ccumd = col("cum_dissipation"),
                 cent = col("entropy_integral"), cbulk = col("bulk_dissipation"),
                 ccumb = col("cum_bulk"), csupp = col("support_measure"),
                 cslope = col("sup_slope_sq"), clip = col("lipschitz_rhs"),
                 cweak = col("weak_R_l1");

    if (ts.rows.empty()) {
        v.fail("empty time series");
        return kExitVerify;
    }
    // Row invariants.
    const double mass0 = ts.rows.front()[cmass];
    const double energy0 = ts.rows.front()[cenergy];
    const double c_sup = flux_bound_constant(cfg.model.n);
    double prev_energy = energy0, prev_cumd = -1e300, prev_cumb = -1e300;
    for (size_t r = 0; r < ts.rows.size(); ++r) {
        const auto& row = ts.rows[r];
        for (double x : row)
            if (!std::isfinite(x)) v.fail("non-finite entry in row " +
                                          std::to_string(r));
        if (std::abs(row[cmass] - mass0) >
            1e-9 * std::max(std::abs(mass0), 1e-300))
            v.fail("mass drift at t=" + std::to_string(row[ct]));
        if (row[cenergy] > prev_energy + 1e-8 * energy0)
            v.fail("energy increase at t=" + std::to_string(row[ct]));
        prev_energy = row[cenergy];
        if (row[ccumd] < prev_cumd - 1e-12 || row[ccumb] < prev_cumb - 1e-12)
            v.fail("cumulative dissipation decreased at t=" +
                   std::to_string(row[ct]));
        prev_cumd = row[ccumd];
        prev_cumb = row[ccumb];
        const double rhs =
            std::sqrt(c_sup * std::max(row[cmass], 0.0) * row[cdiss]);
        if (row[cweak] > rhs * (1.0 + 1e-6) + 1e-12)
            v.fail("flux remainder bound violated at t=" +
                   std::to_string(row[ct]));
        if (row[csupp] < 0.0 || row[cbulk] < 0.0 || row[cdiss] < 0.0)
            v.fail("negative diagnostic at t=" + std::to_string(row[ct]));
    }

    // Snapshot recomputation.
    const std::string snap_dir = dir + "/snapshots";
    if (fs::exists(snap_dir)) {
        std::vector<std::string> paths;
        for (const auto& e : fs::directory_iterator(snap_dir))
            if (e.path().extension() == ".csv") paths.push_back(e.path().string());
        std::sort(paths.begin(), paths.end());
        const double t_scale =
            std::max(std::abs(ts.rows.back()[ct]), 1e-300);
        for (const auto& p : paths) {
            const SnapshotData snap = read_snapshot(p);
            const ModelParams mp = ModelParams::make(snap.epsilon, snap.n);
            const auto row_it = std::find_if(
                ts.rows.begin(), ts.rows.end(), [&](const auto& row) {
                    return std::abs(row[ct] - snap.t) <= 1e-9 * t_scale;
                });
            if (row_it == ts.rows.end()) {
                v.fail(p + ": no matching time-series row");
                continue;
            }
            const DiagnosticsRecord rec =
                compute_record(snap.u, mp, snap.t, 0.0, 0.0, 0.0, 0);
            const auto& row = *row_it;
            auto check = [&](const char* name, double stored, double fresh) {
                if (!close_rel(stored, fresh, 5e-6, 1e-10))
                    v.fail(p + ": " + name + " mismatch (stored " +
                           std::to_string(stored) + ", recomputed " +
                           std::to_string(fresh) + ")");
            };
            check("mass", row[cmass], rec.mass);
            check("energy", row[cenergy], rec.energy);
            check("dissipation_h", row[cdiss], rec.dissipation_h);
            check("entropy_integral", row[cent], rec.entropy_integral);
            check("bulk_dissipation", row[cbulk], rec.bulk_dissipation);
            check("support_measure", row[csupp], rec.support_measure);
            check("sup_slope_sq", row[cslope], rec.sup_slope_sq);
            check("lipschitz_rhs", row[clip], rec.lipschitz_rhs);
            check("weak_R_l1", row[cweak], rec.weak_R_l1);
            const Field rho = entropy_field(snap.u, mp);
            for (int i = 0; i < snap.u.size(); ++i)
                if (!close_rel(snap.rho[static_cast<size_t>(i)], rho[i], 1e-9,
                               1e-12)) {
                    v.fail(p + ": stored rho mismatch");
                    break;
                }
        }
    }

    if (v.violations) {
        std::cout << "[verify] " << v.violations << " violation(s)\n";
        return kExitVerify;
    }
    std::cout << "[verify] OK (" << ts.rows.size() << " rows)\n";
    return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"1D thin-film spreading laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    std::string fit_input;
    double fit_t_lo = 0.0, fit_t_hi = 0.0;

    auto* sim = app.add_subcommand("simulate", "run the PDE solver");
    sim->add_option("--config", config_path, "TOML run configuration")
        ->required();
    auto* qs = app.add_subcommand("quasistatic", "run the free-boundary model");
    qs->add_option("--config", config_path, "TOML run configuration")
        ->required();
    auto* sweep = app.add_subcommand("sweep", "epsilon sweep with fits");
    sweep->add_option("--config", config_path, "TOML run configuration")
        ->required();
    auto* fit = app.add_subcommand("fit", "power-law fit of a CSV series");
    fit->add_option("--config", config_path, "TOML run configuration");
    fit->add_option("--input", fit_input, "CSV with t and support_measure")
        ->required();
    fit->add_option("--t-lo", fit_t_lo, "window lower bound")->required();
    fit->add_option("--t-hi", fit_t_hi, "window upper bound")->required();
    auto* cmp = app.add_subcommand("compare", "PDE vs quasi-static profile");
    cmp->add_option("--config", config_path, "TOML run configuration")
        ->required();
    auto* ver = app.add_subcommand("verify",
                                   "recompute diagnostics of a stored run");
    ver->add_option("--config", config_path, "TOML run configuration")
        ->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (fit->parsed()) return cmd_fit(fit_input, fit_t_lo, fit_t_hi);
        const RunConfig cfg = parse_config(config_path);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (qs->parsed()) return cmd_quasistatic(cfg);
        if (sweep->parsed()) return cmd_sweep(cfg);
        if (cmp->parsed()) return cmd_compare(cfg);
        if (ver->parsed()) return cmd_verify(cfg);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const SolverAbort& e) {
        std::cerr << "solver abort: " << e.what() << "\n";
        return kExitSolverAbort;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}

}  // namespace tfelab
