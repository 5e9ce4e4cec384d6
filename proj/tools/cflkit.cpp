#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>

#include "cfl/verify.hpp"

namespace fs = std::filesystem;
using namespace cfl;

namespace {

constexpr int EXIT_CHECK_FAILURE = 1;
constexpr int EXIT_INPUT_ERROR = 2;

RunConfig load_config(const std::string& config_path, const std::string& out_override,
                      long long seed_override) {
    RunConfig cfg = config_path.empty() ? RunConfig::defaults() : parse_config_file(config_path);
    if (!out_override.empty()) cfg.output_dir = out_override;
    else if (const char* root = std::getenv("CFLKIT_OUT_ROOT"); root && cfg.output_dir == "out")
        cfg.output_dir = std::string(root) + "/out";
    if (seed_override >= 0) cfg.seed = static_cast<std::uint64_t>(seed_override);
    cfg.validate();
    return cfg;
}

FieldGrid build_scenario_grid(const RunConfig& cfg) {
    if (cfg.scenario == "zero") return sample_zero(cfg.L, cfg.T_end, cfg.nx, cfg.nt);
    if (cfg.scenario == "plane_wave") {
        const auto pw = plane_wave(cfg.pw_a, cfg.pw_b, cfg.pw_kappa);
        return solve_plane_wave(pw, cfg.L, cfg.T_end, cfg.nx, cfg.nt);
    }
    if (cfg.scenario == "gaussian") {
        GaussianParams gp{cfg.amp_q, cfg.amp_r, cfg.beta, cfg.center};
        return solve_gaussian(gp, cfg.L, cfg.T_end, cfg.nx, cfg.nt);
    }
    // file scenario: resample the profile onto the configured grid
    const Profile p = read_profile(cfg.profile_file);
    if (static_cast<int>(p.x.size()) < 16)
        throw ValidationError(0, "profile too short (need at least 16 samples)");
    const double dx = cfg.L / (cfg.nx - 1);
    const double ph = p.x[1] - p.x[0];
    std::vector<Complex> q0(cfg.nx), r0(cfg.nx), q0x(cfg.nx), r0x(cfg.nx);
    for (int i = 0; i < cfg.nx; ++i) {
        const double x = dx * i;
        q0[i] = interp4(p.q0, p.x[0], ph, x);
        r0[i] = interp4(p.r0, p.x[0], ph, x);
    }
    // profile derivatives by differentiating the resampled data
    std::vector<Complex> tmp(q0.begin(), q0.end());
    for (int i = 0; i < cfg.nx; ++i) {
        const double x = dx * i;
        const double h = dx;
        const Complex qm = (i == 0) ? q0[0] : interp4(p.q0, p.x[0], ph, x - h);
        const Complex qp = (i == cfg.nx - 1) ? q0[static_cast<size_t>(cfg.nx - 1)]
                                             : interp4(p.q0, p.x[0], ph, x + h);
        q0x[i] = (qp - qm) / ((i == 0 || i == cfg.nx - 1) ? h : 2.0 * h);
        const Complex rm = (i == 0) ? r0[0] : interp4(p.r0, p.x[0], ph, x - h);
        const Complex rp = (i == cfg.nx - 1) ? r0[static_cast<size_t>(cfg.nx - 1)]
                                             : interp4(p.r0, p.x[0], ph, x + h);
        r0x[i] = (rp - rm) / ((i == 0 || i == cfg.nx - 1) ? h : 2.0 * h);
    }
    std::vector<Complex> g0(cfg.nt, Complex{}), h0(cfg.nt, Complex{});
    if (!p.t.empty()) {
        const double th = p.t.size() > 1 ? p.t[1] - p.t[0] : 1.0;
        const double dt = cfg.T_end / (cfg.nt - 1);
        for (int i = 0; i < cfg.nt; ++i) {
            g0[i] = interp4(p.g0, p.t[0], th, dt * i);
            h0[i] = interp4(p.h0, p.t[0], th, dt * i);
        }
    } else {
        for (int i = 0; i < cfg.nt; ++i) { g0[i] = q0[0]; h0[i] = r0[0]; }
    }
    return solve_direct(q0, r0, q0x, r0x, g0, h0, cfg.L, cfg.T_end, cfg.nx, cfg.nt);
}

int cmd_simulate(const RunConfig& cfg) {
    fs::create_directories(cfg.output_dir);
    const FieldGrid grid = build_scenario_grid(cfg);
    const BoundaryTraces tr = extract_boundary(grid);
    const std::string digest = cfg.digest_hex();
    write_field_grid_csv(cfg.output_dir + "/fields.csv", grid, digest);
    write_traces(cfg.output_dir + "/traces.txt", tr, grid.L, grid.T_end, digest);
    const ResidualSummary rs = pde_residual(grid);
    std::cout << "wrote " << cfg.output_dir << "/fields.csv and traces.txt\n"
              << "residual max = " << rs.max_abs << "  l2 = " << rs.l2
              << "  decay_ok = " << (grid.meta.decay_ok ? "yes" : "no")
              << " (max edge value " << grid.meta.decay_max << ")\n";
    return 0;
}

int cmd_spectral(const RunConfig& cfg, const std::string& fields_path,
                 const std::string& set_name) {
    fs::create_directories(cfg.output_dir);
    const FieldGrid grid =
        fields_path.empty() ? build_scenario_grid(cfg) : read_field_grid_csv(fields_path);
    if (!grid.meta.decay_ok && !cfg.allow_truncated)
        throw ValidationError(0,
                              "fields fail the decay gate (far edge value " +
                                  std::to_string(grid.meta.decay_max) +
                                  "); set allow_truncated = 1 for the truncated-interval reading");
    IntegrateOptions opts;
    opts.allow_truncated_basepoint = cfg.allow_truncated;
    const BoundaryTraces tr = extract_boundary(grid);
    std::vector<ScatteringRecord> recs;
    for (const auto& lam : cfg.lambdas(set_name))
        recs.push_back(make_scattering_record(grid, tr, lam, opts));
    write_scattering_records(cfg.output_dir + "/scattering.txt", recs, cfg.digest_hex());
    int admissible = 0;
    for (const auto& r : recs)
        if (r.s_flags.all() && r.S_flags.all()) ++admissible;
    std::cout << "wrote " << recs.size() << " records (" << admissible
              << " with all columns admissible) to " << cfg.output_dir << "/scattering.txt\n";
    for (const auto& r : recs) {
        std::cout << "  lambda = " << format_complex(r.lambda) << "  region = "
                  << domain_name(r.region) << "  |det s - 1| = " << std::abs(det(r.s) - 1.0)
                  << "\n";
    }
    return 0;
}

int cmd_verify(const RunConfig& cfg, const std::string& suite) {
    fs::create_directories(cfg.output_dir);
    const auto results = run_suites({suite}, cfg);
    print_suite_results(std::cout, results);
    write_verify_report(cfg.output_dir + "/verify_report.txt", results, cfg.digest_hex());
    for (const auto& sr : results)
        if (!sr.pass()) return EXIT_CHECK_FAILURE;
    return 0;
}

int cmd_reconstruct(const RunConfig& cfg, const std::string& fields_path,
                    const std::string& scattering_path) {
    fs::create_directories(cfg.output_dir);
    const FieldGrid grid =
        fields_path.empty() ? build_scenario_grid(cfg) : read_field_grid_csv(fields_path);
    const BoundaryTraces tr = extract_boundary(grid);
    if (!scattering_path.empty()) read_scattering_records(scattering_path);  // validated input
    RayConfig ray;
    ray.sign = cfg.reconstruction_sign;
    IntegrateOptions opts;
    opts.allow_truncated_basepoint = cfg.allow_truncated;
    const std::vector<std::array<int, 2>> nodes{{grid.nx / 4, grid.nt / 2},
                                                {grid.nx / 2, grid.nt / 2},
                                                {5 * grid.nx / 8, grid.nt / 4}};
    const auto rep = closure_report(grid, tr, nodes, ray, opts);
    const std::string digest = cfg.digest_hex();
    write_reconstruction_csv(cfg.output_dir + "/reconstruction.csv", rep, digest);
    write_reconstruction_summary(cfg.output_dir + "/reconstruction_summary.txt", rep, digest);
    std::cout << "max relative error: q_x " << rep.max_rel_err_q << ", r_x " << rep.max_rel_err_r
              << " (sign " << rep.validated_sign << ", decay exponent "
              << rep.fitted_decay_exponent << ")\n";
    return 0;
}

int cmd_report(const RunConfig& cfg) {
    const std::string path = cfg.output_dir + "/verify_report.txt";
    std::ifstream in(path);
    if (!in) {
        std::cerr << "no report at " << path << " (run `cflkit verify` first)\n";
        return EXIT_INPUT_ERROR;
    }
    std::cout << in.rdbuf();
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral toolkit for the coupled Fokas-Lenells system on the half-line"};
    app.require_subcommand(1);

    std::string config_path, out_dir, fields_path, scattering_path;
    std::string suite = "all", lambda_set = "spectral";
    long long seed_override = -1;

    app.add_option("--config", config_path, "run configuration file");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--seed", seed_override, "seed override for randomized suites");

    auto* sim = app.add_subcommand("simulate", "produce field and trace files for a scenario");
    auto* spec = app.add_subcommand("spectral", "compute scattering records over a lambda set");
    spec->add_option("--fields", fields_path, "field grid CSV (defaults to the scenario)");
    spec->add_option("--lambda-set", lambda_set, "named lambda set from the config");
    auto* ver = app.add_subcommand("verify", "run verification suites");
    ver->add_option("--suite", suite, "suite name or 'all'");
    auto* rec = app.add_subcommand("reconstruct", "recover derivative fields from spectral data");
    rec->add_option("--fields", fields_path, "field grid CSV (defaults to the scenario)");
    rec->add_option("--scattering", scattering_path, "scattering record file (validated)");
    auto* rep = app.add_subcommand("report", "print the last verification report");

    CLI11_PARSE(app, argc, argv);

    try {
        const RunConfig cfg = load_config(config_path, out_dir, seed_override);
        if (sim->parsed()) return cmd_simulate(cfg);
        if (spec->parsed()) return cmd_spectral(cfg, fields_path, lambda_set);
        if (ver->parsed()) return cmd_verify(cfg, suite);
        if (rec->parsed()) return cmd_reconstruct(cfg, fields_path, scattering_path);
        if (rep->parsed()) return cmd_report(cfg);
    } catch (const ValidationError& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    } catch (const std::invalid_argument& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return EXIT_INPUT_ERROR;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return EXIT_CHECK_FAILURE;
    }
    return 0;
}
