// Command-line driver: simulate | converge | info.

#include <CLI11.hpp>

#include <iga/io.hpp>
#include <iga/norms.hpp>
#include <iga/parallel.hpp>
#include <iga/time_integration.hpp>

#include <Eigen/Core>

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

namespace {

constexpr const char* kVersion = "1.0.0";

void ensure_directory(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw iga::io_error("cannot create output directory '" + dir + "': " + ec.message());
}

void write_diagnostics(const iga::SimulationResult& result, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f)
        throw iga::io_error("cannot open '" + path + "' for writing");
    std::fprintf(f, "step,t,u_min,u_max,v_min,v_max,clamped,linear_residual,wall_seconds\n");
    long long step = 0;
    for (const auto& d : result.diagnostics) {
        ++step;
        std::fprintf(f, "%lld,%.12e,%.12e,%.12e,%.12e,%.12e,%lld,%.3e,%.3e\n", step, d.t,
                     d.u_min, d.u_max, d.v_min, d.v_max, static_cast<long long>(d.clamped),
                     d.linear_residual, d.wall_seconds);
    }
    std::fclose(f);
}

auto run_simulate(const std::string& config_path, const std::string& out_override) -> int {
    iga::RunConfig cfg = iga::load_config(config_path);
    if (!out_override.empty())
        cfg.out_dir = out_override;
    iga::ResolvedRun run = iga::resolve_run(cfg);

    const iga::Discretization disc =
        iga::discretize(run.problem, run.degree, run.nx, run.ny, run.solver.quad_points);
    if (run.solver.dt <= 0.0)
        run.solver.dt = iga::DtRule{}(disc.mesh.max_element_size(), run.degree);
    const iga::Index sample_n =
        run.sample_n > 0 ? run.sample_n : 4 * std::max(run.nx, run.ny);

    std::printf("problem: %s on %s, degree %d, %lld x %lld elements, %lld dofs\n",
                run.problem.name.c_str(), run.problem.geometry_name.c_str(), run.degree,
                static_cast<long long>(run.nx), static_cast<long long>(run.ny),
                static_cast<long long>(disc.mesh.num_dofs()));

    const iga::SimulationResult result =
        iga::run_simulation(run.problem, disc.mesh, disc.cache, run.solver);

    ensure_directory(run.out_dir);
    const std::filesystem::path out(run.out_dir);
    for (std::size_t k = 0; k < result.snapshots.size(); ++k) {
        char name[64];
        std::snprintf(name, sizeof(name), "snapshot_%04zu", k);
        iga::write_snapshot(disc.mesh, result.snapshots[k].u, result.snapshots[k].v, sample_n,
                            (out / (std::string(name) + ".vtk")).string(),
                            (out / (std::string(name) + ".csv")).string());
    }
    iga::write_snapshot(disc.mesh, result.u, result.v, sample_n, (out / "final.vtk").string(),
                        (out / "final.csv").string());
    write_diagnostics(result, (out / "diagnostics.csv").string());

    std::printf("dt = %g, t_end = %g, steps = %lld, reaction substeps = %d\n", result.dt_used,
                result.t_final, static_cast<long long>(result.steps), result.n_substeps);
    std::printf("factorizations: mass %d, system %d, bootstrap %d\n",
                result.factorizations.mass, result.factorizations.system,
                result.factorizations.bootstrap);
    if (!result.diagnostics.empty()) {
        const auto& d = result.diagnostics.back();
        if (result.v.size() > 0)
            std::printf("final ranges: u in [%.6g, %.6g], v in [%.6g, %.6g]\n", d.u_min, d.u_max,
                        d.v_min, d.v_max);
        else
            std::printf("final range: u in [%.6g, %.6g]\n", d.u_min, d.u_max);
    }
    std::printf("wrote %s, %s, %s (%zu extra snapshots)\n",
                (out / "final.vtk").string().c_str(), (out / "final.csv").string().c_str(),
                (out / "diagnostics.csv").string().c_str(), result.snapshots.size());
    return 0;
}

auto run_converge(const std::string& problem_name, const std::vector<int>& degrees,
                  const std::vector<int>& meshes, double dt_coefficient, double t_end) -> int {
    const iga::ProblemSpec problem = iga::make_problem(problem_name);
    std::vector<iga::Index> mesh_list;
    mesh_list.reserve(meshes.size());
    for (const int n : meshes)
        mesh_list.push_back(static_cast<iga::Index>(n));

    const iga::DtRule rule{dt_coefficient};
    const iga::ErrorReport report =
        iga::convergence_study(problem, degrees, mesh_list, rule, t_end);

    std::printf("%6s %9s %12s %12s %14s %14s\n", "degree", "elements", "h", "dt", "L1 error",
                "Linf error");
    for (const auto& row : report.rows)
        std::printf("%6d %9lld %12.5e %12.5e %14.6e %14.6e\n", row.degree,
                    static_cast<long long>(row.elements), row.h, row.dt, row.l1, row.linf);
    for (const int p : degrees) {
        if (report.slope_l1.count(p))
            std::printf("degree %d slopes: L1 %.3f, Linf %.3f\n", p, report.slope_l1.at(p),
                        report.slope_linf.at(p));
    }
    return 0;
}

auto run_info() -> int {
    std::printf("adr-iga %s\n", kVersion);
    std::printf("NURBS isogeometric solver for advection-diffusion-reaction systems\n");
    std::printf("semi-Lagrangian BDF2 transport-diffusion with Strang-split RK4 reactions\n");
    std::printf("Eigen %d.%d.%d\n", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION,
                EIGEN_MINOR_VERSION);
    std::printf("threads: %d (cap with IGA_THREADS)\n", iga::max_threads());
    std::printf("problems: nonlinear-scalar, exact-system, schnakenberg, gray-scott\n");
    return 0;
}

}  // namespace

auto main(int argc, char** argv) -> int {
    CLI::App app{"NURBS isogeometric advection-diffusion-reaction solver"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_override;
    auto* simulate = app.add_subcommand("simulate", "Run a simulation from a config file");
    simulate->add_option("--config", config_path, "flat key = value configuration file")
        ->required();
    simulate->add_option("--out", out_override, "output directory (overrides out_dir)");

    std::string problem_name;
    std::vector<int> degrees{1, 2, 3, 4};
    std::vector<int> meshes{8, 16, 32, 64};
    double dt_coefficient = 0.1;
    double t_end = 1.0;
    auto* converge =
        app.add_subcommand("converge", "Mesh-refinement error study against an exact solution");
    converge->add_option("--problem", problem_name, "problem with an exact solution")
        ->required();
    converge->add_option("--degrees", degrees, "NURBS degrees (comma separated)")
        ->delimiter(',');
    converge->add_option("--meshes", meshes, "elements per direction (comma separated)")
        ->delimiter(',');
    converge->add_option("--dt-rule", dt_coefficient,
                         "coefficient c in the step rule dt = c * h^((p+1)/2)");
    converge->add_option("--t-end", t_end, "final time of each run");

    auto* info = app.add_subcommand("info", "Print build and capability information");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (simulate->parsed())
            return run_simulate(config_path, out_override);
        if (converge->parsed())
            return run_converge(problem_name, degrees, meshes, dt_coefficient, t_end);
        if (info->parsed())
            return run_info();
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 1;
}
