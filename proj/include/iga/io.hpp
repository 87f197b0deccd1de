#pragma once

#include <iga/mesh.hpp>
#include <iga/problems.hpp>
#include <iga/time_integration.hpp>
#include <iga/types.hpp>

#include <optional>
#include <string>

namespace iga {

// Flat key = value run configuration. Zero / negative / empty sentinels mean
// "not set here; use the problem preset's default". Parsing validates every
// key that appears; resolution against the chosen problem happens in
// resolve_run.
struct RunConfig {
    std::string problem;  // nonlinear-scalar | exact-system | schnakenberg | gray-scott

    std::optional<Real> gamma;      // Schnakenberg stiffness
    std::optional<Real> omega;      // toroidal angular velocity
    std::optional<bool> advection;  // Schnakenberg advection variant

    std::string geometry = "default";  // default | unit-square | centered-square |
                                       // two-pi-square | disk | annulus
    int degree = 0;                    // 0 = problem default, otherwise 1..8
    Index nx = 0;                      // elements per direction, 0 = problem default
    Index ny = 0;
    Real dt = 0.0;     // 0 = problem default (or dt rule when the problem has none)
    Real t_end = -1.0;  // negative = problem default
    int n_substeps = 0;
    int quad_points = 0;
    std::string bc = "default";  // default | neumann-zero | neumann-exact
    std::string out_dir = "out";
    int snapshot_every = 0;
    Index sample_n = 0;  // export/error grid, 0 = 4x elements per direction

    friend auto operator==(const RunConfig&, const RunConfig&) -> bool = default;
};

// Parse the flat key = value format. Unknown keys, malformed lines, and
// invalid values fail with the line number and key name.
auto parse_config(const std::string& text) -> RunConfig;

// Read and parse a configuration file.
auto load_config(const std::string& path) -> RunConfig;

// Canonical text form; only keys that differ from "not set" are emitted, so
// load(serialize(load(f))) == load(f).
auto serialize_config(const RunConfig& config) -> std::string;

// A RunConfig resolved against its problem preset: overrides applied,
// geometry swapped when requested, defaults filled in. The time step may
// still be 0 when neither the config nor the problem pins one; the caller
// derives it from the dt rule once the mesh (and hence h) exists.
struct ResolvedRun {
    ProblemSpec problem;
    int degree = 0;
    Index nx = 0;
    Index ny = 0;
    SolverConfig solver;
    Index sample_n = 0;  // 0 until the element count is known
    std::string out_dir;
};

auto resolve_run(const RunConfig& config) -> ResolvedRun;

// Legacy VTK structured-grid snapshot (points from the geometry map on a
// sample_n x sample_n parametric grid, point scalars "u" and "v") plus a CSV
// twin with columns x, y, u, v holding identical values. An empty `v` writes
// zeros.
void write_snapshot(const Mesh& mesh, const VectorX& u, const VectorX& v, Index sample_n,
                    const std::string& vtk_path, const std::string& csv_path);

}  // namespace iga
