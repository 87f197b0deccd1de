#pragma once

#include <iga/mesh.hpp>
#include <iga/problems.hpp>
#include <iga/time_integration.hpp>
#include <iga/types.hpp>

#include <map>
#include <utility>
#include <vector>

namespace iga {

// Field values on a uniform n x n parametric grid (corners included):
// entry (i, j) belongs to parameter (xi_i, eta_j).
struct FieldSample {
    MatrixX x;      // physical x coordinates, n x n
    MatrixX y;      // physical y coordinates, n x n
    MatrixX value;  // field values, n x n
};

auto sample_field(const Mesh& mesh, const VectorX& coeffs, Index n) -> FieldSample;

// L1 error by Gauss quadrature over the mesh and Linf error on a
// sample_n x sample_n uniform parametric grid. Control coefficients are not
// nodal values, so the max norm is measured on a dense field sample.
auto error_norms(const Mesh& mesh, const BasisCache& cache, const VectorX& coeffs,
                 const ExactFn& exact, Real t, Index sample_n) -> std::pair<Real, Real>;

// Least-squares slope of log(error) against log(h).
auto fit_slope(const std::vector<Real>& h, const std::vector<Real>& error) -> Real;

// Time step rule used by the convergence harness: dt = c * h^((p+1)/2), so
// the second-order splitting error dt^2 = c^2 * h^(p+1) stays subdominant.
// h is the physical mesh size (longest element edge).
struct DtRule {
    Real coefficient = 0.1;

    auto operator()(Real h, int degree) const -> Real;
};

struct ConvergenceRow {
    int degree = 0;
    Index elements = 0;  // per direction
    Real h = 0.0;        // physical mesh size
    Real dt = 0.0;
    Real l1 = 0.0;
    Real linf = 0.0;
};

struct ErrorReport {
    std::vector<ConvergenceRow> rows;  // degree-major, meshes ascending
    std::map<int, Real> slope_l1;
    std::map<int, Real> slope_linf;
};

// Run the problem to t_end for every (degree, mesh) pair, measure the error
// against the problem's exact solution, and fit per-degree slopes.
auto convergence_study(const ProblemSpec& problem, const std::vector<int>& degrees,
                       const std::vector<Index>& meshes, const DtRule& dt_rule = {},
                       Real t_end = 1.0) -> ErrorReport;

}  // namespace iga
