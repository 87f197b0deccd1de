#pragma once

#include <iga/assembly.hpp>
#include <iga/patch.hpp>
#include <iga/transport.hpp>
#include <iga/types.hpp>

#include <functional>
#include <map>
#include <string>

namespace iga {

// How the diffusion coefficient is supplied.
enum class DiffusionKind {
    constant,  // fixed d1 (and d2)
    solution,  // d(x) = u_h(x) lagged at the previous level
};

// How the advecting velocity is supplied.
enum class VelocityKind {
    none,      // no advection (departure = arrival)
    constant,  // fixed vector
    toroidal,  // rigid rotation about the origin
    solution,  // a = (u_h, u_h) lagged at the previous level
};

enum class BcKind {
    neumann_zero,   // natural do-nothing boundary
    neumann_exact,  // weak flux term from the exact solution
};

// Exact solution component u(x, t).
using ExactFn = std::function<Real(const Vector2&, Real)>;

// Diffusive boundary flux d * dn(u_exact) at (x, n, t), corrected backward
// over the trailing reaction half-step of length half_dt (the diffusion
// stage's own boundary data in the split scheme).
using ExactFluxFn = std::function<Real(const Vector2&, const Vector2&, Real, Real)>;

// A complete benchmark definition: reaction pair, diffusion, velocity,
// initial/boundary data, optional exact solution, geometry, and defaults.
struct ProblemSpec {
    std::string name;
    int components = 2;

    ReactionFn f;  // f(u, v, x, t); null means zero reaction
    ReactionFn g;  // null for scalar problems

    DiffusionKind diffusion = DiffusionKind::constant;
    Real d1 = 0.0;
    Real d2 = 0.0;

    VelocityKind velocity_kind = VelocityKind::none;
    VelocityFn velocity;  // set for constant / toroidal kinds

    SpatialFn u0;
    SpatialFn v0;  // null for scalar problems

    ExactFn exact_u;  // null when no analytical solution exists
    ExactFn exact_v;
    ExactFluxFn flux_u;  // null when no exact flux is available
    ExactFluxFn flux_v;

    BcKind default_bc = BcKind::neumann_zero;

    // Magnitude of the reaction Jacobian, driving the substep heuristic
    // n_substeps = max(1, ceil(reaction_scale * dt / 2)).
    Real reaction_scale = 1.0;

    std::function<Patch()> make_geometry;
    std::string geometry_name;

    int default_degree = 4;
    int default_elements = 32;
    Real default_dt = 0.0;  // 0 = derive from the convergence dt rule
    Real default_t_end = 1.0;

    std::map<std::string, Real> params;
};

// Scalar fully nonlinear benchmark on [0, 2*pi]^2: velocity (u, u) and
// diffusion coefficient u (both lagged), reaction -u^2 + phi(x, t), exact
// solution u = 1 + sin(x + y - t)/2.
auto problem_fully_nonlinear() -> ProblemSpec;

// Coupled linear-reaction system on [0, 2*pi]^2 with an exact decaying
// wave pair; b = 100, c = 1, d1 = d2 = 1/2, velocity (1/2, 1/2).
auto problem_exact_system() -> ProblemSpec;

// Schnakenberg activator-inhibitor system; unit square, or centered square
// [-1/2, 1/2]^2 with a toroidal velocity when with_advection is set.
auto problem_schnakenberg(Real gamma, bool with_advection, Real omega) -> ProblemSpec;

// Gray-Scott system on the disk of radius 1.25 centered at (1.25, 1.25).
auto problem_gray_scott() -> ProblemSpec;

// Rigid rotation a(x) = (-omega*y, omega*x).
auto velocity_toroidal(Real omega) -> VelocityFn;

// Factory by config name: nonlinear-scalar | exact-system | schnakenberg |
// gray-scott. Unknown names throw argument_error.
auto make_problem(const std::string& name, Real gamma = 100.0, bool with_advection = false,
                  Real omega = 8.0) -> ProblemSpec;

}  // namespace iga
