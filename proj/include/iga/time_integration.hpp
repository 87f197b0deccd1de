#pragma once

#include <iga/assembly.hpp>
#include <iga/mesh.hpp>
#include <iga/problems.hpp>
#include <iga/transport.hpp>
#include <iga/types.hpp>

#include <Eigen/SparseCholesky>

#include <optional>
#include <vector>

namespace iga {

// Driver settings. `dt` and `t_end` are in problem time units; `n_substeps`
// is the reaction substep count per half-step (0 = derive from the problem's
// reaction_scale as max(1, ceil(scale * dt / 2))); `quad_points` is the
// Gauss count per direction used by discretize (0 = degree + 1); `bc`
// overrides the problem's default boundary treatment when set.
struct SolverConfig {
    Real dt = 0.1;
    Real t_end = 1.0;
    int n_substeps = 0;
    int quad_points = 0;
    std::optional<BcKind> bc;
    int snapshot_every = 0;  // store a snapshot every k steps (0 = none)
};

// One record per time step.
struct StepDiagnostics {
    Real t = 0.0;
    Real u_min = 0.0, u_max = 0.0;
    Real v_min = 0.0, v_max = 0.0;
    Index clamped = 0;         // departure evaluations clamped to the boundary
    Real linear_residual = 0;  // worst relative residual of the stage solves
    Real wall_seconds = 0.0;
};

struct Snapshot {
    Real t = 0.0;
    VectorX u;
    VectorX v;  // empty for scalar problems
};

// Factorization bookkeeping. `system` counts BDF2 matrices (3/(2dt) M + K),
// `bootstrap` the first-step BDF1 matrix (1/dt) M + K, `mass` the mass
// matrix. A constant-coefficient run factors the system matrix exactly once.
struct FactorizationCounters {
    int mass = 0;
    int system = 0;
    int bootstrap = 0;
};

struct SimulationResult {
    VectorX u;
    VectorX v;  // empty for scalar problems
    Real t_final = 0.0;
    Real dt_used = 0.0;
    Index steps = 0;
    int n_substeps = 0;
    std::vector<StepDiagnostics> diagnostics;
    std::vector<Snapshot> snapshots;
    FactorizationCounters factorizations;
};

// A problem geometry refined to the requested degree and element count,
// with its quadrature cache. Steppers hold references into this; keep it
// alive for as long as the stepper runs.
struct Discretization {
    Mesh mesh;
    BasisCache cache;
    int quad_1d = 0;
};

// k-refine the problem's base geometry: elevate both directions to `degree`
// first, then insert knots for `elements_u` x `elements_v` elements.
auto discretize(const ProblemSpec& problem, int degree, Index elements_u, Index elements_v,
                int quad_points = 0) -> Discretization;

// Strang-split stepper: RK4 reaction half-step, semi-Lagrangian BDF2
// advection-diffusion step, RK4 reaction half-step. The first call to step()
// bootstraps with semi-Lagrangian backward Euler (BDF2 needs two levels);
// the BDF2 history carries the previous step's diffusion-stage input
// advanced by a full reaction step, so both levels sit at the same reaction
// phase. Matrices are factored once and reused while (dt, K) is unchanged;
// solution-dependent diffusion reassembles and refactors every step from the
// lagged solution.
class Stepper {
  public:
    Stepper(const ProblemSpec& problem, const Mesh& mesh, const BasisCache& cache,
            SolverConfig config);

    // Assemble and factor the mass matrix, L2-project the initial data
    // (solve M u = load of u0), and precompute departure data for static
    // velocity fields. Must be called once before step().
    void initialize();

    // Advance one step of size dt and return its diagnostics.
    auto step() -> StepDiagnostics;

    // Advance (u, v) through the reaction ODE M du/dt = F(u, v, t) from t0
    // over `span` with `substeps` classical RK4 steps. Public for direct
    // testing against scalar RK4 oracles; v is ignored for scalar problems.
    void reaction_advance(VectorX& u, VectorX& v, Real t0, Real span, int substeps) const;

    auto t() const noexcept -> Real { return t_; }
    auto u() const noexcept -> const VectorX& { return u_; }
    auto v() const noexcept -> const VectorX& { return v_; }
    auto n_substeps() const noexcept -> int { return nstp_; }
    auto counters() const noexcept -> const FactorizationCounters& { return counters_; }
    auto mass() const noexcept -> const SparseMatrix& { return M_; }
    auto bc() const noexcept -> BcKind { return bc_; }

  private:
    using Factorization = Eigen::SimplicialLDLT<SparseMatrix>;

    void ensure_system_factorization();
    void ensure_bootstrap_factorization();
    auto flux_load(const ExactFluxFn& fn, Real t_arrival) const -> VectorX;
    auto solve_diffusion(const VectorX& rhs_u, const VectorX& rhs_v, bool bootstrap, Real* residual)
        -> std::pair<VectorX, VectorX>;

    const ProblemSpec& problem_;
    const Mesh& mesh_;
    const BasisCache& cache_;
    SolverConfig config_;

    Real dt_ = 0.0;
    Real t_ = 0.0;
    Index nd_ = 0;
    int nstp_ = 1;
    bool two_ = false;
    bool initialized_ = false;
    bool bootstrapped_ = false;
    bool share_components_ = false;  // d1 == d2: one system factorization
    bool velocity_static_ = false;
    bool use_flux_u_ = false;
    bool use_flux_v_ = false;
    BcKind bc_ = BcKind::neumann_zero;

    SparseMatrix M_;
    SparseMatrix K_unit_;  // unit-coefficient stiffness (constant diffusion)
    SparseMatrix A_u_, A_v_;
    SparseMatrix B_u_, B_v_;
    Factorization solver_M_, solver_A_u_, solver_A_v_, solver_B_u_, solver_B_v_;
    bool have_A_ = false;
    bool have_B_ = false;
    Real fingerprint_dt_ = 0.0;

    VectorX u_, v_;            // solution at the current level
    VectorX s_prev_u_, s_prev_v_;  // previous diffusion-stage input
    std::optional<DepartureData> dep_dt_, dep_2dt_;  // static-velocity caches

    std::vector<EdgeQP> edges_;
    FactorizationCounters counters_;
};

// Project, bootstrap, and loop strang steps to t_end. The step size is
// adjusted once so that an integer number of steps lands on t_end exactly;
// t_end = 0 performs the initial projection only.
auto run_simulation(const ProblemSpec& problem, const Mesh& mesh, const BasisCache& cache,
                    const SolverConfig& config) -> SimulationResult;

}  // namespace iga
