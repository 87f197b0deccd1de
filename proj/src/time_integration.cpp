#include <iga/time_integration.hpp>

#include <iga/quadrature.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <tuple>
#include <utility>

namespace iga {

namespace {

void factor_or_throw(Eigen::SimplicialLDLT<SparseMatrix>& solver, const SparseMatrix& A,
                     const char* what) {
    solver.compute(A);
    if (solver.info() != Eigen::Success) {
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s matrix factorization failed", what);
        throw numeric_error(buf);
    }
}

auto relative_residual(const SparseMatrix& A, const VectorX& x, const VectorX& b) -> Real {
    const Real scale = b.norm();
    if (scale == 0.0)
        return (A * x).norm();
    return (A * x - b).norm() / scale;
}

void check_finite(const VectorX& u, const VectorX& v, Real t, const char* phase) {
    if (u.allFinite() && (v.size() == 0 || v.allFinite()))
        return;
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%s produced non-finite values at t = %.6g", phase, t);
    throw numeric_error(buf);
}

}  // namespace

auto discretize(const ProblemSpec& problem, int degree, Index elements_u, Index elements_v,
                int quad_points) -> Discretization {
    if (!problem.make_geometry)
        throw argument_error("problem has no geometry preset");
    if (degree < 1)
        throw argument_error("degree must be at least 1");
    if (elements_u < 1 || elements_v < 1)
        throw argument_error("element counts must be at least 1");

    const int nq = quad_points > 0 ? quad_points : degree + 1;
    Patch refined = patch_k_refine(problem.make_geometry(), degree, degree,
                                   elements_u, elements_v);
    Mesh mesh(std::move(refined));
    QuadratureRule rule{gauss_legendre_1d(nq), gauss_legendre_1d(nq)};
    BasisCache cache = build_basis_cache(mesh, rule);
    return {std::move(mesh), std::move(cache), nq};
}

Stepper::Stepper(const ProblemSpec& problem, const Mesh& mesh, const BasisCache& cache,
                 SolverConfig config)
    : problem_(problem), mesh_(mesh), cache_(cache), config_(std::move(config)) {
    if (config_.dt <= 0.0)
        throw argument_error("dt must be positive");
    if (problem_.components != 1 && problem_.components != 2)
        throw argument_error("problems must have one or two components");
    if (problem_.diffusion == DiffusionKind::solution && problem_.components != 1)
        throw argument_error("solution-dependent diffusion requires a scalar problem");
    dt_ = config_.dt;
}

void Stepper::initialize() {
    if (initialized_)
        throw argument_error("stepper already initialized");

    nd_ = mesh_.num_dofs();
    two_ = problem_.components == 2;

    M_ = assemble_mass(cache_, nd_);
    factor_or_throw(solver_M_, M_, "mass");
    ++counters_.mass;

    if (!problem_.u0)
        throw argument_error("problem has no initial condition for u");
    u_ = solver_M_.solve(assemble_load(cache_, nd_, problem_.u0));
    if (two_) {
        if (!problem_.v0)
            throw argument_error("problem has no initial condition for v");
        v_ = solver_M_.solve(assemble_load(cache_, nd_, problem_.v0));
    } else {
        v_.resize(0);
    }
    check_finite(u_, v_, 0.0, "initial projection");

    if (problem_.diffusion == DiffusionKind::constant)
        K_unit_ = assemble_stiffness(cache_, nd_, 1.0);
    share_components_ =
        two_ && problem_.diffusion == DiffusionKind::constant && problem_.d1 == problem_.d2;

    velocity_static_ = problem_.velocity_kind == VelocityKind::constant ||
                       problem_.velocity_kind == VelocityKind::toroidal;
    if (velocity_static_) {
        if (!problem_.velocity)
            throw argument_error("problem declares a velocity kind without a velocity field");
        dep_dt_ = compute_departure_data(mesh_, cache_, problem_.velocity, dt_, dt_);
        dep_2dt_ = compute_departure_data(mesh_, cache_, problem_.velocity, dt_, 2.0 * dt_);
    }

    bc_ = config_.bc.value_or(problem_.default_bc);
    use_flux_u_ = bc_ == BcKind::neumann_exact && problem_.flux_u != nullptr;
    use_flux_v_ = two_ && bc_ == BcKind::neumann_exact && problem_.flux_v != nullptr;
    if (use_flux_u_ || use_flux_v_)
        edges_ = build_edge_cache(mesh_, cache_.rule.u.size());

    if (config_.n_substeps > 0) {
        nstp_ = config_.n_substeps;
    } else {
        const Real raw = problem_.reaction_scale * dt_ * 0.5;
        nstp_ = std::max(1, static_cast<int>(std::ceil(raw - 1e-9)));
    }

    initialized_ = true;
}

void Stepper::reaction_advance(VectorX& u, VectorX& v, Real t0, Real span, int substeps) const {
    if (!problem_.f && !problem_.g)
        return;
    if (substeps < 1)
        throw argument_error("reaction substep count must be positive");

    const bool sys = v.size() > 0 && static_cast<bool>(problem_.g);
    const Real h = span / substeps;

    auto slopes = [&](const VectorX& uu, const VectorX& vv, Real tt) {
        auto loads = assemble_reaction_loads(cache_, nd_, uu, vv, problem_.f, problem_.g, tt);
        std::pair<VectorX, VectorX> k;
        k.first = solver_M_.solve(loads.first);
        if (sys)
            k.second = solver_M_.solve(loads.second);
        return k;
    };

    for (int s = 0; s < substeps; ++s) {
        const Real ts = t0 + h * s;

        const auto [k1u, k1v] = slopes(u, v, ts);
        VectorX u2 = u + (0.5 * h) * k1u;
        VectorX v2 = sys ? VectorX(v + (0.5 * h) * k1v) : v;
        const auto [k2u, k2v] = slopes(u2, v2, ts + 0.5 * h);
        VectorX u3 = u + (0.5 * h) * k2u;
        VectorX v3 = sys ? VectorX(v + (0.5 * h) * k2v) : v;
        const auto [k3u, k3v] = slopes(u3, v3, ts + 0.5 * h);
        VectorX u4 = u + h * k3u;
        VectorX v4 = sys ? VectorX(v + h * k3v) : v;
        const auto [k4u, k4v] = slopes(u4, v4, ts + h);

        u += (h / 6.0) * (k1u + 2.0 * k2u + 2.0 * k3u + k4u);
        if (sys)
            v += (h / 6.0) * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);

        if (!u.allFinite() || (sys && !v.allFinite())) {
            char buf[160];
            std::snprintf(buf, sizeof(buf),
                          "reaction stage produced non-finite values at t = %.6g; "
                          "increase n_substeps",
                          ts + h);
            throw numeric_error(buf);
        }
    }
}

void Stepper::ensure_system_factorization() {
    if (have_A_ && problem_.diffusion == DiffusionKind::constant) {
        if (fingerprint_dt_ != dt_)
            throw numeric_error("internal error: system factorization fingerprint mismatch");
        return;
    }

    if (problem_.diffusion == DiffusionKind::constant) {
        A_u_ = SparseMatrix((1.5 / dt_) * M_ + problem_.d1 * K_unit_);
        factor_or_throw(solver_A_u_, A_u_, "system");
        ++counters_.system;
        if (two_ && !share_components_) {
            A_v_ = SparseMatrix((1.5 / dt_) * M_ + problem_.d2 * K_unit_);
            factor_or_throw(solver_A_v_, A_v_, "system");
            ++counters_.system;
        }
    } else {
        const SparseMatrix K_field = assemble_stiffness_field(cache_, nd_, u_);
        A_u_ = SparseMatrix((1.5 / dt_) * M_ + K_field);
        factor_or_throw(solver_A_u_, A_u_, "system");
        ++counters_.system;
    }
    have_A_ = true;
    fingerprint_dt_ = dt_;
}

void Stepper::ensure_bootstrap_factorization() {
    if (have_B_ && problem_.diffusion == DiffusionKind::constant)
        return;

    if (problem_.diffusion == DiffusionKind::constant) {
        B_u_ = SparseMatrix((1.0 / dt_) * M_ + problem_.d1 * K_unit_);
        factor_or_throw(solver_B_u_, B_u_, "bootstrap");
        ++counters_.bootstrap;
        if (two_ && !share_components_) {
            B_v_ = SparseMatrix((1.0 / dt_) * M_ + problem_.d2 * K_unit_);
            factor_or_throw(solver_B_v_, B_v_, "bootstrap");
            ++counters_.bootstrap;
        }
    } else {
        const SparseMatrix K_field = assemble_stiffness_field(cache_, nd_, u_);
        B_u_ = SparseMatrix((1.0 / dt_) * M_ + K_field);
        factor_or_throw(solver_B_u_, B_u_, "bootstrap");
        ++counters_.bootstrap;
    }
    have_B_ = true;
}

auto Stepper::flux_load(const ExactFluxFn& fn, Real t_arrival) const -> VectorX {
    const Real half_dt = 0.5 * dt_;
    return assemble_boundary_flux(mesh_, edges_, [&](const Vector2& x, const Vector2& n) {
        return fn(x, n, t_arrival, half_dt);
    });
}

auto Stepper::solve_diffusion(const VectorX& rhs_u, const VectorX& rhs_v, bool bootstrap,
                              Real* residual) -> std::pair<VectorX, VectorX> {
    const Factorization& fu = bootstrap ? solver_B_u_ : solver_A_u_;
    const SparseMatrix& mu = bootstrap ? B_u_ : A_u_;

    std::pair<VectorX, VectorX> out;
    out.first = fu.solve(rhs_u);
    Real r = relative_residual(mu, out.first, rhs_u);
    if (two_) {
        const bool shared = share_components_;
        const Factorization& fv =
            shared ? fu : (bootstrap ? solver_B_v_ : solver_A_v_);
        const SparseMatrix& mv = shared ? mu : (bootstrap ? B_v_ : A_v_);
        out.second = fv.solve(rhs_v);
        r = std::max(r, relative_residual(mv, out.second, rhs_v));
    }
    if (residual)
        *residual = r;
    return out;
}

auto Stepper::step() -> StepDiagnostics {
    if (!initialized_)
        throw argument_error("stepper used before initialize()");

    const auto tic = std::chrono::steady_clock::now();
    const Real dt = dt_;
    const Real t_arrival = t_ + dt;
    StepDiagnostics diag;

    // (1) Reaction half-step on [t, t + dt/2].
    VectorX su = u_;
    VectorX sv = v_;
    reaction_advance(su, sv, t_, 0.5 * dt, nstp_);
    check_finite(su, sv, t_ + 0.5 * dt, "reaction half-step");

    // Departure data for this step. Static fields were traced once at
    // initialize(); a solution-dependent velocity is frozen at the lagged
    // level and retraced every step.
    const DepartureData* dep1 = nullptr;
    const DepartureData* dep2 = nullptr;
    DepartureData dep1_local, dep2_local;
    if (problem_.velocity_kind == VelocityKind::solution) {
        const VectorX& frozen_coeffs = u_;
        VelocityFn frozen = [this, &frozen_coeffs](const Vector2& x, Real) {
            const Real w = evaluate_field_clamped(mesh_, frozen_coeffs, x);
            return Vector2(w, w);
        };
        dep1_local = compute_departure_data(mesh_, cache_, frozen, t_arrival, dt);
        dep1 = &dep1_local;
        if (bootstrapped_) {
            dep2_local = compute_departure_data(mesh_, cache_, frozen, t_arrival, 2.0 * dt);
            dep2 = &dep2_local;
        }
    } else if (velocity_static_) {
        dep1 = &*dep_dt_;
        dep2 = &*dep_2dt_;
    }

    // (2) Semi-Lagrangian right-hand sides and the diffusion solve.
    VectorX Hu = dep1 ? sl_rhs(cache_, mesh_, *dep1, su) : VectorX(M_ * su);
    VectorX Hv;
    if (two_)
        Hv = dep1 ? sl_rhs(cache_, mesh_, *dep1, sv) : VectorX(M_ * sv);

    VectorX uhat, vhat;
    Real residual = 0.0;
    Index clamp_count = dep1 ? dep1->clamped : 0;
    if (!bootstrapped_) {
        ensure_bootstrap_factorization();
        VectorX rhs_u = (1.0 / dt) * Hu;
        if (use_flux_u_)
            rhs_u += flux_load(problem_.flux_u, t_arrival);
        VectorX rhs_v;
        if (two_) {
            rhs_v = (1.0 / dt) * Hv;
            if (use_flux_v_)
                rhs_v += flux_load(problem_.flux_v, t_arrival);
        }
        std::tie(uhat, vhat) = solve_diffusion(rhs_u, rhs_v, true, &residual);
    } else {
        // Advance the previous diffusion-stage input by a full reaction step
        // so both BDF2 history levels sit at the same reaction phase; the
        // window [t - dt/2, t + dt/2] uses the same substep size as the
        // half-steps.
        VectorX hu = s_prev_u_;
        VectorX hv = s_prev_v_;
        reaction_advance(hu, hv, t_ - 0.5 * dt, dt, 2 * nstp_);
        VectorX Gu = dep2 ? sl_rhs(cache_, mesh_, *dep2, hu) : VectorX(M_ * hu);
        VectorX Gv;
        if (two_)
            Gv = dep2 ? sl_rhs(cache_, mesh_, *dep2, hv) : VectorX(M_ * hv);
        if (dep2)
            clamp_count += dep2->clamped;

        ensure_system_factorization();
        VectorX rhs_u = (2.0 / dt) * Hu - (0.5 / dt) * Gu;
        if (use_flux_u_)
            rhs_u += flux_load(problem_.flux_u, t_arrival);
        VectorX rhs_v;
        if (two_) {
            rhs_v = (2.0 / dt) * Hv - (0.5 / dt) * Gv;
            if (use_flux_v_)
                rhs_v += flux_load(problem_.flux_v, t_arrival);
        }
        std::tie(uhat, vhat) = solve_diffusion(rhs_u, rhs_v, false, &residual);
    }
    check_finite(uhat, vhat, t_arrival, "diffusion stage");

    // (3) Reaction half-step on [t + dt/2, t + dt].
    reaction_advance(uhat, vhat, t_ + 0.5 * dt, 0.5 * dt, nstp_);
    check_finite(uhat, vhat, t_arrival, "reaction half-step");

    // Rotate history.
    s_prev_u_ = std::move(su);
    s_prev_v_ = std::move(sv);
    u_ = std::move(uhat);
    v_ = std::move(vhat);
    t_ = t_arrival;
    bootstrapped_ = true;

    diag.t = t_;
    diag.u_min = u_.minCoeff();
    diag.u_max = u_.maxCoeff();
    if (two_) {
        diag.v_min = v_.minCoeff();
        diag.v_max = v_.maxCoeff();
    }
    diag.clamped = clamp_count;
    diag.linear_residual = residual;
    diag.wall_seconds =
        std::chrono::duration<Real>(std::chrono::steady_clock::now() - tic).count();
    return diag;
}

auto run_simulation(const ProblemSpec& problem, const Mesh& mesh, const BasisCache& cache,
                    const SolverConfig& config) -> SimulationResult {
    SolverConfig cfg = config;
    Index n = 0;
    if (cfg.t_end < 0.0)
        throw argument_error("t_end must be nonnegative");
    if (cfg.t_end > 0.0) {
        if (cfg.dt <= 0.0)
            throw argument_error("dt must be positive");
        n = std::max<Index>(1, static_cast<Index>(std::llround(cfg.t_end / cfg.dt)));
        cfg.dt = cfg.t_end / static_cast<Real>(n);
    }

    Stepper stepper(problem, mesh, cache, cfg);
    stepper.initialize();

    SimulationResult result;
    result.dt_used = cfg.dt;
    result.n_substeps = stepper.n_substeps();
    result.diagnostics.reserve(static_cast<std::size_t>(n));
    if (cfg.snapshot_every > 0)
        result.snapshots.push_back({stepper.t(), stepper.u(), stepper.v()});

    for (Index i = 1; i <= n; ++i) {
        try {
            result.diagnostics.push_back(stepper.step());
        } catch (const std::exception& e) {
            char buf[256];
            std::snprintf(buf, sizeof(buf), "step %lld (t = %.6g): %s",
                          static_cast<long long>(i), stepper.t() + cfg.dt, e.what());
            throw numeric_error(buf);
        }
        if (cfg.snapshot_every > 0 && (i % cfg.snapshot_every == 0 || i == n))
            result.snapshots.push_back({stepper.t(), stepper.u(), stepper.v()});
    }

    result.u = stepper.u();
    result.v = stepper.v();
    result.t_final = stepper.t();
    result.steps = n;
    result.factorizations = stepper.counters();
    return result;
}

}  // namespace iga
