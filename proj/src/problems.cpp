#include <iga/problems.hpp>

#include <cmath>

namespace iga {

namespace {

constexpr Real pi = 3.1415926535897932384626433832795;
constexpr Real two_pi = 2.0 * pi;

}  // namespace

auto velocity_toroidal(Real omega) -> VelocityFn {
    return [omega](const Vector2& x, Real) { return Vector2(-omega * x.y(), omega * x.x()); };
}

auto problem_fully_nonlinear() -> ProblemSpec {
    ProblemSpec spec;
    spec.name = "nonlinear-scalar";
    spec.components = 1;

    // Source phi makes u = 1 + sin(x + y - t)/2 exact for
    //   u_t + (u, u).grad(u) = div(u grad u) - u^2 + phi.
    spec.f = [](Real u, Real, const Vector2& x, Real t) {
        const Real s = std::sin(x.x() + x.y() - t);
        const Real c = std::cos(x.x() + x.y() - t);
        const Real phi =
            0.5 * c + 0.5 * s * c - 0.5 * c * c + 2.0 * s + 0.75 * s * s + 1.0;
        return -u * u + phi;
    };

    spec.diffusion = DiffusionKind::solution;
    spec.velocity_kind = VelocityKind::solution;

    spec.u0 = [](const Vector2& x) { return 1.0 + 0.5 * std::sin(x.x() + x.y()); };
    spec.exact_u = [](const Vector2& x, Real t) {
        return 1.0 + 0.5 * std::sin(x.x() + x.y() - t);
    };
    // d(u) dn(u) with d(u) = u; no reaction correction (nonlinear reaction).
    spec.flux_u = [](const Vector2& x, const Vector2& n, Real t, Real) {
        const Real u = 1.0 + 0.5 * std::sin(x.x() + x.y() - t);
        const Real c = std::cos(x.x() + x.y() - t);
        return u * 0.5 * c * (n.x() + n.y());
    };

    spec.default_bc = BcKind::neumann_exact;
    spec.reaction_scale = 3.0;  // |df/du| = 2|u| <= 3 on the solution range
    spec.make_geometry = [] { return make_rectangle(0.0, two_pi, 0.0, two_pi); };
    spec.geometry_name = "rectangle [0,2pi]^2";
    spec.default_degree = 4;
    spec.default_elements = 32;
    spec.default_t_end = 1.0;
    return spec;
}

auto problem_exact_system() -> ProblemSpec {
    const Real b = 100.0;
    const Real c = 1.0;
    const Real d = 1.0;   // decay offset in the exact pair
    const Real a = 1.0;   // phase speed in the exact pair
    const Real d1 = 0.5;
    const Real d2 = 0.5;

    ProblemSpec spec;
    spec.name = "exact-system";
    spec.components = 2;

    // The exact pair
    //   u = (e^{-(b+d)t} + e^{-(c+d)t}) cos(x + y - a t)
    //   v = (b - c) e^{-(c+d)t} cos(x + y - a t)
    // solves the system with f = -b u + v (the +v coupling is what the
    // substitution of the pair requires), g = -c v.
    spec.f = [b](Real u, Real v, const Vector2&, Real) { return -b * u + v; };
    spec.g = [c](Real, Real v, const Vector2&, Real) { return -c * v; };

    spec.diffusion = DiffusionKind::constant;
    spec.d1 = d1;
    spec.d2 = d2;

    spec.velocity_kind = VelocityKind::constant;
    spec.velocity = [](const Vector2&, Real) { return Vector2(0.5, 0.5); };

    auto amp_u = [b, c, d](Real t) { return std::exp(-(b + d) * t) + std::exp(-(c + d) * t); };
    auto amp_v = [b, c, d](Real t) { return (b - c) * std::exp(-(c + d) * t); };

    spec.u0 = [amp_u](const Vector2& x) { return amp_u(0.0) * std::cos(x.x() + x.y()); };
    spec.v0 = [amp_v](const Vector2& x) { return amp_v(0.0) * std::cos(x.x() + x.y()); };
    spec.exact_u = [a, amp_u](const Vector2& x, Real t) {
        return amp_u(t) * std::cos(x.x() + x.y() - a * t);
    };
    spec.exact_v = [a, amp_v](const Vector2& x, Real t) {
        return amp_v(t) * std::cos(x.x() + x.y() - a * t);
    };

    // Diffusive flux for the BDF2 stage. The stage solves for the state
    // BEFORE the trailing reaction half-step, so the exact normal-derivative
    // pair at t is pulled backward through the linear reaction flow
    // exp(-half_dt * R) with R = [[-b, 1], [0, -c]]:
    //   E11 = e^{b h}, E22 = e^{c h}, E12 = (e^{c h} - e^{b h}) / (b - c).
    auto grad_scale_u = [amp_u](Real t) { return -amp_u(t); };  // du/dx = du/dy = -amp_u sin
    auto grad_scale_v = [amp_v](Real t) { return -amp_v(t); };

    spec.flux_u = [a, b, c, d1, grad_scale_u, grad_scale_v](const Vector2& x, const Vector2& n,
                                                            Real t, Real half_dt) {
        const Real s = std::sin(x.x() + x.y() - a * t);
        const Real gu = grad_scale_u(t) * s * (n.x() + n.y());
        const Real gv = grad_scale_v(t) * s * (n.x() + n.y());
        const Real e_b = std::exp(b * half_dt);
        const Real e_c = std::exp(c * half_dt);
        const Real e12 = (e_c - e_b) / (b - c);
        return d1 * (e_b * gu + e12 * gv);
    };
    spec.flux_v = [a, c, d2, grad_scale_v](const Vector2& x, const Vector2& n, Real t,
                                           Real half_dt) {
        const Real s = std::sin(x.x() + x.y() - a * t);
        const Real gv = grad_scale_v(t) * s * (n.x() + n.y());
        return d2 * std::exp(c * half_dt) * gv;
    };

    spec.default_bc = BcKind::neumann_exact;
    spec.reaction_scale = b;
    spec.make_geometry = [] { return make_rectangle(0.0, two_pi, 0.0, two_pi); };
    spec.geometry_name = "rectangle [0,2pi]^2";
    spec.default_degree = 4;
    spec.default_elements = 32;
    spec.default_t_end = 1.0;
    spec.params = {{"b", b}, {"c", c}, {"d", d}, {"a", a}};
    return spec;
}

auto problem_schnakenberg(Real gamma, bool with_advection, Real omega) -> ProblemSpec {
    if (!(gamma > 0.0))
        throw argument_error("problem_schnakenberg: gamma must be positive");
    const Real alpha = 0.1305;
    const Real beta = 0.7695;

    ProblemSpec spec;
    spec.name = "schnakenberg";
    spec.components = 2;

    spec.f = [gamma, alpha](Real u, Real v, const Vector2&, Real) {
        return gamma * (alpha - u + u * u * v);
    };
    spec.g = [gamma, beta](Real u, Real v, const Vector2&, Real) {
        return gamma * (beta - u * u * v);
    };

    spec.diffusion = DiffusionKind::constant;
    spec.d1 = 0.05;
    spec.d2 = 1.0;

    if (with_advection) {
        spec.velocity_kind = VelocityKind::toroidal;
        spec.velocity = velocity_toroidal(omega);
    }

    spec.u0 = [alpha, beta](const Vector2& x) {
        const Real dx = x.x() - 1.0 / 3.0;
        const Real dy = x.y() - 1.0 / 3.0;
        return alpha + beta + 1e-3 * std::exp(-100.0 * (dx * dx + dy * dy));
    };
    spec.v0 = [alpha, beta](const Vector2&) {
        return beta / ((alpha + beta) * (alpha + beta));
    };

    spec.default_bc = BcKind::neumann_zero;
    spec.reaction_scale = gamma;
    if (with_advection) {
        spec.make_geometry = [] { return make_rectangle(-0.5, 0.5, -0.5, 0.5); };
        spec.geometry_name = "rectangle [-1/2,1/2]^2";
    } else {
        spec.make_geometry = [] { return make_rectangle(0.0, 1.0, 0.0, 1.0); };
        spec.geometry_name = "unit square";
    }
    spec.default_degree = 5;
    spec.default_elements = 32;
    spec.default_dt = 0.01;
    spec.default_t_end = 2.0;
    spec.params = {{"alpha", alpha}, {"beta", beta}, {"gamma", gamma}, {"omega", omega}};
    return spec;
}

auto problem_gray_scott() -> ProblemSpec {
    const Real alpha = 0.024;
    const Real beta = 0.06;

    ProblemSpec spec;
    spec.name = "gray-scott";
    spec.components = 2;

    spec.f = [alpha](Real u, Real v, const Vector2&, Real) {
        return -u * v * v + alpha * (1.0 - u);
    };
    spec.g = [alpha, beta](Real u, Real v, const Vector2&, Real) {
        return u * v * v - (alpha + beta) * v;
    };

    spec.diffusion = DiffusionKind::constant;
    spec.d1 = 8e-5;
    spec.d2 = 4e-5;

    auto v_init = [](const Vector2& x) -> Real {
        if (x.x() < 1.0 || x.x() > 1.5 || x.y() < 1.0 || x.y() > 1.5)
            return 0.0;
        const Real sx = std::sin(4.0 * pi * x.x());
        const Real sy = std::sin(4.0 * pi * x.y());
        return 0.25 * sx * sx * sy * sy;
    };
    spec.u0 = [v_init](const Vector2& x) { return 1.0 - 2.0 * v_init(x); };
    spec.v0 = v_init;

    spec.default_bc = BcKind::neumann_zero;
    spec.reaction_scale = 1.0;
    spec.make_geometry = [] { return make_disk(Vector2(1.25, 1.25), 1.25); };
    spec.geometry_name = "disk((1.25,1.25), 1.25)";
    spec.default_degree = 5;
    spec.default_elements = 16;
    spec.default_dt = 1.0;
    spec.default_t_end = 3000.0;
    spec.params = {{"alpha", alpha}, {"beta", beta}};
    return spec;
}

auto make_problem(const std::string& name, Real gamma, bool with_advection, Real omega)
    -> ProblemSpec {
    if (name == "nonlinear-scalar")
        return problem_fully_nonlinear();
    if (name == "exact-system")
        return problem_exact_system();
    if (name == "schnakenberg")
        return problem_schnakenberg(gamma, with_advection, omega);
    if (name == "gray-scott")
        return problem_gray_scott();
    throw argument_error("unknown problem: " + name +
                         " (expected nonlinear-scalar, exact-system, schnakenberg, gray-scott)");
}

}  // namespace iga
