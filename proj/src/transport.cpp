#include <iga/transport.hpp>

#include <iga/assembly.hpp>
#include <iga/parallel.hpp>

#include <cmath>
#include <cstdio>
#include <vector>

namespace iga {

namespace {

auto require_finite(const Vector2& a, const Vector2& x, Real t) -> void {
    if (!std::isfinite(a.x()) || !std::isfinite(a.y())) {
        char msg[128];
        std::snprintf(msg, sizeof(msg), "velocity non-finite at x = (%.6g, %.6g), t = %.6g",
                      x.x(), x.y(), t);
        throw numeric_error(msg);
    }
}

}  // namespace

auto trace_departure_rk3(const Vector2& x, const VelocityFn& a, Real t_arrival, Real dt)
    -> Vector2 {
    if (!(dt > 0.0))
        throw argument_error("trace_departure_rk3: dt must be positive");
    const Vector2 a1 = a(x, t_arrival);
    require_finite(a1, x, t_arrival);
    const Vector2 k1 = x - dt * a1;

    const Vector2 a2 = a(k1, t_arrival - dt);
    require_finite(a2, k1, t_arrival - dt);
    const Vector2 k2 = 0.75 * x + 0.25 * k1 - 0.25 * dt * a2;

    const Vector2 a3 = a(k2, t_arrival - 0.5 * dt);
    require_finite(a3, k2, t_arrival - 0.5 * dt);
    return (1.0 / 3.0) * x + (2.0 / 3.0) * k2 - (2.0 / 3.0) * dt * a3;
}

auto compute_departure_data(const Mesh& mesh, const BasisCache& cache, const VelocityFn& a,
                            Real t_arrival, Real dt) -> DepartureData {
    const auto& patch = mesh.patch();
    const Index nq = cache.rule.size();
    const Index n_points = static_cast<Index>(cache.elements.size()) * nq;
    const Index n_loc = mesh.dofs_per_element();
    const Real tol = 1e-10 * patch_diameter(patch);

    DepartureData dep;
    dep.first_u.resize(static_cast<std::size_t>(n_points));
    dep.first_v.resize(static_cast<std::size_t>(n_points));
    dep.N.resize(n_points, n_loc);

    std::vector<char> clamped_flag(static_cast<std::size_t>(n_points), 0);
    std::vector<Real> residual(static_cast<std::size_t>(n_points), 0.0);

    parallel_for(n_points, [&](Index i) {
        const Index k = i / nq;
        const Index g = i % nq;
        const ElementData& ed = cache.elements[static_cast<std::size_t>(k)];
        const Vector2 x(ed.xq(g, 0), ed.xq(g, 1));
        const Vector2 y = trace_departure_rk3(x, a, t_arrival, dt);

        // Departures move only a few cells for reasonable CFL numbers, so the
        // arrival parametric point is an excellent Newton seed.
        const Vector2 seed(ed.pq(g, 0), ed.pq(g, 1));
        InversionResult inv = try_point_invert(patch, y, seed);
        if (inv.residual > tol && !inv.hit_box)
            inv = try_point_invert(patch, y);  // retry from a fresh grid scan
        if (inv.residual > tol) {
            if (!inv.hit_box) {
                char msg[128];
                std::snprintf(msg, sizeof(msg),
                              "departure point inversion failed at x = (%.6g, %.6g)", y.x(),
                              y.y());
                throw numeric_error(msg);
            }
            // Characteristic left the domain; the point is clamped to the
            // parametric boundary.
            clamped_flag[static_cast<std::size_t>(i)] = 1;
        }
        const bool off_patch = clamped_flag[static_cast<std::size_t>(i)] != 0;
        residual[static_cast<std::size_t>(i)] = off_patch ? 0.0 : inv.residual;

        const PatchBasis pb = patch_basis(patch, inv.param.x(), inv.param.y(), off_patch);
        dep.first_u[static_cast<std::size_t>(i)] = pb.first_u;
        dep.first_v[static_cast<std::size_t>(i)] = pb.first_v;
        if (off_patch) {
            // Extend the field off the clamped boundary point to first
            // order by folding dx . grad into the stored weights: a plain
            // clamped value is an O(|a| dt) defect in the inflow strip,
            // which caps the observable temporal order; the linear
            // extension leaves an O((|a| dt)^2) remainder. Fall back to
            // the plain value where the geometry Jacobian degenerates
            // (disk corners) or the offset is too large to trust.
            dep.N.row(i) = pb.N.transpose();
            const Vector2 dx = y - eval_from_basis(patch, pb);
            const Matrix2 J = jacobian_from_basis(patch, pb);
            const Real det = J.determinant();
            if (std::isfinite(det) && det != 0.0) {
                const Vector2 dparam = J.inverse() * dx;
                if (dparam.allFinite() && dparam.norm() < 0.5)
                    dep.N.row(i) += (pb.dN * dparam).transpose();
            }
        } else {
            dep.N.row(i) = pb.N.transpose();
        }
    });

    for (Index i = 0; i < n_points; ++i) {
        dep.clamped += clamped_flag[static_cast<std::size_t>(i)];
        if (residual[static_cast<std::size_t>(i)] > dep.max_residual)
            dep.max_residual = residual[static_cast<std::size_t>(i)];
    }
    return dep;
}

auto identity_departure_data(const Mesh& mesh, const BasisCache& cache) -> DepartureData {
    const auto& patch = mesh.patch();
    const Index nq = cache.rule.size();
    const Index n_points = static_cast<Index>(cache.elements.size()) * nq;
    const Index n_loc = mesh.dofs_per_element();

    DepartureData dep;
    dep.first_u.resize(static_cast<std::size_t>(n_points));
    dep.first_v.resize(static_cast<std::size_t>(n_points));
    dep.N.resize(n_points, n_loc);

    for (Index k = 0; k < static_cast<Index>(cache.elements.size()); ++k) {
        const ElementData& ed = cache.elements[static_cast<std::size_t>(k)];
        for (Index g = 0; g < nq; ++g) {
            const Index i = k * nq + g;
            const PatchBasis pb = patch_basis(patch, ed.pq(g, 0), ed.pq(g, 1), false);
            dep.first_u[static_cast<std::size_t>(i)] = pb.first_u;
            dep.first_v[static_cast<std::size_t>(i)] = pb.first_v;
            dep.N.row(i) = pb.N.transpose();
        }
    }
    return dep;
}

auto evaluate_departure(const Mesh& mesh, const DepartureData& dep, const VectorX& coeffs)
    -> VectorX {
    const auto& patch = mesh.patch();
    const Index p1 = static_cast<Index>(patch.kv_u.degree()) + 1;
    const Index n_loc = dep.N.cols();
    const Index num_u = patch.num_u();
    const Index n_points = dep.N.rows();

    VectorX out(n_points);
    parallel_for(n_points, [&](Index i) {
        const Index fu = dep.first_u[static_cast<std::size_t>(i)];
        const Index fv = dep.first_v[static_cast<std::size_t>(i)];
        Real acc = 0.0;
        for (Index l = 0; l < n_loc; ++l) {
            const Index gi = fu + (l % p1);
            const Index gj = fv + (l / p1);
            acc += coeffs(gi + gj * num_u) * dep.N(i, l);
        }
        out(i) = acc;
    });
    return out;
}

auto locate_and_evaluate(const Mesh& mesh, const VectorX& coeffs, const Vector2& x,
                         std::atomic<long>* touched) -> Real {
    const auto& patch = mesh.patch();
    const Vector2 param = point_invert(patch, x);
    const PatchBasis pb = patch_basis(patch, param.x(), param.y(), false);

    const Index p1 = static_cast<Index>(patch.kv_u.degree()) + 1;
    const Index num_u = patch.num_u();
    Real acc = 0.0;
    for (Index l = 0; l < pb.N.size(); ++l) {
        const Index gi = pb.first_u + (l % p1);
        const Index gj = pb.first_v + (l / p1);
        acc += coeffs(gi + gj * num_u) * pb.N(l);
    }
    if (touched)
        *touched += static_cast<long>(pb.N.size());
    return acc;
}

auto evaluate_field_clamped(const Mesh& mesh, const VectorX& coeffs, const Vector2& x)
    -> Real {
    const auto& patch = mesh.patch();
    const InversionResult inv = try_point_invert(patch, x);
    const PatchBasis pb = patch_basis(patch, inv.param.x(), inv.param.y(), false);

    const Index p1 = static_cast<Index>(patch.kv_u.degree()) + 1;
    const Index num_u = patch.num_u();
    Real acc = 0.0;
    for (Index l = 0; l < pb.N.size(); ++l) {
        const Index gi = pb.first_u + (l % p1);
        const Index gj = pb.first_v + (l / p1);
        acc += coeffs(gi + gj * num_u) * pb.N(l);
    }
    return acc;
}

auto sl_rhs(const BasisCache& cache, const Mesh& mesh, const DepartureData& dep,
            const VectorX& coeffs) -> VectorX {
    const VectorX values = evaluate_departure(mesh, dep, coeffs);
    return integrate_against_basis(cache, mesh.num_dofs(), values);
}

}  // namespace iga
