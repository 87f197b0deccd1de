#include <iga/patch.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace iga {

auto validate(const Patch& patch) -> void {
    const Index m = patch.kv_u.num_basis();
    const Index l = patch.kv_v.num_basis();
    if (patch.weights.rows() != m || patch.weights.cols() != l)
        throw argument_error("patch: weight grid must be m_b x l_b");
    if (patch.px.rows() != m || patch.px.cols() != l || patch.py.rows() != m ||
        patch.py.cols() != l)
        throw argument_error("patch: control grid must be m_b x l_b");
    if ((patch.weights.array() <= 0.0).any())
        throw argument_error("patch: weights must be strictly positive");
}

auto patch_diameter(const Patch& patch) -> Real {
    const Real dx = patch.px.maxCoeff() - patch.px.minCoeff();
    const Real dy = patch.py.maxCoeff() - patch.py.minCoeff();
    return std::hypot(dx, dy);
}

auto patch_basis(const Patch& patch, Real xi, Real eta, bool with_derivatives) -> PatchBasis {
    const int p = patch.kv_u.degree();
    const int q = patch.kv_v.degree();
    const int order = with_derivatives ? 1 : 0;
    const auto bu = bspline_basis(patch.kv_u, xi, order);
    const auto bv = bspline_basis(patch.kv_v, eta, order);

    PatchBasis out;
    out.span_u = bu.span;
    out.span_v = bv.span;
    out.first_u = bu.first_index();
    out.first_v = bv.first_index();
    const Index n_loc = static_cast<Index>(p + 1) * (q + 1);
    out.N.resize(n_loc);

    // Weighted tensor basis and the rational normalization W (full weight net:
    // the disk's non-separable weights need the genuine 2D quotient).
    Real W = 0.0, Wu = 0.0, Wv = 0.0;
    for (int jv = 0; jv <= q; ++jv) {
        for (int iu = 0; iu <= p; ++iu) {
            const Real w = patch.weights(out.first_u + iu, out.first_v + jv);
            const Index l = iu + static_cast<Index>(jv) * (p + 1);
            out.N[l] = bu.ders(0, iu) * bv.ders(0, jv) * w;
            W += out.N[l];
            if (with_derivatives) {
                Wu += bu.ders(1, iu) * bv.ders(0, jv) * w;
                Wv += bu.ders(0, iu) * bv.ders(1, jv) * w;
            }
        }
    }
    if (with_derivatives) {
        out.dN.resize(n_loc, 2);
        for (int jv = 0; jv <= q; ++jv) {
            for (int iu = 0; iu <= p; ++iu) {
                const Real w = patch.weights(out.first_u + iu, out.first_v + jv);
                const Index l = iu + static_cast<Index>(jv) * (p + 1);
                const Real value = out.N[l] / W;
                out.dN(l, 0) = (bu.ders(1, iu) * bv.ders(0, jv) * w - value * Wu) / W;
                out.dN(l, 1) = (bu.ders(0, iu) * bv.ders(1, jv) * w - value * Wv) / W;
                out.N[l] = value;
            }
        }
    } else {
        out.N /= W;
    }
    return out;
}

auto eval_from_basis(const Patch& patch, const PatchBasis& b) -> Vector2 {
    const int p = patch.kv_u.degree();
    const int q = patch.kv_v.degree();
    Vector2 x{0.0, 0.0};
    for (int jv = 0; jv <= q; ++jv)
        for (int iu = 0; iu <= p; ++iu) {
            const Index l = iu + static_cast<Index>(jv) * (p + 1);
            const Index gi = b.first_u + iu;
            const Index gj = b.first_v + jv;
            x[0] += b.N[l] * patch.px(gi, gj);
            x[1] += b.N[l] * patch.py(gi, gj);
        }
    return x;
}

auto jacobian_from_basis(const Patch& patch, const PatchBasis& b) -> Matrix2 {
    const int p = patch.kv_u.degree();
    const int q = patch.kv_v.degree();
    Matrix2 J = Matrix2::Zero();
    for (int jv = 0; jv <= q; ++jv)
        for (int iu = 0; iu <= p; ++iu) {
            const Index l = iu + static_cast<Index>(jv) * (p + 1);
            const Index gi = b.first_u + iu;
            const Index gj = b.first_v + jv;
            J(0, 0) += b.dN(l, 0) * patch.px(gi, gj);
            J(1, 0) += b.dN(l, 0) * patch.py(gi, gj);
            J(0, 1) += b.dN(l, 1) * patch.px(gi, gj);
            J(1, 1) += b.dN(l, 1) * patch.py(gi, gj);
        }
    return J;
}

auto surface_eval(const Patch& patch, Real xi, Real eta) -> Vector2 {
    return eval_from_basis(patch, patch_basis(patch, xi, eta, false));
}

auto surface_jacobian(const Patch& patch, Real xi, Real eta) -> Matrix2 {
    const Matrix2 J = jacobian_from_basis(patch, patch_basis(patch, xi, eta, true));
    if (!(J.determinant() > 0.0))
        throw geometry_error("surface_jacobian: non-positive determinant");
    return J;
}

auto try_point_invert(const Patch& patch, const Vector2& x, std::optional<Vector2> seed)
    -> InversionResult {
    const Real a_u = patch.kv_u.param_begin(), b_u = patch.kv_u.param_end();
    const Real a_v = patch.kv_v.param_begin(), b_v = patch.kv_v.param_end();

    const auto on_box = [&](const Vector2& q) {
        return q[0] <= a_u + 1e-13 || q[0] >= b_u - 1e-13 || q[1] <= a_v + 1e-13 ||
               q[1] >= b_v - 1e-13;
    };

    if (patch.affine) {
        const auto& map = *patch.affine;
        const Vector2 q{a_u + (x[0] - map.origin[0]) / map.scale[0] * (b_u - a_u),
                        a_v + (x[1] - map.origin[1]) / map.scale[1] * (b_v - a_v)};
        InversionResult res;
        res.param = {std::clamp(q[0], a_u, b_u), std::clamp(q[1], a_v, b_v)};
        res.residual = (surface_eval(patch, res.param[0], res.param[1]) - x).norm();
        res.hit_box = on_box(res.param);
        return res;
    }

    const auto clamp_param = [&](Vector2 q) -> Vector2 {
        return {std::clamp(q[0], a_u, b_u), std::clamp(q[1], a_v, b_v)};
    };

    Vector2 best{0.5 * (a_u + b_u), 0.5 * (a_v + b_v)};
    Real best_dist = (surface_eval(patch, best[0], best[1]) - x).norm();
    if (seed) {
        const Vector2 s = clamp_param(*seed);
        const Real d = (surface_eval(patch, s[0], s[1]) - x).norm();
        if (d < best_dist) {
            best = s;
            best_dist = d;
        }
    } else {
        for (int i = 0; i < 8; ++i)
            for (int j = 0; j < 8; ++j) {
                const Vector2 s{a_u + (b_u - a_u) * (i + 0.5) / 8.0,
                                a_v + (b_v - a_v) * (j + 0.5) / 8.0};
                const Real d = (surface_eval(patch, s[0], s[1]) - x).norm();
                if (d < best_dist) {
                    best = s;
                    best_dist = d;
                }
            }
    }

    const Real tol = 1e-10 * patch_diameter(patch);
    Vector2 q = best;
    Real dist = best_dist;
    for (int it = 0; it < 50 && dist > tol; ++it) {
        const auto basis = patch_basis(patch, q[0], q[1], true);
        const Vector2 r = eval_from_basis(patch, basis) - x;
        const Matrix2 J = jacobian_from_basis(patch, basis);
        Vector2 step;
        if (std::abs(J.determinant()) > 1e-14) {
            step = J.partialPivLu().solve(-r);
        } else {
            step = -J.transpose() * r;  // gradient direction when J degenerates
        }
        Real lambda = 1.0;
        bool accepted = false;
        for (int h = 0; h < 10; ++h, lambda *= 0.5) {
            const Vector2 cand = clamp_param(q + lambda * step);
            const Real d = (surface_eval(patch, cand[0], cand[1]) - x).norm();
            if (d < dist) {
                q = cand;
                dist = d;
                accepted = true;
                break;
            }
        }
        if (!accepted) break;
    }

    InversionResult res;
    res.param = q;
    res.residual = dist;
    res.hit_box = on_box(q);
    return res;
}

auto point_invert(const Patch& patch, const Vector2& x) -> Vector2 {
    const auto res = try_point_invert(patch, x);
    if (res.residual > 1e-10 * patch_diameter(patch))
        throw geometry_error("point_invert: Newton iteration did not converge");
    return res.param;
}

auto patch_k_refine(const Patch& patch, int degree_u, int degree_v, int n_u, int n_v) -> Patch {
    validate(patch);
    const auto refine_dir = [](const KnotVector& kv, const MatrixX& H, int target, int n)
        -> std::pair<KnotVector, MatrixX> {
        if (target < kv.degree())
            throw argument_error("k_refine: target degree below current degree");
        if (n < 1) throw argument_error("k_refine: need at least one subdivision");
        KnotVector rkv = kv;
        MatrixX rH = H;
        while (rkv.degree() < target) std::tie(rkv, rH) = elevate_homogeneous(rkv, rH);
        const Real a = rkv.param_begin(), b = rkv.param_end();
        for (int i = 1; i < n; ++i) {
            const Real xi = a + (b - a) * static_cast<Real>(i) / static_cast<Real>(n);
            const auto& knots = rkv.data();
            const bool present = std::any_of(knots.begin(), knots.end(), [&](Real u) {
                return std::abs(u - xi) <= 1e-12 * std::abs(b - a);
            });
            if (!present) std::tie(rkv, rH) = insert_knot_homogeneous(rkv, rH, xi);
        }
        return {std::move(rkv), std::move(rH)};
    };

    // u direction: rows are u indices; pack (wx, wy, w) triplets per column.
    Index m = patch.num_u(), l = patch.num_v();
    MatrixX H(m, 3 * l);
    for (Index j = 0; j < l; ++j)
        for (Index i = 0; i < m; ++i) {
            const Real w = patch.weights(i, j);
            H(i, 3 * j + 0) = w * patch.px(i, j);
            H(i, 3 * j + 1) = w * patch.py(i, j);
            H(i, 3 * j + 2) = w;
        }
    auto [kv_u, Hu] = refine_dir(patch.kv_u, H, degree_u, n_u);
    m = kv_u.num_basis();

    // v direction: transpose roles.
    MatrixX G(l, 3 * m);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < l; ++j) {
            G(j, 3 * i + 0) = Hu(i, 3 * j + 0);
            G(j, 3 * i + 1) = Hu(i, 3 * j + 1);
            G(j, 3 * i + 2) = Hu(i, 3 * j + 2);
        }
    auto [kv_v, Gv] = refine_dir(patch.kv_v, G, degree_v, n_v);
    l = kv_v.num_basis();

    Patch out;
    out.kv_u = std::move(kv_u);
    out.kv_v = std::move(kv_v);
    out.weights.resize(m, l);
    out.px.resize(m, l);
    out.py.resize(m, l);
    for (Index i = 0; i < m; ++i)
        for (Index j = 0; j < l; ++j) {
            const Real w = Gv(j, 3 * i + 2);
            out.weights(i, j) = w;
            out.px(i, j) = Gv(j, 3 * i + 0) / w;
            out.py(i, j) = Gv(j, 3 * i + 1) / w;
        }
    out.physical_edge = patch.physical_edge;
    out.affine = patch.affine;
    return out;
}

auto make_rectangle(Real x0, Real x1, Real y0, Real y1) -> Patch {
    if (!(x1 > x0 && y1 > y0)) throw argument_error("rectangle: empty extent");
    Patch patch;
    patch.kv_u = KnotVector(1, {0.0, 0.0, 1.0, 1.0});
    patch.kv_v = KnotVector(1, {0.0, 0.0, 1.0, 1.0});
    patch.weights = MatrixX::Ones(2, 2);
    patch.px.resize(2, 2);
    patch.py.resize(2, 2);
    patch.px << x0, x0, x1, x1;
    patch.py << y0, y1, y0, y1;
    patch.affine = AffineMap{{x0, y0}, {x1 - x0, y1 - y0}};
    return patch;
}

auto make_disk(const Vector2& center, Real radius) -> Patch {
    if (!(radius > 0.0)) throw argument_error("disk: radius must be positive");
    // Standard 9-point biquadratic square-to-disk map: corners on the circle
    // at 45-degree diagonals, edge midpoints at the tangent intersections.
    const Real w = std::numbers::sqrt2 / 2.0;
    const Real s = radius * w;       // corner coordinate
    const Real t = radius * std::numbers::sqrt2;  // tangent intersection distance
    Patch patch;
    patch.kv_u = KnotVector(2, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0});
    patch.kv_v = KnotVector(2, {0.0, 0.0, 0.0, 1.0, 1.0, 1.0});
    patch.weights.resize(3, 3);
    patch.weights << 1.0, w, 1.0,
                     w, 1.0, w,
                     1.0, w, 1.0;
    patch.px.resize(3, 3);
    patch.py.resize(3, 3);
    patch.px << -s, -t, -s,
                0.0, 0.0, 0.0,
                s, t, s;
    patch.py << -s, 0.0, s,
                -t, 0.0, t,
                -s, 0.0, s;
    patch.px.array() += center[0];
    patch.py.array() += center[1];
    return patch;
}

auto make_annulus(const Vector2& center, Real r_inner, Real r_outer) -> Patch {
    if (!(r_inner > 0.0 && r_outer > r_inner))
        throw argument_error("annulus: need 0 < r_inner < r_outer");
    // u runs radially (linear), v runs around the full circle as four
    // rational quadratic arcs with double knots at the quarter points.
    const Real w = std::numbers::sqrt2 / 2.0;
    Patch patch;
    patch.kv_u = KnotVector(1, {0.0, 0.0, 1.0, 1.0});
    patch.kv_v = KnotVector(2, {0.0, 0.0, 0.0, 0.25, 0.25, 0.5, 0.5, 0.75, 0.75, 1.0, 1.0, 1.0});
    patch.weights.resize(2, 9);
    patch.px.resize(2, 9);
    patch.py.resize(2, 9);
    for (int k = 0; k < 9; ++k) {
        const Real theta = 2.0 * std::numbers::pi * static_cast<Real>(k) / 8.0;
        const bool corner = (k % 2) == 1;
        const Real stretch = corner ? std::numbers::sqrt2 : 1.0;
        const Real weight = corner ? w : 1.0;
        for (int i = 0; i < 2; ++i) {
            const Real r = (i == 0 ? r_inner : r_outer) * stretch;
            patch.px(i, k) = center[0] + r * std::cos(theta);
            patch.py(i, k) = center[1] + r * std::sin(theta);
            patch.weights(i, k) = weight;
        }
    }
    patch.physical_edge = {true, true, false, false};  // v edges meet at the seam
    return patch;
}

}  // namespace iga
