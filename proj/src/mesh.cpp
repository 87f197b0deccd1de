#include <iga/mesh.hpp>

#include <algorithm>
#include <cmath>

namespace iga {

auto parent_to_param(const Element& e, const Vector2& parent) -> Vector2 {
    return {0.5 * ((e.u1 - e.u0) * parent[0] + (e.u1 + e.u0)),
            0.5 * ((e.v1 - e.v0) * parent[1] + (e.v1 + e.v0))};
}

Mesh::Mesh(Patch patch) : patch_(std::move(patch)) {
    validate(patch_);
    spans_u_ = patch_.kv_u.nonempty_spans();
    spans_v_ = patch_.kv_v.nonempty_spans();
}

auto Mesh::element(Index k) const -> Element {
    const Index nu = num_elements_u();
    const Index su = spans_u_[static_cast<std::size_t>(k % nu)];
    const Index sv = spans_v_[static_cast<std::size_t>(k / nu)];
    return {su, sv, patch_.kv_u[su], patch_.kv_u[su + 1], patch_.kv_v[sv], patch_.kv_v[sv + 1]};
}

auto Mesh::element_dofs(Index k) const -> std::vector<Index> {
    const Element e = element(k);
    const int p = patch_.kv_u.degree();
    const int q = patch_.kv_v.degree();
    std::vector<Index> dofs;
    dofs.reserve(static_cast<std::size_t>(dofs_per_element()));
    for (int jv = 0; jv <= q; ++jv)
        for (int iu = 0; iu <= p; ++iu)
            dofs.push_back(patch_.global_index(e.span_u - p + iu, e.span_v - q + jv));
    return dofs;
}

auto Mesh::boundary_dofs() const -> std::vector<Index> {
    const Index m = patch_.num_u();
    const Index l = patch_.num_v();
    std::vector<bool> flag(static_cast<std::size_t>(num_dofs()), false);
    const auto mark_u = [&](Index i) {
        for (Index j = 0; j < l; ++j) flag[static_cast<std::size_t>(patch_.global_index(i, j))] = true;
    };
    const auto mark_v = [&](Index j) {
        for (Index i = 0; i < m; ++i) flag[static_cast<std::size_t>(patch_.global_index(i, j))] = true;
    };
    if (patch_.physical_edge[edge_u_min]) mark_u(0);
    if (patch_.physical_edge[edge_u_max]) mark_u(m - 1);
    if (patch_.physical_edge[edge_v_min]) mark_v(0);
    if (patch_.physical_edge[edge_v_max]) mark_v(l - 1);
    std::vector<Index> out;
    for (Index i = 0; i < num_dofs(); ++i)
        if (flag[static_cast<std::size_t>(i)]) out.push_back(i);
    return out;
}

auto Mesh::max_element_size() const -> Real {
    Real h = 0.0;
    for (Index k = 0; k < num_elements(); ++k) {
        const Element e = element(k);
        const Vector2 c00 = surface_eval(patch_, e.u0, e.v0);
        const Vector2 c10 = surface_eval(patch_, e.u1, e.v0);
        const Vector2 c01 = surface_eval(patch_, e.u0, e.v1);
        const Vector2 c11 = surface_eval(patch_, e.u1, e.v1);
        h = std::max({h, (c10 - c00).norm(), (c01 - c00).norm(), (c11 - c10).norm(),
                      (c11 - c01).norm()});
    }
    return h;
}

auto build_basis_cache(const Mesh& mesh, const QuadratureRule& rule) -> BasisCache {
    const auto& patch = mesh.patch();
    const int p = patch.kv_u.degree();
    const Index n_loc = mesh.dofs_per_element();
    const int nq = rule.size();

    BasisCache cache;
    cache.rule = rule;
    cache.elements.resize(static_cast<std::size_t>(mesh.num_elements()));

    for (Index k = 0; k < mesh.num_elements(); ++k) {
        const Element e = mesh.element(k);
        ElementData data;
        data.N.resize(nq, n_loc);
        data.dNdx.resize(nq, n_loc);
        data.dNdy.resize(nq, n_loc);
        data.wj.resize(nq);
        data.xq.resize(nq, 2);
        data.pq.resize(nq, 2);
        data.dofs = mesh.element_dofs(k);
        const Real scale = 0.25 * (e.u1 - e.u0) * (e.v1 - e.v0);

        for (int g = 0; g < nq; ++g) {
            const Vector2 param = parent_to_param(e, rule.node(g));
            const auto basis = patch_basis(patch, param[0], param[1], true);
            Matrix2 J = Matrix2::Zero();
            Vector2 x{0.0, 0.0};
            for (Index l = 0; l < n_loc; ++l) {
                const Index gi = basis.first_u + (l % (p + 1));
                const Index gj = basis.first_v + (l / (p + 1));
                x[0] += basis.N[l] * patch.px(gi, gj);
                x[1] += basis.N[l] * patch.py(gi, gj);
                J(0, 0) += basis.dN(l, 0) * patch.px(gi, gj);
                J(1, 0) += basis.dN(l, 0) * patch.py(gi, gj);
                J(0, 1) += basis.dN(l, 1) * patch.px(gi, gj);
                J(1, 1) += basis.dN(l, 1) * patch.py(gi, gj);
            }
            const Real det = J.determinant();
            if (!(det > 0.0))
                throw geometry_error("basis cache: non-positive Jacobian at quadrature point");
            const Matrix2 Jinv = J.inverse();
            for (Index l = 0; l < n_loc; ++l) {
                // grad_x N = J^{-T} grad_param N
                data.dNdx(g, l) = Jinv(0, 0) * basis.dN(l, 0) + Jinv(1, 0) * basis.dN(l, 1);
                data.dNdy(g, l) = Jinv(0, 1) * basis.dN(l, 0) + Jinv(1, 1) * basis.dN(l, 1);
                data.N(g, l) = basis.N[l];
            }
            data.wj[g] = rule.weight(g) * det * scale;
            data.xq.row(g) = x.transpose();
            data.pq.row(g) = param.transpose();
        }
        cache.elements[static_cast<std::size_t>(k)] = std::move(data);
    }
    return cache;
}

auto build_edge_cache(const Mesh& mesh, int n1d) -> std::vector<EdgeQP> {
    const auto& patch = mesh.patch();
    const Rule1D rule = gauss_legendre_1d(n1d);
    std::vector<EdgeQP> out;

    // walk each physical edge; `along_u` tells which direction varies.
    struct EdgeDesc {
        Edge edge;
        bool along_u;
        bool at_min;
    };
    const EdgeDesc descs[4] = {{edge_v_min, true, true},
                               {edge_v_max, true, false},
                               {edge_u_min, false, true},
                               {edge_u_max, false, false}};

    for (const auto& desc : descs) {
        if (!patch.physical_edge[desc.edge]) continue;
        const Index nu = mesh.num_elements_u();
        const Index nv = mesh.num_elements_v();
        const Index count = desc.along_u ? nu : nv;
        for (Index t = 0; t < count; ++t) {
            Index k;
            if (desc.along_u)
                k = t + (desc.at_min ? 0 : (nv - 1)) * nu;
            else
                k = (desc.at_min ? 0 : (nu - 1)) + t * nu;
            const Element e = mesh.element(k);
            const Real fixed = desc.along_u ? (desc.at_min ? e.v0 : e.v1)
                                            : (desc.at_min ? e.u0 : e.u1);
            const Real lo = desc.along_u ? e.u0 : e.v0;
            const Real hi = desc.along_u ? e.u1 : e.v1;

            for (int g = 0; g < n1d; ++g) {
                const Real s = 0.5 * ((hi - lo) * rule.nodes[static_cast<std::size_t>(g)] + hi + lo);
                const Real xi = desc.along_u ? s : fixed;
                const Real eta = desc.along_u ? fixed : s;
                const auto basis = patch_basis(patch, xi, eta, true);
                const Matrix2 J = jacobian_from_basis(patch, basis);
                const Vector2 tangent = desc.along_u ? Vector2(J.col(0)) : Vector2(J.col(1));
                EdgeQP qp;
                qp.element = k;
                qp.N = basis.N;
                qp.wt = rule.weights[static_cast<std::size_t>(g)] * tangent.norm() * 0.5 *
                        (hi - lo);
                Vector2 x{0.0, 0.0};
                const int p = patch.kv_u.degree();
                for (Index l = 0; l < basis.N.size(); ++l) {
                    const Index gi = basis.first_u + (l % (p + 1));
                    const Index gj = basis.first_v + (l / (p + 1));
                    x[0] += basis.N[l] * patch.px(gi, gj);
                    x[1] += basis.N[l] * patch.py(gi, gj);
                }
                qp.x = x;
                Vector2 n{tangent[1], -tangent[0]};
                n.normalize();
                // orient outward: step slightly into the domain and flip if needed
                const Real into = 1e-6 * (hi - lo);
                const Real xi_in = desc.along_u ? xi : (desc.at_min ? xi + into : xi - into);
                const Real eta_in = desc.along_u ? (desc.at_min ? eta + into : eta - into) : eta;
                const Vector2 inward = surface_eval(patch, xi_in, eta_in) - x;
                if (n.dot(inward) > 0.0) n = -n;
                qp.normal = n;
                out.push_back(std::move(qp));
            }
        }
    }
    return out;
}

}  // namespace iga
