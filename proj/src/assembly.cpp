#include <iga/assembly.hpp>

#include <cmath>
#include <cstdio>
#include <vector>

namespace iga {

namespace {

// Shared element-loop skeleton for symmetric bilinear forms. `local` must
// fill an n_loc x n_loc symmetric element matrix for element data `ed`.
template <typename LocalKernel>
auto assemble_symmetric(const BasisCache& cache, Index ndofs, LocalKernel&& local)
    -> SparseMatrix {
    std::vector<Triplet> trips;
    if (!cache.elements.empty()) {
        const auto n_loc = cache.elements.front().dofs.size();
        trips.reserve(cache.elements.size() * n_loc * n_loc);
    }
    MatrixX a;
    for (const ElementData& ed : cache.elements) {
        const Index n_loc = static_cast<Index>(ed.dofs.size());
        a.setZero(n_loc, n_loc);
        local(ed, a);
        for (Index row = 0; row < n_loc; ++row)
            for (Index col = 0; col < n_loc; ++col)
                trips.emplace_back(ed.dofs[static_cast<std::size_t>(row)],
                                   ed.dofs[static_cast<std::size_t>(col)], a(row, col));
    }
    SparseMatrix m(ndofs, ndofs);
    m.setFromTriplets(trips.begin(), trips.end());
    m.makeCompressed();
    return m;
}

}  // namespace

auto assemble_mass(const BasisCache& cache, Index ndofs) -> SparseMatrix {
    return assemble_symmetric(cache, ndofs, [](const ElementData& ed, MatrixX& a) {
        const Index nq = ed.N.rows();
        for (Index g = 0; g < nq; ++g) {
            const auto row = ed.N.row(g).transpose();
            a.noalias() += ed.wj(g) * (row * row.transpose());
        }
    });
}

auto assemble_stiffness(const BasisCache& cache, Index ndofs, Real coefficient) -> SparseMatrix {
    return assemble_symmetric(cache, ndofs, [coefficient](const ElementData& ed, MatrixX& a) {
        const Index nq = ed.N.rows();
        for (Index g = 0; g < nq; ++g) {
            const Real w = coefficient * ed.wj(g);
            const auto gx = ed.dNdx.row(g).transpose();
            const auto gy = ed.dNdy.row(g).transpose();
            a.noalias() += w * (gx * gx.transpose());
            a.noalias() += w * (gy * gy.transpose());
        }
    });
}

auto assemble_stiffness_field(const BasisCache& cache, Index ndofs, const VectorX& coeff_field)
    -> SparseMatrix {
    return assemble_symmetric(cache, ndofs, [&coeff_field](const ElementData& ed, MatrixX& a) {
        const Index nq = ed.N.rows();
        const Index n_loc = static_cast<Index>(ed.dofs.size());
        for (Index g = 0; g < nq; ++g) {
            Real d = 0.0;
            for (Index l = 0; l < n_loc; ++l)
                d += coeff_field(ed.dofs[static_cast<std::size_t>(l)]) * ed.N(g, l);
            const Real w = d * ed.wj(g);
            const auto gx = ed.dNdx.row(g).transpose();
            const auto gy = ed.dNdy.row(g).transpose();
            a.noalias() += w * (gx * gx.transpose());
            a.noalias() += w * (gy * gy.transpose());
        }
    });
}

auto evaluate_at_qps(const BasisCache& cache, const VectorX& coeffs) -> VectorX {
    const Index nq = cache.rule.size();
    VectorX out(static_cast<Index>(cache.elements.size()) * nq);
    Index base = 0;
    VectorX local;
    for (const ElementData& ed : cache.elements) {
        const Index n_loc = static_cast<Index>(ed.dofs.size());
        local.resize(n_loc);
        for (Index l = 0; l < n_loc; ++l)
            local(l) = coeffs(ed.dofs[static_cast<std::size_t>(l)]);
        out.segment(base, nq).noalias() = ed.N * local;
        base += nq;
    }
    return out;
}

auto integrate_against_basis(const BasisCache& cache, Index ndofs, const VectorX& qp_values)
    -> VectorX {
    const Index nq = cache.rule.size();
    if (qp_values.size() != static_cast<Index>(cache.elements.size()) * nq)
        throw argument_error("integrate_against_basis: quadrature value count mismatch");
    VectorX b = VectorX::Zero(ndofs);
    Index base = 0;
    VectorX local;
    for (const ElementData& ed : cache.elements) {
        const Index n_loc = static_cast<Index>(ed.dofs.size());
        local.noalias() =
            ed.N.transpose() * (ed.wj.array() * qp_values.segment(base, nq).array()).matrix();
        for (Index l = 0; l < n_loc; ++l)
            b(ed.dofs[static_cast<std::size_t>(l)]) += local(l);
        base += nq;
    }
    return b;
}

auto assemble_load(const BasisCache& cache, Index ndofs, const SpatialFn& f) -> VectorX {
    const Index nq = cache.rule.size();
    VectorX vals(static_cast<Index>(cache.elements.size()) * nq);
    Index base = 0;
    for (const ElementData& ed : cache.elements) {
        for (Index g = 0; g < nq; ++g)
            vals(base + g) = f(Vector2(ed.xq(g, 0), ed.xq(g, 1)));
        base += nq;
    }
    return integrate_against_basis(cache, ndofs, vals);
}

auto assemble_reaction_loads(const BasisCache& cache, Index ndofs, const VectorX& u,
                             const VectorX& v, const ReactionFn& f, const ReactionFn& g, Real t)
    -> std::pair<VectorX, VectorX> {
    const Index nq = cache.rule.size();
    const Index total = static_cast<Index>(cache.elements.size()) * nq;
    const bool coupled = v.size() > 0;

    const VectorX u_qp = evaluate_at_qps(cache, u);
    VectorX v_qp;
    if (coupled)
        v_qp = evaluate_at_qps(cache, v);

    VectorX f_qp(total);
    VectorX g_qp;
    if (g)
        g_qp.resize(total);

    Index base = 0;
    for (const ElementData& ed : cache.elements) {
        for (Index gp = 0; gp < nq; ++gp) {
            const Index idx = base + gp;
            const Vector2 x(ed.xq(gp, 0), ed.xq(gp, 1));
            const Real uv = u_qp(idx);
            const Real vv = coupled ? v_qp(idx) : 0.0;
            const Real fv = f(uv, vv, x, t);
            if (!std::isfinite(fv)) {
                char msg[160];
                std::snprintf(msg, sizeof(msg),
                              "reaction f non-finite at x = (%.6g, %.6g), t = %.6g "
                              "(u = %.6g, v = %.6g)",
                              x.x(), x.y(), t, uv, vv);
                throw numeric_error(msg);
            }
            f_qp(idx) = fv;
            if (g) {
                const Real gv = g(uv, vv, x, t);
                if (!std::isfinite(gv)) {
                    char msg[160];
                    std::snprintf(msg, sizeof(msg),
                                  "reaction g non-finite at x = (%.6g, %.6g), t = %.6g "
                                  "(u = %.6g, v = %.6g)",
                                  x.x(), x.y(), t, uv, vv);
                    throw numeric_error(msg);
                }
                g_qp(idx) = gv;
            }
        }
        base += nq;
    }

    VectorX bf = integrate_against_basis(cache, ndofs, f_qp);
    VectorX bg;
    if (g)
        bg = integrate_against_basis(cache, ndofs, g_qp);
    return {std::move(bf), std::move(bg)};
}

auto assemble_boundary_flux(const Mesh& mesh, const std::vector<EdgeQP>& edges, const FluxFn& flux)
    -> VectorX {
    VectorX b = VectorX::Zero(mesh.num_dofs());
    Index cached_element = -1;
    std::vector<Index> dofs;
    for (const EdgeQP& e : edges) {
        if (e.element != cached_element) {
            dofs = mesh.element_dofs(e.element);
            cached_element = e.element;
        }
        const Real val = flux(e.x, e.normal) * e.wt;
        for (Index l = 0; l < e.N.size(); ++l)
            b(dofs[static_cast<std::size_t>(l)]) += val * e.N(l);
    }
    return b;
}

auto apply_dirichlet(SparseMatrix& matrix, VectorX& rhs, const std::vector<Index>& dofs) -> void {
    if (dofs.empty())
        return;
    std::vector<char> flag(static_cast<std::size_t>(matrix.rows()), 0);
    for (Index d : dofs) {
        if (d < 0 || d >= matrix.rows())
            throw argument_error("apply_dirichlet: dof index out of range");
        flag[static_cast<std::size_t>(d)] = 1;
        rhs(d) = 0.0;
    }
    for (int k = 0; k < matrix.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(matrix, k); it; ++it) {
            const bool row_c = flag[static_cast<std::size_t>(it.row())] != 0;
            const bool col_c = flag[static_cast<std::size_t>(it.col())] != 0;
            if (row_c || col_c)
                it.valueRef() = (it.row() == it.col()) ? 1.0 : 0.0;
        }
    }
    matrix.prune([](Index, Index, Real value) { return value != 0.0; });
}

}  // namespace iga
