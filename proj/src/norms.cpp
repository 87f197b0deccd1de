#include <iga/norms.hpp>

#include <iga/assembly.hpp>

#include <algorithm>
#include <cmath>

namespace iga {

auto sample_field(const Mesh& mesh, const VectorX& coeffs, Index n) -> FieldSample {
    if (n < 2)
        throw argument_error("sample grid needs at least 2 points per direction");
    const auto& patch = mesh.patch();
    if (coeffs.size() != patch.num_dofs())
        throw argument_error("coefficient vector does not match the patch");

    const Real u0 = patch.kv_u.param_begin(), u1 = patch.kv_u.param_end();
    const Real v0 = patch.kv_v.param_begin(), v1 = patch.kv_v.param_end();
    const Index p1 = static_cast<Index>(patch.kv_u.degree()) + 1;
    const Index num_u = patch.num_u();

    FieldSample out;
    out.x.resize(n, n);
    out.y.resize(n, n);
    out.value.resize(n, n);
    for (Index j = 0; j < n; ++j) {
        const Real eta = v0 + (v1 - v0) * static_cast<Real>(j) / static_cast<Real>(n - 1);
        for (Index i = 0; i < n; ++i) {
            const Real xi = u0 + (u1 - u0) * static_cast<Real>(i) / static_cast<Real>(n - 1);
            const PatchBasis pb = patch_basis(patch, xi, eta, false);
            const Vector2 xphys = eval_from_basis(patch, pb);
            Real acc = 0.0;
            for (Index l = 0; l < pb.N.size(); ++l) {
                const Index gi = pb.first_u + (l % p1);
                const Index gj = pb.first_v + (l / p1);
                acc += coeffs(gi + gj * num_u) * pb.N(l);
            }
            out.x(i, j) = xphys.x();
            out.y(i, j) = xphys.y();
            out.value(i, j) = acc;
        }
    }
    return out;
}

auto error_norms(const Mesh& mesh, const BasisCache& cache, const VectorX& coeffs,
                 const ExactFn& exact, Real t, Index sample_n) -> std::pair<Real, Real> {
    if (!exact)
        throw argument_error("error norms need an exact solution");

    const VectorX at_qps = evaluate_at_qps(cache, coeffs);
    const int nq = cache.rule.size();
    Real l1 = 0.0;
    for (Index k = 0; k < mesh.num_elements(); ++k) {
        const ElementData& ed = cache.elements[static_cast<std::size_t>(k)];
        for (int g = 0; g < nq; ++g) {
            const Vector2 x(ed.xq(g, 0), ed.xq(g, 1));
            l1 += ed.wj(g) * std::abs(at_qps(k * nq + g) - exact(x, t));
        }
    }

    const FieldSample sample = sample_field(mesh, coeffs, sample_n);
    Real linf = 0.0;
    for (Index j = 0; j < sample_n; ++j) {
        for (Index i = 0; i < sample_n; ++i) {
            const Vector2 x(sample.x(i, j), sample.y(i, j));
            linf = std::max(linf, std::abs(sample.value(i, j) - exact(x, t)));
        }
    }
    return {l1, linf};
}

auto fit_slope(const std::vector<Real>& h, const std::vector<Real>& error) -> Real {
    if (h.size() != error.size() || h.size() < 2)
        throw argument_error("slope fit needs at least two (h, error) pairs");

    const auto n = static_cast<Real>(h.size());
    Real sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < h.size(); ++i) {
        if (h[i] <= 0.0)
            throw argument_error("mesh sizes must be positive");
        const Real x = std::log(h[i]);
        const Real y = std::log(std::max(error[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const Real denom = n * sxx - sx * sx;
    if (denom == 0.0)
        throw argument_error("slope fit needs distinct mesh sizes");
    return (n * sxy - sx * sy) / denom;
}

auto DtRule::operator()(Real h, int degree) const -> Real {
    if (h <= 0.0)
        throw argument_error("mesh size must be positive");
    if (coefficient <= 0.0)
        throw argument_error("dt rule coefficient must be positive");
    return coefficient * std::pow(h, 0.5 * static_cast<Real>(degree + 1));
}

auto convergence_study(const ProblemSpec& problem, const std::vector<int>& degrees,
                       const std::vector<Index>& meshes, const DtRule& dt_rule, Real t_end)
    -> ErrorReport {
    if (!problem.exact_u)
        throw argument_error("convergence study needs a problem with an exact solution");
    if (degrees.empty() || meshes.empty())
        throw argument_error("convergence study needs degrees and meshes");

    ErrorReport report;
    for (const int p : degrees) {
        std::vector<Real> hs, l1s, linfs;
        for (const Index n : meshes) {
            const Discretization disc = discretize(problem, p, n, n);
            const Real h = disc.mesh.max_element_size();

            SolverConfig config;
            config.dt = dt_rule(h, p);
            config.t_end = t_end;
            const SimulationResult result =
                run_simulation(problem, disc.mesh, disc.cache, config);

            const auto [l1, linf] = error_norms(disc.mesh, disc.cache, result.u,
                                                problem.exact_u, result.t_final, 4 * n);
            report.rows.push_back({p, n, h, result.dt_used, l1, linf});
            hs.push_back(h);
            l1s.push_back(l1);
            linfs.push_back(linf);
        }
        if (hs.size() >= 2) {
            report.slope_l1[p] = fit_slope(hs, l1s);
            report.slope_linf[p] = fit_slope(hs, linfs);
        }
    }
    return report;
}

}  // namespace iga
