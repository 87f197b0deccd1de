#pragma once

#include <iga/mesh.hpp>
#include <iga/types.hpp>

#include <functional>
#include <utility>
#include <vector>

namespace iga {

// Scalar spatial field f(x) used for projection loads and sources.
using SpatialFn = std::function<Real(const Vector2&)>;

// Reaction term f(u, v, x, t) evaluated pointwise at quadrature points.
using ReactionFn = std::function<Real(Real, Real, const Vector2&, Real)>;

// Boundary flux density g(x, n) integrated against the basis along physical
// boundary edges (weak Neumann data).
using FluxFn = std::function<Real(const Vector2&, const Vector2&)>;

// Consistent Galerkin mass matrix from cached basis data.
auto assemble_mass(const BasisCache& cache, Index ndofs) -> SparseMatrix;

// Stiffness matrix with a constant diffusion coefficient.
auto assemble_stiffness(const BasisCache& cache, Index ndofs, Real coefficient) -> SparseMatrix;

// Stiffness matrix whose coefficient is itself a discrete field: the
// coefficient at each quadrature point is the expansion of `coeff_field`
// in the same basis (used when the diffusion coefficient is the lagged
// solution).
auto assemble_stiffness_field(const BasisCache& cache, Index ndofs, const VectorX& coeff_field)
    -> SparseMatrix;

// Values of the discrete field with coefficients `coeffs` at every cached
// quadrature point, flattened element-major (k * nq + g).
auto evaluate_at_qps(const BasisCache& cache, const VectorX& coeffs) -> VectorX;

// Load vector b_m = sum_k sum_g wj * qp_values[k*nq+g] * N_m.
auto integrate_against_basis(const BasisCache& cache, Index ndofs, const VectorX& qp_values)
    -> VectorX;

// Load vector of a spatial function: b_m = integral f(x) N_m dx.
auto assemble_load(const BasisCache& cache, Index ndofs, const SpatialFn& f) -> VectorX;

// Reaction loads for a coupled pair: (integral f(u_h,v_h) N_m, integral
// g(u_h,v_h) N_m). For scalar problems pass an empty `v` (v_h is taken as 0)
// and a null g; the second vector comes back empty. Non-finite reaction
// values abort with the offending physical location.
auto assemble_reaction_loads(const BasisCache& cache, Index ndofs, const VectorX& u,
                             const VectorX& v, const ReactionFn& f, const ReactionFn& g, Real t)
    -> std::pair<VectorX, VectorX>;

// Weak Neumann boundary term: b_m += integral_boundary flux(x, n) N_m ds.
auto assemble_boundary_flux(const Mesh& mesh, const std::vector<EdgeQP>& edges, const FluxFn& flux)
    -> VectorX;

// Homogeneous Dirichlet constraints by symmetric row/column elimination:
// constrained rows and columns are zeroed, the diagonal set to 1, and the
// right-hand side entry set to 0.
auto apply_dirichlet(SparseMatrix& matrix, VectorX& rhs, const std::vector<Index>& dofs) -> void;

}  // namespace iga
