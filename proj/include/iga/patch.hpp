#pragma once

#include <iga/nurbs.hpp>
#include <iga/types.hpp>

#include <array>
#include <optional>

namespace iga {

// Axis-aligned affine map x = origin + scale .* (xi, eta); kept by rectangle
// presets so point inversion is a closed-form division.
struct AffineMap {
    Vector2 origin;
    Vector2 scale;
};

// Parametric edges of the patch square.
enum Edge : int { edge_u_min = 0, edge_u_max = 1, edge_v_min = 2, edge_v_max = 3 };

// Tensor-product NURBS surface in the plane.  Control data is stored as
// m_b x l_b grids indexed (i, j) = (u index, v index); the flat index of a
// basis function is m = i + j * m_b.
struct Patch {
    KnotVector kv_u;
    KnotVector kv_v;
    MatrixX weights;  // m_b x l_b, strictly positive
    MatrixX px;       // control x coordinates
    MatrixX py;       // control y coordinates
    std::array<bool, 4> physical_edge{true, true, true, true};
    std::optional<AffineMap> affine;

    auto num_u() const noexcept -> Index { return kv_u.num_basis(); }
    auto num_v() const noexcept -> Index { return kv_v.num_basis(); }
    auto num_dofs() const noexcept -> Index { return num_u() * num_v(); }
    auto global_index(Index i, Index j) const noexcept -> Index { return i + j * num_u(); }
};

auto validate(const Patch& patch) -> void;

// Bounding-box diagonal of the control net; the surface lies inside the
// convex hull, so this bounds the physical diameter.
auto patch_diameter(const Patch& patch) -> Real;

// Rational tensor-product basis local to the span containing (xi, eta).
// Local index l = iu + jv * (p+1); global index via first_u + iu, first_v + jv.
struct PatchBasis {
    Index span_u = 0;
    Index span_v = 0;
    Index first_u = 0;
    Index first_v = 0;
    VectorX N;    // values, size (p+1)(q+1)
    MatrixX dN;   // parametric gradients, (p+1)(q+1) x 2 (filled when requested)
};

auto patch_basis(const Patch& patch, Real xi, Real eta, bool with_derivatives) -> PatchBasis;

// Re-use an already computed basis pack (hot paths evaluate basis once and
// need both the point and the Jacobian).
auto eval_from_basis(const Patch& patch, const PatchBasis& basis) -> Vector2;
auto jacobian_from_basis(const Patch& patch, const PatchBasis& basis) -> Matrix2;

auto surface_eval(const Patch& patch, Real xi, Real eta) -> Vector2;

// Columns are dS/dxi and dS/deta.  Throws geometry_error if det <= 0; the
// disk construction degenerates exactly at the four parametric corners, which
// no quadrature point touches.
auto surface_jacobian(const Patch& patch, Real xi, Real eta) -> Matrix2;

struct InversionResult {
    Vector2 param{0.0, 0.0};  // clamped into the parametric box
    Real residual = 0.0;      // |S(param) - x|
    bool hit_box = false;     // final iterate sits on the parametric box boundary
};

// Damped Newton point inversion seeded from an 8x8 parametric grid scan (or
// the caller's seed).  Always returns the best clamped candidate.
auto try_point_invert(const Patch& patch, const Vector2& x,
                      std::optional<Vector2> seed = std::nullopt) -> InversionResult;

// Spec-facing inversion: requires |S(param) - x| <= 1e-10 * diameter.
auto point_invert(const Patch& patch, const Vector2& x) -> Vector2;

// Directional k-refinement of the geometry (exact: homogeneous coordinates).
auto patch_k_refine(const Patch& patch, int degree_u, int degree_v, int n_u, int n_v) -> Patch;

// Preset geometries.
auto make_rectangle(Real x0, Real x1, Real y0, Real y1) -> Patch;
auto make_disk(const Vector2& center, Real radius) -> Patch;
auto make_annulus(const Vector2& center, Real r_inner, Real r_outer) -> Patch;

}  // namespace iga
