#pragma once

#include <iga/bspline.hpp>
#include <iga/knots.hpp>
#include <iga/types.hpp>

#include <utility>

namespace iga {

// Univariate rational basis: open knot vector plus strictly positive weights.
struct WeightedBasis1D {
    KnotVector kv;
    VectorX weights;
};

auto validate(const WeightedBasis1D& basis) -> void;

// Rational basis functions N_i(xi) w_i / W(xi) and derivatives up to
// deriv_order for the p+1 functions supported on the span containing xi.
// Derivatives follow the quotient rule expansion
//   R^(k) = (A^(k) - sum_{j=1}^{k} C(k,j) W^(j) R^(k-j)) / W
// with A = B_i w_i.
auto nurbs_basis(const WeightedBasis1D& basis, Real xi, int deriv_order = 0) -> BasisSlice;

// NURBS curve in R^dim: control points row-wise, one weight per point.
struct Curve1D {
    KnotVector kv;
    VectorX weights;  // num_basis
    MatrixX points;   // num_basis x dim
};

auto validate(const Curve1D& curve) -> void;

// Point on the curve at parameter xi.
auto curve_eval(const Curve1D& curve, Real xi) -> VectorX;

// Homogeneous-coordinate refinement kernels.  H holds rows (w*x..., w); the
// geometric curve is untouched by construction.
auto insert_knot_homogeneous(const KnotVector& kv, const MatrixX& H, Real xi)
    -> std::pair<KnotVector, MatrixX>;
auto elevate_homogeneous(const KnotVector& kv, const MatrixX& H)
    -> std::pair<KnotVector, MatrixX>;

// Boehm single knot insertion; resulting multiplicity must stay <= degree.
auto knot_insert(const Curve1D& curve, Real xi) -> Curve1D;

// Degree elevation by one (every knot multiplicity grows by one).
auto degree_elevate(const Curve1D& curve) -> Curve1D;

// k-refinement: elevate to target_degree first, then insert the uniform
// subdivision knots.  Elevation before insertion keeps interior continuity
// C^(p-1); the reverse order would lock in the lower continuity.
auto k_refine(const Curve1D& curve, int target_degree, int n_subdivisions) -> Curve1D;

auto to_homogeneous(const VectorX& weights, const MatrixX& points) -> MatrixX;
auto from_homogeneous(const MatrixX& H) -> std::pair<VectorX, MatrixX>;

}  // namespace iga
