#pragma once

#include <iga/knots.hpp>
#include <iga/types.hpp>

namespace iga {

// Values (and optionally derivatives) of the p+1 B-spline basis functions that
// are non-zero on the span containing xi.  Row k of `ders` holds the k-th
// derivative; row 0 holds the values.  Column j corresponds to global basis
// index span - p + j.
struct BasisSlice {
    Index span = 0;
    MatrixX ders;  // (deriv_order+1) x (p+1)

    auto first_index() const noexcept -> Index { return span - ders.cols() + 1; }
    auto values() const { return ders.row(0); }
};

// Cox-de Boor evaluation of the non-vanishing B-spline basis functions and
// their derivatives up to deriv_order (0 <= deriv_order <= p).
auto bspline_basis(const KnotVector& kv, Real xi, int deriv_order = 0) -> BasisSlice;

// Values of every basis function at xi (zero outside the local support).
auto bspline_basis_all(const KnotVector& kv, Real xi) -> VectorX;

}  // namespace iga
