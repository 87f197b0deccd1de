#include <iga/bspline.hpp>

#include <vector>

namespace iga {

// Piegl & Tiller style non-vanishing basis evaluation with derivatives.
auto bspline_basis(const KnotVector& kv, Real xi, int deriv_order) -> BasisSlice {
    const int p = kv.degree();
    if (deriv_order < 0 || deriv_order > p)
        throw argument_error("bspline_basis: derivative order must be in [0, degree]");

    const Index span = find_span(kv, xi);
    const auto& U = kv.data();
    const auto at = [&](Index i) { return U[static_cast<std::size_t>(i)]; };

    // ndu(j, r): triangular table of basis values and knot differences.
    MatrixX ndu(p + 1, p + 1);
    std::vector<Real> left(static_cast<std::size_t>(p) + 1), right(static_cast<std::size_t>(p) + 1);
    ndu(0, 0) = 1.0;
    for (int j = 1; j <= p; ++j) {
        left[static_cast<std::size_t>(j)] = xi - at(span + 1 - j);
        right[static_cast<std::size_t>(j)] = at(span + j) - xi;
        Real saved = 0.0;
        for (int r = 0; r < j; ++r) {
            ndu(j, r) = right[static_cast<std::size_t>(r + 1)] + left[static_cast<std::size_t>(j - r)];
            const Real temp = ndu(r, j - 1) / ndu(j, r);
            ndu(r, j) = saved + right[static_cast<std::size_t>(r + 1)] * temp;
            saved = left[static_cast<std::size_t>(j - r)] * temp;
        }
        ndu(j, j) = saved;
    }

    BasisSlice out;
    out.span = span;
    out.ders = MatrixX::Zero(deriv_order + 1, p + 1);
    for (int j = 0; j <= p; ++j) out.ders(0, j) = ndu(j, p);

    if (deriv_order == 0) return out;

    // Derivative accumulation over the two working rows a(0,.), a(1,.).
    MatrixX a = MatrixX::Zero(2, p + 1);
    for (int r = 0; r <= p; ++r) {
        int s1 = 0, s2 = 1;
        a(0, 0) = 1.0;
        for (int k = 1; k <= deriv_order; ++k) {
            Real d = 0.0;
            const int rk = r - k;
            const int pk = p - k;
            if (r >= k) {
                a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
                d = a(s2, 0) * ndu(rk, pk);
            }
            const int j1 = (rk >= -1) ? 1 : -rk;
            const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
            for (int j = j1; j <= j2; ++j) {
                a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
                d += a(s2, j) * ndu(rk + j, pk);
            }
            if (r <= pk) {
                a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
                d += a(s2, k) * ndu(r, pk);
            }
            out.ders(k, r) = d;
            std::swap(s1, s2);
        }
    }
    // Multiply by p! / (p-k)!.
    Real r = p;
    for (int k = 1; k <= deriv_order; ++k) {
        for (int j = 0; j <= p; ++j) out.ders(k, j) *= r;
        r *= (p - k);
    }
    return out;
}

auto bspline_basis_all(const KnotVector& kv, Real xi) -> VectorX {
    const auto slice = bspline_basis(kv, xi, 0);
    VectorX values = VectorX::Zero(kv.num_basis());
    const Index first = slice.first_index();
    for (int j = 0; j <= kv.degree(); ++j) values[first + j] = slice.ders(0, j);
    return values;
}

}  // namespace iga
