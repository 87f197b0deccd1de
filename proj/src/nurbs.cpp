#include <iga/nurbs.hpp>

#include <algorithm>
#include <cmath>
#include <vector>

namespace iga {

auto validate(const WeightedBasis1D& basis) -> void {
    if (basis.weights.size() != basis.kv.num_basis())
        throw argument_error("weighted basis: weight count must match basis count");
    if ((basis.weights.array() <= 0.0).any())
        throw argument_error("weighted basis: weights must be strictly positive");
}

auto nurbs_basis(const WeightedBasis1D& basis, Real xi, int deriv_order) -> BasisSlice {
    validate(basis);
    const int p = basis.kv.degree();
    const auto b = bspline_basis(basis.kv, xi, deriv_order);
    const Index first = b.first_index();

    // A^(k)_j = B_j^(k) w_j and W^(k) = sum_j A^(k)_j over the local support.
    MatrixX A = b.ders;
    VectorX W = VectorX::Zero(deriv_order + 1);
    for (int j = 0; j <= p; ++j) {
        const Real w = basis.weights[first + j];
        for (int k = 0; k <= deriv_order; ++k) {
            A(k, j) *= w;
            W[k] += A(k, j);
        }
    }

    BasisSlice out;
    out.span = b.span;
    out.ders = MatrixX::Zero(deriv_order + 1, p + 1);
    std::vector<Real> binom(static_cast<std::size_t>(deriv_order) + 1);
    for (int k = 0; k <= deriv_order; ++k) {
        binom[0] = 1.0;
        for (int j = 1; j <= k; ++j)
            binom[static_cast<std::size_t>(j)] =
                binom[static_cast<std::size_t>(j - 1)] * (k - j + 1) / j;
        for (int col = 0; col <= p; ++col) {
            Real v = A(k, col);
            for (int j = 1; j <= k; ++j)
                v -= binom[static_cast<std::size_t>(j)] * W[j] * out.ders(k - j, col);
            out.ders(k, col) = v / W[0];
        }
    }
    return out;
}

auto validate(const Curve1D& curve) -> void {
    if (curve.weights.size() != curve.kv.num_basis())
        throw argument_error("curve: weight count must match basis count");
    if (curve.points.rows() != curve.kv.num_basis())
        throw argument_error("curve: control point count must match basis count");
    if ((curve.weights.array() <= 0.0).any())
        throw argument_error("curve: weights must be strictly positive");
}

auto curve_eval(const Curve1D& curve, Real xi) -> VectorX {
    const auto b = nurbs_basis({curve.kv, curve.weights}, xi, 0);
    const Index first = b.first_index();
    VectorX x = VectorX::Zero(curve.points.cols());
    for (int j = 0; j <= curve.kv.degree(); ++j)
        x += b.ders(0, j) * curve.points.row(first + j).transpose();
    return x;
}

auto to_homogeneous(const VectorX& weights, const MatrixX& points) -> MatrixX {
    MatrixX H(points.rows(), points.cols() + 1);
    H.leftCols(points.cols()) = points.array().colwise() * weights.array();
    H.col(points.cols()) = weights;
    return H;
}

auto from_homogeneous(const MatrixX& H) -> std::pair<VectorX, MatrixX> {
    const Index d = H.cols() - 1;
    VectorX weights = H.col(d);
    MatrixX points = H.leftCols(d).array().colwise() / weights.array();
    return {std::move(weights), std::move(points)};
}

auto insert_knot_homogeneous(const KnotVector& kv, const MatrixX& H, Real xi)
    -> std::pair<KnotVector, MatrixX> {
    if (!(xi > kv.param_begin() && xi < kv.param_end()))
        throw argument_error("knot_insert: new knot must lie strictly inside the domain");
    const int p = kv.degree();
    const Index k = find_span(kv, xi);
    const auto& U = kv.data();
    int mult = 0;
    for (Real u : U)
        if (u == xi) ++mult;
    if (mult + 1 > p)
        throw argument_error("knot_insert: resulting multiplicity would exceed degree");

    const Index n = H.rows();
    MatrixX Q(n + 1, H.cols());
    for (Index i = 0; i <= k - p; ++i) Q.row(i) = H.row(i);
    for (Index i = k - p + 1; i <= k - mult; ++i) {
        const Real denom = U[static_cast<std::size_t>(i + p)] - U[static_cast<std::size_t>(i)];
        const Real alpha = (xi - U[static_cast<std::size_t>(i)]) / denom;
        Q.row(i) = alpha * H.row(i) + (1.0 - alpha) * H.row(i - 1);
    }
    for (Index i = k - mult + 1; i <= n; ++i) Q.row(i) = H.row(i - 1);

    std::vector<Real> knots = U;
    knots.insert(knots.begin() + (k + 1), xi);
    return {KnotVector(p, std::move(knots)), std::move(Q)};
}

namespace {

// Remove one copy of the knot at (last) index r with current multiplicity s.
// The curve must lie exactly in the smaller space; the blend residual is
// checked against `tol` and reported through numeric_error on failure.
auto remove_knot_once(const KnotVector& kv, const MatrixX& H, Index r, int s, Real tol)
    -> std::pair<KnotVector, MatrixX> {
    const int q = kv.degree();
    const auto& U = kv.data();
    const Real u = U[static_cast<std::size_t>(r)];

    const Index first = r - q;
    const Index last = r - s;
    const Index off = first - 1;
    MatrixX temp(last + 2 - off, H.cols());
    temp.row(0) = H.row(off);
    temp.row(last + 1 - off) = H.row(last + 1);

    Index i = first, j = last;
    Index ii = 1, jj = last - off;
    while (j - i > 0) {
        const Real alfi = (u - U[static_cast<std::size_t>(i)]) /
                          (U[static_cast<std::size_t>(i + q + 1)] - U[static_cast<std::size_t>(i)]);
        const Real alfj = (u - U[static_cast<std::size_t>(j)]) /
                          (U[static_cast<std::size_t>(j + q + 1)] - U[static_cast<std::size_t>(j)]);
        temp.row(ii) = (H.row(i) - (1.0 - alfi) * temp.row(ii - 1)) / alfi;
        temp.row(jj) = (H.row(j) - alfj * temp.row(jj + 1)) / (1.0 - alfj);
        ++i;
        ++ii;
        --j;
        --jj;
    }

    Real residual;
    if (j - i < 0) {
        residual = (temp.row(ii - 1) - temp.row(jj + 1)).norm();
    } else {
        const Real alfi = (u - U[static_cast<std::size_t>(i)]) /
                          (U[static_cast<std::size_t>(i + q + 1)] - U[static_cast<std::size_t>(i)]);
        residual =
            (H.row(i) - (alfi * temp.row(ii + 1) + (1.0 - alfi) * temp.row(ii - 1))).norm();
    }
    if (residual > tol)
        throw numeric_error("knot removal: curve does not lie in the reduced space");

    MatrixX Q = H;
    i = first;
    j = last;
    while (j - i > 0) {
        Q.row(i) = temp.row(i - off);
        Q.row(j) = temp.row(j - off);
        ++i;
        --j;
    }
    const Index fout = (2 * r - s - q) / 2;

    MatrixX R(H.rows() - 1, H.cols());
    R.topRows(fout) = Q.topRows(fout);
    R.bottomRows(R.rows() - fout) = Q.bottomRows(R.rows() - fout);

    std::vector<Real> knots = U;
    knots.erase(knots.begin() + r);
    return {KnotVector(q, std::move(knots)), std::move(R)};
}

}  // namespace

auto elevate_homogeneous(const KnotVector& kv, const MatrixX& H)
    -> std::pair<KnotVector, MatrixX> {
    const int p = kv.degree();
    const auto distinct = kv.distinct_knots();

    // Bezier decomposition: raise every interior knot to multiplicity p.
    KnotVector dkv = kv;
    MatrixX dH = H;
    for (std::size_t d = 1; d + 1 < distinct.size(); ++d)
        for (int rep = distinct[d].second; rep < p; ++rep)
            std::tie(dkv, dH) = insert_knot_homogeneous(dkv, dH, distinct[d].first);

    // Per-segment Bezier elevation; adjacent segments share their end point.
    const Index nseg = static_cast<Index>(distinct.size()) - 1;
    const int q = p + 1;
    MatrixX E(nseg * q + 1, H.cols());
    for (Index seg = 0; seg < nseg; ++seg) {
        const Index src = seg * p;   // first control point of this Bezier segment
        const Index dst = seg * q;
        E.row(dst) = dH.row(src);
        for (int k = 1; k <= p; ++k) {
            const Real a = static_cast<Real>(k) / q;
            E.row(dst + k) = a * dH.row(src + k - 1) + (1.0 - a) * dH.row(src + k);
        }
        E.row(dst + q) = dH.row(src + p);
    }
    std::vector<Real> eknots;
    for (const auto& [value, mult] : distinct) {
        const int m = (value == distinct.front().first || value == distinct.back().first)
                          ? q + 1
                          : q;
        for (int rep = 0; rep < m; ++rep) eknots.push_back(value);
    }
    KnotVector ekv(q, std::move(eknots));

    // Restore the original continuity: each interior knot ends at multiplicity
    // (original multiplicity + 1).
    const Real tol = 1e-9 * (H.cwiseAbs().maxCoeff() + 1.0);
    for (std::size_t d = 1; d + 1 < distinct.size(); ++d) {
        for (int rep = 0; rep < p - distinct[d].second; ++rep) {
            const auto& knots = ekv.data();
            const Real value = distinct[d].first;
            const Index r = static_cast<Index>(
                std::distance(knots.begin(),
                              std::upper_bound(knots.begin(), knots.end(), value)) - 1);
            int s = 0;
            for (Real un : knots)
                if (un == value) ++s;
            std::tie(ekv, E) = remove_knot_once(ekv, E, r, s, tol);
        }
    }
    return {std::move(ekv), std::move(E)};
}

auto knot_insert(const Curve1D& curve, Real xi) -> Curve1D {
    validate(curve);
    auto [kv, H] = insert_knot_homogeneous(curve.kv, to_homogeneous(curve.weights, curve.points), xi);
    auto [w, pts] = from_homogeneous(H);
    return {std::move(kv), std::move(w), std::move(pts)};
}

auto degree_elevate(const Curve1D& curve) -> Curve1D {
    validate(curve);
    auto [kv, H] = elevate_homogeneous(curve.kv, to_homogeneous(curve.weights, curve.points));
    auto [w, pts] = from_homogeneous(H);
    return {std::move(kv), std::move(w), std::move(pts)};
}

auto k_refine(const Curve1D& curve, int target_degree, int n_subdivisions) -> Curve1D {
    validate(curve);
    if (target_degree < curve.kv.degree())
        throw argument_error("k_refine: target degree below current degree");
    if (n_subdivisions < 1) throw argument_error("k_refine: need at least one subdivision");

    Curve1D out = curve;
    while (out.kv.degree() < target_degree) out = degree_elevate(out);

    const Real a = out.kv.param_begin();
    const Real b = out.kv.param_end();
    for (int i = 1; i < n_subdivisions; ++i) {
        const Real xi = a + (b - a) * static_cast<Real>(i) / static_cast<Real>(n_subdivisions);
        const auto& knots = out.kv.data();
        const bool present = std::any_of(knots.begin(), knots.end(), [&](Real u) {
            return std::abs(u - xi) <= 1e-12 * (std::abs(b - a));
        });
        if (!present) out = knot_insert(out, xi);
    }
    return out;
}

}  // namespace iga
