#include <iga/knots.hpp>

#include <algorithm>
#include <cmath>

namespace iga {

KnotVector::KnotVector(int degree, std::vector<Real> knots)
    : degree_(degree), knots_(std::move(knots)) {
    if (degree_ < 1) throw argument_error("knot vector: degree must be >= 1");
    const auto n = static_cast<Index>(knots_.size());
    if (n < 2 * (degree_ + 1)) throw argument_error("knot vector: too few knots for degree");
    if (!std::is_sorted(knots_.begin(), knots_.end()))
        throw argument_error("knot vector: knots must be non-decreasing");

    const std::size_t p = static_cast<std::size_t>(degree_);
    const Real a = knots_.front();
    const Real b = knots_.back();
    if (!(a < b)) throw argument_error("knot vector: zero-length parametric domain");
    // Clamped ends: first/last value repeated exactly p+1 times.
    if (knots_[p] != a || knots_[p + 1] == a)
        throw argument_error("knot vector: start knot must have multiplicity exactly degree+1");
    const std::size_t m = knots_.size() - 1;
    if (knots_[m - p] != b || knots_[m - p - 1] == b)
        throw argument_error("knot vector: end knot must have multiplicity exactly degree+1");
    // Interior multiplicities <= p.
    std::size_t i = p + 1;
    while (i < m - p) {
        std::size_t j = i;
        while (j < m - p && knots_[j] == knots_[i]) ++j;
        if (static_cast<int>(j - i) > degree_)
            throw argument_error("knot vector: interior knot multiplicity exceeds degree");
        i = j;
    }
}

auto KnotVector::nonempty_spans() const -> std::vector<Index> {
    std::vector<Index> spans;
    for (Index i = degree_; i < num_basis(); ++i)
        if (knots_[static_cast<std::size_t>(i + 1)] > knots_[static_cast<std::size_t>(i)])
            spans.push_back(i);
    return spans;
}

auto KnotVector::distinct_knots() const -> std::vector<std::pair<Real, int>> {
    std::vector<std::pair<Real, int>> out;
    for (Real u : knots_) {
        if (out.empty() || u != out.back().first)
            out.emplace_back(u, 1);
        else
            ++out.back().second;
    }
    return out;
}

auto find_span(const KnotVector& kv, Real xi) -> Index {
    const Real a = kv.param_begin();
    const Real b = kv.param_end();
    if (!(xi >= a && xi <= b)) throw domain_error("find_span: parameter outside knot range");
    const Index last = kv.num_basis() - 1;
    if (xi >= b) return last;
    const auto& knots = kv.data();
    auto it = std::upper_bound(knots.begin(), knots.end(), xi);
    Index span = static_cast<Index>(it - knots.begin()) - 1;
    return std::clamp(span, static_cast<Index>(kv.degree()), last);
}

auto uniform_open_knots(int degree, int elements, Real a, Real b) -> KnotVector {
    if (elements < 1) throw argument_error("uniform_open_knots: need at least one element");
    std::vector<Real> knots;
    knots.reserve(static_cast<std::size_t>(2 * (degree + 1) + elements - 1));
    for (int i = 0; i <= degree; ++i) knots.push_back(a);
    for (int i = 1; i < elements; ++i)
        knots.push_back(a + (b - a) * static_cast<Real>(i) / static_cast<Real>(elements));
    for (int i = 0; i <= degree; ++i) knots.push_back(b);
    return KnotVector(degree, std::move(knots));
}

}  // namespace iga
