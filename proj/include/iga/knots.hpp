#pragma once

#include <iga/types.hpp>

#include <vector>

namespace iga {

// Open (clamped) knot vector of degree p: first and last knot each repeated
// exactly p+1 times, interior knots non-decreasing with multiplicity <= p.
// The number of basis functions it carries is size() - p - 1.
class KnotVector {
  public:
    KnotVector() = default;
    KnotVector(int degree, std::vector<Real> knots);

    auto degree() const noexcept -> int { return degree_; }
    auto size() const noexcept -> Index { return static_cast<Index>(knots_.size()); }
    auto num_basis() const noexcept -> Index { return size() - degree_ - 1; }
    auto operator[](Index i) const -> Real { return knots_[static_cast<std::size_t>(i)]; }
    auto data() const noexcept -> const std::vector<Real>& { return knots_; }

    auto param_begin() const -> Real { return knots_[static_cast<std::size_t>(degree_)]; }
    auto param_end() const -> Real { return knots_[static_cast<std::size_t>(num_basis())]; }

    // Indices i of non-empty spans [knots[i], knots[i+1]).
    auto nonempty_spans() const -> std::vector<Index>;

    // Distinct knot values with multiplicities, in increasing order.
    auto distinct_knots() const -> std::vector<std::pair<Real, int>>;

  private:
    int degree_ = 0;
    std::vector<Real> knots_;
};

// Index of the knot span containing xi: largest i with knots[i] <= xi < knots[i+1],
// except at the right end of the parametric domain where the last non-empty span
// is returned.  xi outside [param_begin, param_end] raises domain_error.
auto find_span(const KnotVector& kv, Real xi) -> Index;

// Uniform open knot vector on [a, b] with the given number of elements.
auto uniform_open_knots(int degree, int elements, Real a = 0.0, Real b = 1.0) -> KnotVector;

}  // namespace iga
