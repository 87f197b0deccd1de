#pragma once

#include <iga/types.hpp>

#include <vector>

namespace iga {

// Gauss-Legendre rule on [-1, 1]: nodes ascending, weights positive.
struct Rule1D {
    std::vector<Real> nodes;
    std::vector<Real> weights;

    auto size() const noexcept -> int { return static_cast<int>(nodes.size()); }
};

// Tensor-product rule on the parent square [-1,1]^2.
struct QuadratureRule {
    Rule1D u;
    Rule1D v;

    auto size() const noexcept -> int { return u.size() * v.size(); }
    auto node(int g) const -> Vector2 {
        return {u.nodes[static_cast<std::size_t>(g % u.size())],
                v.nodes[static_cast<std::size_t>(g / u.size())]};
    }
    auto weight(int g) const -> Real {
        return u.weights[static_cast<std::size_t>(g % u.size())] *
               v.weights[static_cast<std::size_t>(g / u.size())];
    }
};

// n-point Gauss-Legendre nodes/weights on [-1,1], exact for degree 2n-1.
// Nodes are Newton-refined roots of the Legendre polynomial P_n.
auto gauss_legendre_1d(int n) -> Rule1D;

auto tensor_rule(int n_u, int n_v) -> QuadratureRule;

}  // namespace iga
