#include <iga/quadrature.hpp>

#include <cmath>
#include <numbers>

namespace iga {

namespace {

// P_n(x) and P_n'(x) by the three-term recurrence.
auto legendre(int n, Real x) -> std::pair<Real, Real> {
    Real p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
        const Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    const Real dp = n * (x * p1 - p0) / (x * x - 1.0);
    return {p1, dp};
}

}  // namespace

auto gauss_legendre_1d(int n) -> Rule1D {
    if (n < 1 || n > 64) throw argument_error("gauss_legendre_1d: point count must be in [1, 64]");
    Rule1D rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    if (n == 1) {
        rule.nodes[0] = 0.0;
        rule.weights[0] = 2.0;
        return rule;
    }
    for (int i = 0; i < n; ++i) {
        // Chebyshev-like initial guess, then Newton to machine accuracy.
        Real x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        for (int it = 0; it < 100; ++it) {
            const auto [p, dp] = legendre(n, x);
            const Real dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        const auto [p, dp] = legendre(n, x);
        (void)p;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    // Symmetrize: nodes come in +/- pairs; enforce exact zero for odd n.
    for (int i = 0; i < n / 2; ++i) {
        const std::size_t a = static_cast<std::size_t>(i);
        const std::size_t b = static_cast<std::size_t>(n - 1 - i);
        const Real node = 0.5 * (rule.nodes[b] - rule.nodes[a]);
        rule.nodes[a] = -node;
        rule.nodes[b] = node;
        const Real w = 0.5 * (rule.weights[a] + rule.weights[b]);
        rule.weights[a] = rule.weights[b] = w;
    }
    if (n % 2 == 1) rule.nodes[static_cast<std::size_t>(n / 2)] = 0.0;
    return rule;
}

auto tensor_rule(int n_u, int n_v) -> QuadratureRule {
    return {gauss_legendre_1d(n_u), gauss_legendre_1d(n_v)};
}

}  // namespace iga
