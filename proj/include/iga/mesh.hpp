#pragma once

#include <iga/patch.hpp>
#include <iga/quadrature.hpp>
#include <iga/types.hpp>

#include <vector>

namespace iga {

// One non-empty knot span product cell.
struct Element {
    Index span_u = 0;
    Index span_v = 0;
    Real u0 = 0.0, u1 = 0.0;
    Real v0 = 0.0, v1 = 0.0;
};

// Affine parent map: [-1,1]^2 onto the element's parametric rectangle.
auto parent_to_param(const Element& e, const Vector2& parent) -> Vector2;

// Tensor mesh over a patch: element list plus degree-of-freedom bookkeeping.
class Mesh {
  public:
    explicit Mesh(Patch patch);

    auto patch() const noexcept -> const Patch& { return patch_; }
    auto num_elements_u() const noexcept -> Index { return static_cast<Index>(spans_u_.size()); }
    auto num_elements_v() const noexcept -> Index { return static_cast<Index>(spans_v_.size()); }
    auto num_elements() const noexcept -> Index { return num_elements_u() * num_elements_v(); }
    auto num_dofs() const noexcept -> Index { return patch_.num_dofs(); }
    auto dofs_per_element() const noexcept -> Index {
        return static_cast<Index>(patch_.kv_u.degree() + 1) * (patch_.kv_v.degree() + 1);
    }

    auto element(Index k) const -> Element;

    // Global indices of the basis functions supported on element k, ordered
    // u-fastest to match PatchBasis local ordering.
    auto element_dofs(Index k) const -> std::vector<Index>;

    // Indices of basis functions that do not vanish on a physical boundary edge.
    auto boundary_dofs() const -> std::vector<Index>;

    // Longest physical element edge, estimated from element corner images.
    auto max_element_size() const -> Real;

  private:
    Patch patch_;
    std::vector<Index> spans_u_;
    std::vector<Index> spans_v_;
};

// Everything assembly and transport need at the quadrature points of one
// element: rational basis values, physical gradients, scaled weights, and the
// physical/parametric images of the Gauss nodes.
struct ElementData {
    MatrixX N;      // nq x n_loc values
    MatrixX dNdx;   // nq x n_loc physical x-derivatives
    MatrixX dNdy;   // nq x n_loc physical y-derivatives
    VectorX wj;     // nq quadrature weight * |J| (parent map included)
    MatrixX xq;     // nq x 2 physical points
    MatrixX pq;     // nq x 2 parametric points
    std::vector<Index> dofs;
};

struct BasisCache {
    QuadratureRule rule;
    std::vector<ElementData> elements;

    auto num_quadrature_points() const noexcept -> int { return rule.size(); }
};

auto build_basis_cache(const Mesh& mesh, const QuadratureRule& rule) -> BasisCache;

// Quadrature data along one physical boundary edge element.
struct EdgeQP {
    Index element = 0;    // owning mesh element (for its dof list)
    VectorX N;            // basis values at the edge point
    Real wt = 0.0;        // 1D weight * |dS/dparam| (arc length factor)
    Vector2 x{0.0, 0.0};  // physical point
    Vector2 normal{0.0, 0.0};  // outward unit normal
};

// Edge quadrature for all physical boundary edges (n1d points per edge element).
auto build_edge_cache(const Mesh& mesh, int n1d) -> std::vector<EdgeQP>;

}  // namespace iga
