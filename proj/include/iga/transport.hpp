#pragma once

#include <iga/mesh.hpp>
#include <iga/types.hpp>

#include <atomic>
#include <functional>
#include <vector>

namespace iga {

// Velocity field a(x, t) on physical coordinates.
using VelocityFn = std::function<Vector2(const Vector2&, Real)>;

// Backward characteristic trace: the departure point at t_arrival - dt of a
// particle arriving at x at t_arrival, by the three-stage third-order
// Runge-Kutta scheme (stages evaluated at t_arrival, t_arrival - dt, and
// t_arrival - dt/2, matching the stage states).
auto trace_departure_rk3(const Vector2& x, const VelocityFn& a, Real t_arrival, Real dt)
    -> Vector2;

// Departure data for every cached quadrature point (flat index k*nq + g):
// the local basis pack at the inverted parametric location, ready for
// repeated field evaluation. Points whose trace left the patch are clamped
// to the parametric boundary and their stored weights carry a first-order
// Taylor extension (value + offset . gradient), so rows of N for clamped
// points are extension functionals rather than plain basis values.
struct DepartureData {
    std::vector<Index> first_u;  // support origin, u direction
    std::vector<Index> first_v;  // support origin, v direction
    MatrixX N;                   // evaluation weights, num_points x (p+1)(q+1)
    Index clamped = 0;           // points clamped to the parametric boundary
    Real max_residual = 0.0;     // worst accepted inversion residual
};

// Trace all quadrature points backward by dt from t_arrival and locate them.
auto compute_departure_data(const Mesh& mesh, const BasisCache& cache, const VelocityFn& a,
                            Real t_arrival, Real dt) -> DepartureData;

// Identity departure data (departure = arrival); the zero-velocity fast path.
auto identity_departure_data(const Mesh& mesh, const BasisCache& cache) -> DepartureData;

// Field values at every departure point, flat k*nq + g.
auto evaluate_departure(const Mesh& mesh, const DepartureData& dep, const VectorX& coeffs)
    -> VectorX;

// Field value at one physical point: inversion, host-span search, and the
// local (p+1)(q+1)-term sum. `touched` (when given) accumulates the number of
// coefficients read, asserting the locality contract.
auto locate_and_evaluate(const Mesh& mesh, const VectorX& coeffs, const Vector2& x,
                         std::atomic<long>* touched = nullptr) -> Real;

// Field value at the parametric point nearest to x. Points outside the patch
// image are clamped to the parametric box instead of rejected, giving the
// value at the closest boundary point. This is the right semantics for
// velocity fields sampled at intermediate characteristic-tracing stages,
// which may momentarily step outside the domain even when the final
// departure point lands inside.
auto evaluate_field_clamped(const Mesh& mesh, const VectorX& coeffs, const Vector2& x)
    -> Real;

// Semi-Lagrangian projection right-hand side:
// H_m = sum_k sum_g w_{k,g} u(Y(x_{k,g})) N_m(x_{k,g}).
auto sl_rhs(const BasisCache& cache, const Mesh& mesh, const DepartureData& dep,
            const VectorX& coeffs) -> VectorX;

}  // namespace iga
