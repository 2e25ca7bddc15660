#pragma once

#include "axw/mesh.hpp"

#include <span>
#include <vector>

namespace axw {

/// A point of the carrier: barycentric weights over the vertices of `simplex`
/// (in the simplex's sorted vertex order).
struct CarrierPoint {
    SimplexId simplex = 0;
    std::vector<double> weights;

    static CarrierPoint vertex(VertexId v) { return {v, {1.0}}; }
    static CarrierPoint barycenter(const SimplicialComplex& complex, SimplexId s);
};

inline constexpr double kBarycentricTolerance = 1e-12;

/// Throws DomainError unless the weights are nonnegative, sum to one within
/// kBarycentricTolerance and match the simplex's vertex count.
void validate_point(const SimplicialComplex& complex, const CarrierPoint& point);

/// Componentwise maximum of the vertex values of s.
std::vector<double> mu(const MeshWithFunction& mesh, SimplexId s);

/// Per-simplex data of the axis-wise construction.
struct SimplexInterpData {
    std::span<const double> mu; ///< componentwise vertex maximum
    std::span<const double> w;  ///< barycentric weights of the distinguished point
    SimplexId tau;              ///< minimal face with the same mu (the simplex itself in the barycenter case)
};

/// Axis-wise linear interpolation of a vertex function.
///
/// Built bottom-up over the canonical simplex order. For each simplex the
/// face tau is the lowest-dimensional face attaining mu, ties broken by the
/// lexicographically smallest vertex tuple (the smallest canonical id). The
/// distinguished point is inherited from tau, or is the barycenter when tau is
/// the simplex itself. Away from that point the interpolant is linear along
/// the ray from it to the boundary.
class AxiswiseInterpolant {
public:
    explicit AxiswiseInterpolant(MeshWithFunction mesh);

    const MeshWithFunction& mesh() const { return mesh_; }
    SimplexInterpData data(SimplexId s) const;

    std::vector<double> evaluate(const CarrierPoint& point) const;

    /// Unchecked hot path; `weights` must be a valid point of s and `out` has
    /// one slot per component.
    void evaluate(SimplexId s, std::span<const double> weights, std::span<double> out) const;

    static constexpr int kMaxDimension = 15;

private:
    void evaluate_reduced(SimplexId s, double* weights, double* out) const;

    MeshWithFunction mesh_;
    std::size_t k_;
    std::vector<double> mu_;     // size() * k
    std::vector<double> w_;      // aligned with vertex offsets of the complex
    std::vector<std::size_t> w_offset_;
    std::vector<SimplexId> tau_;
};

inline AxiswiseInterpolant build_interp_data(const MeshWithFunction& mesh)
{
    return AxiswiseInterpolant(mesh);
}

inline std::vector<double> evaluate_axiswise(const AxiswiseInterpolant& interp, const CarrierPoint& point)
{
    return interp.evaluate(point);
}

/// Barycentric average of vertex values, clamped into the componentwise range
/// of the simplex's vertex values.
std::vector<double> evaluate_linear(const MeshWithFunction& mesh, const CarrierPoint& point);

} // namespace axw
