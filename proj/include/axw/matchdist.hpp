#pragma once

#include "axw/filtration.hpp"
#include "axw/mesh.hpp"
#include "axw/persistence.hpp"

#include <optional>
#include <vector>

namespace axw {

/// Grid error constant: rescaled distances at admissible pairs within delta
/// of each other differ by at most kGridLipschitz * delta.
inline constexpr double kGridLipschitz = 18.0;

/// Matching cost between two finite points: sup-norm distance, capped by
/// retiring both points to the diagonal.
double point_cost(const PersistencePair& p, const PersistencePair& q);
/// Cost of retiring a finite point to the diagonal, (death - birth) / 2.
double diagonal_cost(const PersistencePair& p);

/// Bottleneck matching distance between diagrams of one degree. Essential
/// classes only match essential classes; +inf if their counts differ.
/// Throws DomainError on a degree mismatch.
double matching_distance_1d(const PersistenceDiagram& a, const PersistenceDiagram& b);

struct RescaledDistance {
    std::vector<int> degrees;
    std::vector<double> per_degree_1d;       ///< unscaled 1D matching distance per degree
    std::vector<double> per_degree_rescaled; ///< min_i l_i times the above
    double combined = 0.0;                   ///< max over degrees of the rescaled values
};

/// Rescaled one-dimensional matching distance along the line of `pair`.
RescaledDistance rescaled_distance(const MeshWithFunction& a, const MeshWithFunction& b,
                                   const AdmissiblePair& pair, const std::vector<int>& degrees,
                                   const FieldPrime& field = FieldPrime());

/// Lattice of planar admissible pairs: (a_i, b_j) with a_i = (2i+1)/2^(N+1),
/// i < 2^N, and b_j = 1 - (2j+1)/2^(N+1), j < 2^(N+1), followed by the two
/// pairs (1/2, 2) and (1/2, -2).
struct GridSpec {
    int refinement;

    /// Smallest N with 1/2^N <= eps/18.
    static GridSpec for_tolerance(double eps);

    std::size_t lattice_size() const;
    std::vector<std::pair<double, double>> pairs() const;
    /// Sup-norm spacing bound 1/2^N guaranteed by the lattice.
    double spacing() const;
};

struct TraceRow {
    double a;
    double b;
    int degree;
    double distance_1d;
    double rescaled;
};

struct DegreeResult {
    int degree;
    double value = 0.0;
    double argmax_a = 0.5;
    double argmax_b = 0.0;
};

struct DistanceResult {
    double value = 0.0; ///< max over degrees
    double epsilon = 0.0;
    int refinement = 0;
    bool certified = true; ///< false when unnormalized input was allowed
    double argmax_a = 0.5;
    double argmax_b = 0.0;
    std::vector<DegreeResult> per_degree;
    std::vector<TraceRow> trace; ///< filled when requested
};

struct MatchOptions {
    std::vector<int> degrees{0, 1};
    FieldPrime field{};
    unsigned threads = 1;
    bool allow_unnormalized = false;
    bool keep_trace = false;
    /// Overrides the refinement derived from epsilon.
    std::optional<int> refinement;
};

/// Approximate 2D matching distance: the maximum of the rescaled distance over
/// the lattice for eps plus the two far pairs. Deterministic for any thread
/// count; ties resolve to the first pair in lattice order.
DistanceResult approx_matching_distance(const MeshWithFunction& a, const MeshWithFunction& b, double eps,
                                        const MatchOptions& options = {});

/// True when every component has minimum exactly 0 and maximum exactly 1.
bool is_normalized(const VertexFunction& function);

} // namespace axw
