#pragma once

#include "axw/mesh.hpp"

#include <boost/dynamic_bitset.hpp>

#include <span>
#include <vector>

namespace axw {

/// Line parameters (l, b) of the one-parameter reduction: every l_i > 0,
/// sum(l) = 1 and sum(b) = 0. The line is s -> b + s l.
struct AdmissiblePair {
    std::vector<double> l;
    std::vector<double> b;

    /// Checks the constraints (sums within 1e-12); throws DomainError.
    AdmissiblePair(std::vector<double> direction, std::vector<double> offset);

    /// Planar pair (a, 1-a), (b, -b).
    static AdmissiblePair planar(double a, double b) { return {{a, 1.0 - a}, {b, -b}}; }

    std::size_t dimension() const { return l.size(); }
    double min_l() const;
    std::vector<double> point(double s) const;
};

/// Subcomplex of a parent complex stored as a bitset over its canonical ids.
class SublevelComplex {
public:
    SublevelComplex() = default;
    SublevelComplex(const SimplicialComplex& parent, std::vector<double> level,
                    boost::dynamic_bitset<> members)
        : parent_(&parent), level_(std::move(level)), members_(std::move(members))
    {
    }

    const SimplicialComplex& parent() const { return *parent_; }
    const std::vector<double>& level() const { return level_; }
    const boost::dynamic_bitset<>& members() const { return members_; }

    bool contains(SimplexId s) const { return members_.test(static_cast<std::size_t>(s)); }
    std::size_t size() const { return members_.count(); }
    bool empty() const { return members_.none(); }
    bool is_subset_of(const SublevelComplex& other) const { return members_.is_subset_of(other.members_); }

    /// Same membership; levels are not compared.
    bool operator==(const SublevelComplex& other) const { return members_ == other.members_; }

private:
    const SimplicialComplex* parent_ = nullptr;
    std::vector<double> level_;
    boost::dynamic_bitset<> members_;
};

/// K_alpha: simplices all of whose vertices satisfy phi(v) <= alpha componentwise.
SublevelComplex sublevel(const MeshWithFunction& mesh, std::span<const double> alpha);

/// g(v) = max_i (phi_i(v) - b_i) / l_i on every vertex.
std::vector<double> scalar_reduce(const MeshWithFunction& mesh, const AdmissiblePair& pair);

/// Simplexwise filtration of (a subcomplex of) a complex by entry values.
///
/// The order sorts simplices by (entry value, dimension, lexicographic vertex
/// tuple); since canonical ids are ordered by the last two keys this is the
/// order by (entry, id), and every simplex follows its faces.
class ScalarFiltration {
public:
    /// `entries[s]` is the value at which simplex s enters. Simplices flagged
    /// absent in `present` (when non-empty) are left out; `present` must be
    /// closed under faces.
    ScalarFiltration(const SimplicialComplex& complex, std::vector<double> entries,
                     const boost::dynamic_bitset<>* present = nullptr);

    const SimplicialComplex& complex() const { return *complex_; }
    double entry(SimplexId s) const { return entries_[static_cast<std::size_t>(s)]; }
    const std::vector<SimplexId>& order() const { return order_; }
    const std::vector<double>& levels() const { return levels_; }

    /// Simplices with entry <= s.
    SublevelComplex complex_at(double s) const;

private:
    const SimplicialComplex* complex_;
    std::vector<double> entries_;
    std::vector<SimplexId> order_;
    std::vector<double> levels_;
};

/// Lower-star filtration of scalar vertex values: each simplex enters at the
/// maximum over its vertices.
ScalarFiltration build_scalar_filtration(const MeshWithFunction& mesh, std::span<const double> g);

/// Cone C_j(v) = { alpha : alpha_j = apex_j, alpha >= apex }.
struct Cone {
    std::size_t axis;
    std::vector<double> apex;

    bool contains(std::span<const double> alpha) const;
    /// Sup-norm distance from alpha to the cone.
    double distance(std::span<const double> alpha) const;
};

struct ConeSet {
    std::vector<Cone> cones;

    bool contains(std::span<const double> alpha) const;
    double distance(std::span<const double> alpha) const;
};

/// One cone per (vertex, axis) pair.
ConeSet cone_set(const MeshWithFunction& mesh);

/// True iff the closed sup-norm ball of radius eps around alpha misses every cone.
bool is_regular_neighborhood(const MeshWithFunction& mesh, std::span<const double> alpha, double eps);
bool is_regular_neighborhood(const ConeSet& cones, std::span<const double> alpha, double eps);

/// Points of C whose coordinates are all vertex values, sorted lexicographically.
/// Enumerates the product of per-axis value sets, so the cost grows like |V|^k.
std::vector<std::vector<double>> lambda_set(const MeshWithFunction& mesh);

} // namespace axw
