#pragma once

#include "axw/filtration.hpp"
#include "axw/mesh.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace axw {

/// Coefficient field Z_p.
class FieldPrime {
public:
    explicit FieldPrime(std::uint32_t p = 11);

    std::uint32_t modulus() const { return p_; }
    std::uint32_t inverse(std::uint32_t a) const;
    std::uint32_t negate(std::uint32_t a) const { return a == 0 ? 0 : p_ - a; }
    std::uint32_t multiply(std::uint32_t a, std::uint32_t b) const
    {
        return static_cast<std::uint32_t>(static_cast<std::uint64_t>(a) * b % p_);
    }

private:
    std::uint32_t p_;
    std::vector<std::uint32_t> inverses_; // filled for small p
};

bool is_prime(std::uint64_t n);

struct PersistencePair {
    double birth;
    double death;

    auto operator<=>(const PersistencePair&) const = default;
};

/// Persistence diagram of one homology degree: finite pairs with
/// birth < death and births of classes that never die.
struct PersistenceDiagram {
    int degree = 0;
    std::vector<PersistencePair> pairs;
    std::vector<double> essential;
    /// Pairs with birth == death, left out of `pairs`.
    std::size_t zero_length = 0;

    bool operator==(const PersistenceDiagram& o) const
    {
        return degree == o.degree && pairs == o.pairs && essential == o.essential;
    }
};

/// Diagrams for degrees 0..max_degree via left-to-right column reduction of
/// the boundary matrix over Z_p, with clearing. Throws DomainError if
/// max_degree exceeds the complex dimension.
std::vector<PersistenceDiagram> compute_diagrams(const ScalarFiltration& filtration, int max_degree,
                                                 const FieldPrime& field = FieldPrime());

/// Number of classes born at or before s and still alive at t (s < t).
std::size_t rank_1d(const PersistenceDiagram& diagram, double s, double t);

/// Rank of H_q(K_alpha) -> H_q(K_beta) for q = 0..max_degree, alpha < beta
/// in every component.
std::vector<std::size_t> discrete_rank_invariants(const MeshWithFunction& mesh, std::span<const double> alpha,
                                                  std::span<const double> beta, int max_degree,
                                                  const FieldPrime& field = FieldPrime());

std::size_t discrete_rank_invariant(const MeshWithFunction& mesh, std::span<const double> alpha,
                                    std::span<const double> beta, int degree,
                                    const FieldPrime& field = FieldPrime());

/// Betti numbers of a subcomplex, degrees 0..max_degree.
std::vector<std::size_t> betti_numbers(const SublevelComplex& subcomplex, int max_degree,
                                       const FieldPrime& field = FieldPrime());

} // namespace axw
