#include "axw/persistence.hpp"

#include "axw/error.hpp"

#include <algorithm>

namespace axw {

bool is_prime(std::uint64_t n)
{
    if (n < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

namespace {

// Extended Euclid; a must be a nonzero residue.
std::uint32_t euclid_inverse(std::uint32_t a, std::uint32_t p)
{
    std::int64_t t = 0, new_t = 1, r = p, new_r = a;
    while (new_r != 0) {
        std::int64_t q = r / new_r;
        std::tie(t, new_t) = std::pair(new_t, t - q * new_t);
        std::tie(r, new_r) = std::pair(new_r, r - q * new_r);
    }
    if (t < 0)
        t += p;
    return static_cast<std::uint32_t>(t);
}

} // namespace

FieldPrime::FieldPrime(std::uint32_t p) : p_(p)
{
    if (!is_prime(p))
        throw DomainError("coefficient modulus " + std::to_string(p) + " is not prime");
    if (p <= (1u << 16)) {
        inverses_.assign(p, 0);
        for (std::uint32_t a = 1; a < p; ++a)
            inverses_[a] = euclid_inverse(a, p);
    }
}

std::uint32_t FieldPrime::inverse(std::uint32_t a) const
{
    if (a % p_ == 0)
        throw DomainError("zero has no inverse");
    return inverses_.empty() ? euclid_inverse(a % p_, p_) : inverses_[a % p_];
}

namespace {

struct Entry {
    std::int32_t row; // filtration position
    std::uint32_t coeff;
};

using Column = std::vector<Entry>;

// target += factor * source, both sorted by row.
void add_scaled(Column& target, const Column& source, std::uint32_t factor, const FieldPrime& F, Column& scratch)
{
    scratch.clear();
    auto a = target.begin(), ae = target.end();
    auto b = source.begin(), be = source.end();
    const std::uint32_t p = F.modulus();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->row < b->row)) {
            scratch.push_back(*a++);
        } else if (a == ae || b->row < a->row) {
            scratch.push_back({b->row, F.multiply(b->coeff, factor)});
            ++b;
        } else {
            std::uint32_t c = (a->coeff + F.multiply(b->coeff, factor)) % p;
            if (c != 0)
                scratch.push_back({a->row, c});
            ++a;
            ++b;
        }
    }
    target.swap(scratch);
}

} // namespace

std::vector<PersistenceDiagram> compute_diagrams(const ScalarFiltration& filtration, int max_degree,
                                                 const FieldPrime& field)
{
    const auto& K = filtration.complex();
    if (max_degree < 0)
        throw DomainError("max degree must be nonnegative");
    if (max_degree > std::max(K.dimension(), 0))
        throw DomainError("max degree exceeds the complex dimension");

    const auto& order = filtration.order();
    const auto n = static_cast<std::int32_t>(order.size());
    std::vector<std::int32_t> position(K.size(), -1);
    for (std::int32_t i = 0; i < n; ++i)
        position[static_cast<std::size_t>(order[static_cast<std::size_t>(i)])] = i;

    const int top = std::min(max_degree + 1, K.dimension());
    const std::uint32_t minus_one = field.negate(1);

    std::vector<Column> reduced(static_cast<std::size_t>(n));
    std::vector<std::int32_t> pivot_owner(static_cast<std::size_t>(n), -1); // row -> column
    std::vector<char> cleared(static_cast<std::size_t>(n), 0);
    std::vector<char> nonzero(static_cast<std::size_t>(n), 0);
    Column column, scratch;

    for (int d = top; d >= 1; --d) {
        for (std::int32_t j = 0; j < n; ++j) {
            SimplexId s = order[static_cast<std::size_t>(j)];
            if (K.dim_of(s) != d || cleared[static_cast<std::size_t>(j)])
                continue;
            column.clear();
            auto facets = K.facets_of(s);
            for (std::size_t i = 0; i < facets.size(); ++i) {
                std::int32_t row = position[static_cast<std::size_t>(facets[i])];
                column.push_back({row, i % 2 == 0 ? 1u : minus_one});
            }
            std::sort(column.begin(), column.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
            while (!column.empty()) {
                std::int32_t low = column.back().row;
                std::int32_t owner = pivot_owner[static_cast<std::size_t>(low)];
                if (owner < 0)
                    break;
                const Column& other = reduced[static_cast<std::size_t>(owner)];
                std::uint32_t factor =
                    field.negate(field.multiply(column.back().coeff, field.inverse(other.back().coeff)));
                add_scaled(column, other, factor, field, scratch);
            }
            if (!column.empty()) {
                std::int32_t low = column.back().row;
                pivot_owner[static_cast<std::size_t>(low)] = j;
                cleared[static_cast<std::size_t>(low)] = 1;
                nonzero[static_cast<std::size_t>(j)] = 1;
                reduced[static_cast<std::size_t>(j)] = column;
            }
        }
    }

    std::vector<PersistenceDiagram> diagrams(static_cast<std::size_t>(max_degree) + 1);
    for (int q = 0; q <= max_degree; ++q)
        diagrams[static_cast<std::size_t>(q)].degree = q;
    for (std::int32_t i = 0; i < n; ++i) {
        SimplexId s = order[static_cast<std::size_t>(i)];
        int q = K.dim_of(s);
        if (q > max_degree || nonzero[static_cast<std::size_t>(i)])
            continue;
        auto& D = diagrams[static_cast<std::size_t>(q)];
        double birth = filtration.entry(s);
        std::int32_t killer = pivot_owner[static_cast<std::size_t>(i)];
        if (killer < 0) {
            D.essential.push_back(birth);
            continue;
        }
        double death = filtration.entry(order[static_cast<std::size_t>(killer)]);
        if (death == birth)
            ++D.zero_length;
        else
            D.pairs.push_back({birth, death});
    }
    for (auto& D : diagrams) {
        std::sort(D.pairs.begin(), D.pairs.end());
        std::sort(D.essential.begin(), D.essential.end());
    }
    return diagrams;
}

std::size_t rank_1d(const PersistenceDiagram& diagram, double s, double t)
{
    if (!(s < t))
        throw DomainError("rank_1d requires s < t");
    std::size_t r = 0;
    for (const auto& p : diagram.pairs)
        if (p.birth <= s && p.death > t)
            ++r;
    for (double e : diagram.essential)
        if (e <= s)
            ++r;
    return r;
}

std::vector<std::size_t> discrete_rank_invariants(const MeshWithFunction& mesh, std::span<const double> alpha,
                                                  std::span<const double> beta, int max_degree,
                                                  const FieldPrime& field)
{
    if (alpha.size() != beta.size() || alpha.size() != mesh.components())
        throw DimensionMismatch("alpha and beta must match the function dimension");
    for (std::size_t j = 0; j < alpha.size(); ++j)
        if (!(alpha[j] < beta[j]))
            throw DomainError("discrete rank invariant requires alpha < beta in every component");

    auto lower = sublevel(mesh, alpha);
    auto upper = sublevel(mesh, beta);
    const auto& K = mesh.complex();
    std::vector<double> entries(K.size(), 1.0);
    for (SimplexId s = 0; s < static_cast<SimplexId>(K.size()); ++s)
        if (lower.contains(s))
            entries[static_cast<std::size_t>(s)] = 0.0;
    ScalarFiltration filtration(K, std::move(entries), &upper.members());
    auto diagrams = compute_diagrams(filtration, max_degree, field);
    std::vector<std::size_t> ranks;
    for (const auto& D : diagrams)
        ranks.push_back(rank_1d(D, 0.0, 1.0));
    return ranks;
}

std::size_t discrete_rank_invariant(const MeshWithFunction& mesh, std::span<const double> alpha,
                                    std::span<const double> beta, int degree, const FieldPrime& field)
{
    return discrete_rank_invariants(mesh, alpha, beta, degree, field).back();
}

std::vector<std::size_t> betti_numbers(const SublevelComplex& subcomplex, int max_degree, const FieldPrime& field)
{
    const auto& K = subcomplex.parent();
    ScalarFiltration filtration(K, std::vector<double>(K.size(), 0.0), &subcomplex.members());
    std::vector<std::size_t> betti;
    for (const auto& D : compute_diagrams(filtration, max_degree, field))
        betti.push_back(D.essential.size());
    return betti;
}

} // namespace axw
