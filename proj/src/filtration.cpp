#include "axw/filtration.hpp"

#include "axw/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace axw {

AdmissiblePair::AdmissiblePair(std::vector<double> direction, std::vector<double> offset)
    : l(std::move(direction)), b(std::move(offset))
{
    if (l.empty() || l.size() != b.size())
        throw DomainError("admissible pair: l and b must have the same positive length");
    for (double x : l)
        if (!(x > 0.0))
            throw DomainError("admissible pair: every component of l must be positive");
    for (double x : b)
        if (!std::isfinite(x))
            throw DomainError("admissible pair: b must be finite");
    if (std::abs(std::accumulate(l.begin(), l.end(), 0.0) - 1.0) > 1e-12)
        throw DomainError("admissible pair: components of l must sum to 1");
    if (std::abs(std::accumulate(b.begin(), b.end(), 0.0)) > 1e-12)
        throw DomainError("admissible pair: components of b must sum to 0");
}

double AdmissiblePair::min_l() const
{
    return *std::min_element(l.begin(), l.end());
}

std::vector<double> AdmissiblePair::point(double s) const
{
    std::vector<double> out(l.size());
    for (std::size_t i = 0; i < l.size(); ++i)
        out[i] = b[i] + s * l[i];
    return out;
}

SublevelComplex sublevel(const MeshWithFunction& mesh, std::span<const double> alpha)
{
    const auto& K = mesh.complex();
    const auto& phi = mesh.function();
    if (alpha.size() != phi.components())
        throw DimensionMismatch("level has the wrong number of components");

    std::vector<char> ok(K.num_vertices());
    for (VertexId v = 0; v < static_cast<VertexId>(K.num_vertices()); ++v) {
        auto val = phi[v];
        bool below = true;
        for (std::size_t j = 0; j < alpha.size() && below; ++j)
            below = val[j] <= alpha[j];
        ok[static_cast<std::size_t>(v)] = below;
    }

    boost::dynamic_bitset<> members(K.size());
    for (SimplexId s = 0; s < static_cast<SimplexId>(K.size()); ++s) {
        auto vs = K.vertices_of(s);
        members[static_cast<std::size_t>(s)] =
            std::all_of(vs.begin(), vs.end(), [&](VertexId v) { return ok[static_cast<std::size_t>(v)]; });
    }
    return SublevelComplex(K, std::vector<double>(alpha.begin(), alpha.end()), std::move(members));
}

std::vector<double> scalar_reduce(const MeshWithFunction& mesh, const AdmissiblePair& pair)
{
    const auto& phi = mesh.function();
    if (pair.dimension() != phi.components())
        throw DimensionMismatch("admissible pair and function differ in dimension");
    std::vector<double> g(phi.size());
    for (VertexId v = 0; v < static_cast<VertexId>(phi.size()); ++v) {
        double best = -INFINITY;
        for (std::size_t i = 0; i < pair.dimension(); ++i)
            best = std::max(best, (phi.at(v, i) - pair.b[i]) / pair.l[i]);
        g[static_cast<std::size_t>(v)] = best;
    }
    return g;
}

ScalarFiltration::ScalarFiltration(const SimplicialComplex& complex, std::vector<double> entries,
                                   const boost::dynamic_bitset<>* present)
    : complex_(&complex), entries_(std::move(entries))
{
    if (entries_.size() != complex.size())
        throw DimensionMismatch("one entry value per simplex is required");
    order_.reserve(complex.size());
    for (SimplexId s = 0; s < static_cast<SimplexId>(complex.size()); ++s)
        if (!present || present->test(static_cast<std::size_t>(s)))
            order_.push_back(s);
    std::stable_sort(order_.begin(), order_.end(), [this](SimplexId a, SimplexId b) {
        return entries_[static_cast<std::size_t>(a)] < entries_[static_cast<std::size_t>(b)];
    });
    for (auto s : order_) {
        double e = entries_[static_cast<std::size_t>(s)];
        if (levels_.empty() || levels_.back() != e)
            levels_.push_back(e);
    }
}

SublevelComplex ScalarFiltration::complex_at(double s) const
{
    boost::dynamic_bitset<> members(complex_->size());
    for (auto id : order_) {
        if (entries_[static_cast<std::size_t>(id)] > s)
            break;
        members.set(static_cast<std::size_t>(id));
    }
    return SublevelComplex(*complex_, {s}, std::move(members));
}

ScalarFiltration build_scalar_filtration(const MeshWithFunction& mesh, std::span<const double> g)
{
    const auto& K = mesh.complex();
    if (g.size() != K.num_vertices())
        throw DimensionMismatch("scalar function must have one value per vertex");
    std::vector<double> entries(K.size());
    for (SimplexId s = 0; s < static_cast<SimplexId>(K.size()); ++s) {
        double e = -INFINITY;
        for (auto v : K.vertices_of(s))
            e = std::max(e, g[static_cast<std::size_t>(v)]);
        entries[static_cast<std::size_t>(s)] = e;
    }
    return ScalarFiltration(K, std::move(entries));
}

bool Cone::contains(std::span<const double> alpha) const
{
    if (alpha[axis] != apex[axis])
        return false;
    for (std::size_t i = 0; i < apex.size(); ++i)
        if (alpha[i] < apex[i])
            return false;
    return true;
}

double Cone::distance(std::span<const double> alpha) const
{
    double d = std::abs(alpha[axis] - apex[axis]);
    for (std::size_t i = 0; i < apex.size(); ++i)
        if (i != axis)
            d = std::max(d, apex[i] - alpha[i]);
    return d;
}

bool ConeSet::contains(std::span<const double> alpha) const
{
    return std::any_of(cones.begin(), cones.end(), [&](const Cone& c) { return c.contains(alpha); });
}

double ConeSet::distance(std::span<const double> alpha) const
{
    double d = INFINITY;
    for (const auto& c : cones)
        d = std::min(d, c.distance(alpha));
    return d;
}

ConeSet cone_set(const MeshWithFunction& mesh)
{
    const auto& phi = mesh.function();
    ConeSet set;
    set.cones.reserve(phi.size() * phi.components());
    for (VertexId v = 0; v < static_cast<VertexId>(phi.size()); ++v)
        for (std::size_t j = 0; j < phi.components(); ++j)
            set.cones.push_back({j, std::vector<double>(phi[v].begin(), phi[v].end())});
    return set;
}

bool is_regular_neighborhood(const ConeSet& cones, std::span<const double> alpha, double eps)
{
    if (!(eps > 0.0))
        throw DomainError("neighborhood radius must be positive");
    return cones.distance(alpha) > eps;
}

bool is_regular_neighborhood(const MeshWithFunction& mesh, std::span<const double> alpha, double eps)
{
    return is_regular_neighborhood(cone_set(mesh), alpha, eps);
}

std::vector<std::vector<double>> lambda_set(const MeshWithFunction& mesh)
{
    const auto& phi = mesh.function();
    const std::size_t k = phi.components();
    const std::size_t n = phi.size();
    if (n == 0)
        return {};

    std::vector<std::vector<double>> axis_values(k);
    for (std::size_t j = 0; j < k; ++j) {
        for (VertexId v = 0; v < static_cast<VertexId>(n); ++v)
            axis_values[j].push_back(phi.at(v, j));
        std::sort(axis_values[j].begin(), axis_values[j].end());
        axis_values[j].erase(std::unique(axis_values[j].begin(), axis_values[j].end()), axis_values[j].end());
    }

    // lambda is in C iff some vertex lies below it and shares one coordinate with it.
    auto in_cones = [&](const std::vector<double>& lambda) {
        for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
            auto val = phi[v];
            bool below = true, touches = false;
            for (std::size_t j = 0; j < k && below; ++j) {
                below = val[j] <= lambda[j];
                touches = touches || val[j] == lambda[j];
            }
            if (below && touches)
                return true;
        }
        return false;
    };

    std::vector<std::vector<double>> result;
    std::vector<std::size_t> idx(k, 0);
    std::vector<double> lambda(k);
    while (true) {
        for (std::size_t j = 0; j < k; ++j)
            lambda[j] = axis_values[j][idx[j]];
        if (in_cones(lambda))
            result.push_back(lambda);
        std::size_t j = k;
        while (j > 0) {
            --j;
            if (++idx[j] < axis_values[j].size())
                break;
            idx[j] = 0;
            if (j == 0) {
                std::sort(result.begin(), result.end());
                return result;
            }
        }
    }
}

} // namespace axw
