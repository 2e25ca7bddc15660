#include "axw/matchdist.hpp"

#include "axw/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

namespace axw {

double point_cost(const PersistencePair& p, const PersistencePair& q)
{
    double direct = std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
    return std::min(direct, std::max(diagonal_cost(p), diagonal_cost(q)));
}

double diagonal_cost(const PersistencePair& p)
{
    return (p.death - p.birth) / 2.0;
}

namespace {

// Hopcroft-Karp on a bipartite graph given as adjacency lists of left vertices.
class BipartiteMatcher {
public:
    BipartiteMatcher(std::size_t left, std::size_t right) : adj_(left), match_left_(left), match_right_(right) {}

    void add_edge(std::size_t u, std::size_t v) { adj_[u].push_back(static_cast<std::int32_t>(v)); }

    std::size_t max_matching()
    {
        std::fill(match_left_.begin(), match_left_.end(), -1);
        std::fill(match_right_.begin(), match_right_.end(), -1);
        std::size_t size = 0;
        while (bfs())
            for (std::size_t u = 0; u < adj_.size(); ++u)
                if (match_left_[u] < 0 && dfs(static_cast<std::int32_t>(u)))
                    ++size;
        return size;
    }

private:
    bool bfs()
    {
        constexpr int inf = std::numeric_limits<int>::max();
        dist_.assign(adj_.size(), inf);
        std::vector<std::int32_t> queue;
        for (std::size_t u = 0; u < adj_.size(); ++u)
            if (match_left_[u] < 0) {
                dist_[u] = 0;
                queue.push_back(static_cast<std::int32_t>(u));
            }
        bool found = false;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            auto u = static_cast<std::size_t>(queue[head]);
            for (auto v : adj_[u]) {
                auto w = match_right_[static_cast<std::size_t>(v)];
                if (w < 0)
                    found = true;
                else if (dist_[static_cast<std::size_t>(w)] == inf) {
                    dist_[static_cast<std::size_t>(w)] = dist_[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        return found;
    }

    bool dfs(std::int32_t u)
    {
        auto uu = static_cast<std::size_t>(u);
        for (auto v : adj_[uu]) {
            auto w = match_right_[static_cast<std::size_t>(v)];
            if (w < 0 || (dist_[static_cast<std::size_t>(w)] == dist_[uu] + 1 && dfs(w))) {
                match_left_[uu] = v;
                match_right_[static_cast<std::size_t>(v)] = u;
                return true;
            }
        }
        dist_[uu] = std::numeric_limits<int>::max();
        return false;
    }

    std::vector<std::vector<std::int32_t>> adj_;
    std::vector<std::int32_t> match_left_;
    std::vector<std::int32_t> match_right_;
    std::vector<int> dist_;
};

// Perfect matching test on the usual doubled graph: left = A + diagonal
// copies of B, right = B + diagonal copies of A.
bool matchable(const std::vector<PersistencePair>& A, const std::vector<PersistencePair>& B, double r)
{
    const std::size_t n = A.size(), m = B.size();
    BipartiteMatcher g(n + m, n + m);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < m; ++j)
            if (point_cost(A[i], B[j]) <= r)
                g.add_edge(i, j);
        if (diagonal_cost(A[i]) <= r)
            g.add_edge(i, m + i);
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (diagonal_cost(B[j]) <= r)
            g.add_edge(n + j, j);
        for (std::size_t i = 0; i < n; ++i)
            g.add_edge(n + j, m + i);
    }
    return g.max_matching() == n + m;
}

double bottleneck_finite(const std::vector<PersistencePair>& A, const std::vector<PersistencePair>& B)
{
    if (A.empty() && B.empty())
        return 0.0;
    std::vector<double> candidates{0.0};
    for (const auto& p : A) {
        candidates.push_back(diagonal_cost(p));
        for (const auto& q : B)
            candidates.push_back(point_cost(p, q));
    }
    for (const auto& q : B)
        candidates.push_back(diagonal_cost(q));
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // The largest candidate (retire everything) is always feasible.
    std::size_t lo = 0, hi = candidates.size() - 1;
    while (lo < hi) {
        std::size_t mid = lo + (hi - lo) / 2;
        if (matchable(A, B, candidates[mid]))
            hi = mid;
        else
            lo = mid + 1;
    }
    return candidates[lo];
}

} // namespace

double matching_distance_1d(const PersistenceDiagram& a, const PersistenceDiagram& b)
{
    if (a.degree != b.degree)
        throw DomainError("matching distance between diagrams of different degrees");
    if (a.essential.size() != b.essential.size())
        return std::numeric_limits<double>::infinity();

    // On the line, sorted order is an optimal bottleneck matching.
    auto ea = a.essential, eb = b.essential;
    std::sort(ea.begin(), ea.end());
    std::sort(eb.begin(), eb.end());
    double d = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i)
        d = std::max(d, std::abs(ea[i] - eb[i]));
    return std::max(d, bottleneck_finite(a.pairs, b.pairs));
}

RescaledDistance rescaled_distance(const MeshWithFunction& a, const MeshWithFunction& b,
                                   const AdmissiblePair& pair, const std::vector<int>& degrees,
                                   const FieldPrime& field)
{
    if (a.components() != b.components())
        throw DimensionMismatch("compared functions have different numbers of components");
    if (degrees.empty())
        throw DomainError("at least one homology degree is required");
    int max_degree = *std::max_element(degrees.begin(), degrees.end());

    auto g = scalar_reduce(a, pair);
    auto h = scalar_reduce(b, pair);
    auto da = compute_diagrams(build_scalar_filtration(a, g), max_degree, field);
    auto db = compute_diagrams(build_scalar_filtration(b, h), max_degree, field);

    RescaledDistance out;
    out.degrees = degrees;
    const double scale = pair.min_l();
    for (int q : degrees) {
        if (q < 0)
            throw DomainError("negative homology degree");
        double d = matching_distance_1d(da[static_cast<std::size_t>(q)], db[static_cast<std::size_t>(q)]);
        double r = std::isinf(d) ? d : scale * d;
        out.per_degree_1d.push_back(d);
        out.per_degree_rescaled.push_back(r);
        out.combined = std::max(out.combined, r);
    }
    return out;
}

GridSpec GridSpec::for_tolerance(double eps)
{
    if (!(eps > 0.0) || !std::isfinite(eps))
        throw DomainError("tolerance must be positive and finite");
    int n = 0;
    while (std::ldexp(1.0, -n) > eps / kGridLipschitz)
        ++n;
    return GridSpec{n};
}

std::size_t GridSpec::lattice_size() const
{
    return (std::size_t{1} << refinement) * (std::size_t{1} << (refinement + 1));
}

double GridSpec::spacing() const
{
    return std::ldexp(1.0, -refinement);
}

std::vector<std::pair<double, double>> GridSpec::pairs() const
{
    std::vector<std::pair<double, double>> out;
    out.reserve(lattice_size() + 2);
    const std::size_t na = std::size_t{1} << refinement;
    const std::size_t nb = std::size_t{1} << (refinement + 1);
    for (std::size_t i = 0; i < na; ++i) {
        double a = std::ldexp(static_cast<double>(2 * i + 1), -(refinement + 1));
        for (std::size_t j = 0; j < nb; ++j) {
            double b = 1.0 - std::ldexp(static_cast<double>(2 * j + 1), -(refinement + 1));
            out.emplace_back(a, b);
        }
    }
    out.emplace_back(0.5, 2.0);
    out.emplace_back(0.5, -2.0);
    return out;
}

bool is_normalized(const VertexFunction& function)
{
    auto lo = function.component_min();
    auto hi = function.component_max();
    for (std::size_t j = 0; j < lo.size(); ++j)
        if (lo[j] != 0.0 || hi[j] != 1.0)
            return false;
    return true;
}

DistanceResult approx_matching_distance(const MeshWithFunction& a, const MeshWithFunction& b, double eps,
                                        const MatchOptions& options)
{
    if (a.components() != 2 || b.components() != 2)
        throw DomainError("the foliation grid is implemented for two-component functions only");
    bool normalized = is_normalized(a.function()) && is_normalized(b.function());
    if (!normalized && !options.allow_unnormalized)
        throw DomainError("inputs must be normalized to [0,1] per component");
    if (options.degrees.empty())
        throw DomainError("at least one homology degree is required");

    GridSpec grid = GridSpec::for_tolerance(eps);
    if (options.refinement) {
        if (*options.refinement < 0)
            throw DomainError("refinement must be nonnegative");
        grid.refinement = *options.refinement;
    }
    const auto pairs = grid.pairs();
    std::vector<RescaledDistance> results(pairs.size());

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t i = next++; i < pairs.size(); i = next++)
                results[i] = rescaled_distance(a, b, AdmissiblePair::planar(pairs[i].first, pairs[i].second),
                                               options.degrees, options.field);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = pairs.size();
        }
    };
    unsigned threads = std::max(1u, options.threads);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t)
            pool.emplace_back(worker);
        for (auto& t : pool)
            t.join();
    }
    if (failure)
        std::rethrow_exception(failure);

    DistanceResult out;
    out.epsilon = eps;
    out.refinement = grid.refinement;
    out.certified = normalized;
    for (int q : options.degrees)
        out.per_degree.push_back(DegreeResult{q, 0.0, pairs.front().first, pairs.front().second});
    out.argmax_a = pairs.front().first;
    out.argmax_b = pairs.front().second;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& r = results[i];
        for (std::size_t d = 0; d < options.degrees.size(); ++d) {
            auto& best = out.per_degree[d];
            if (r.per_degree_rescaled[d] > best.value) {
                best.value = r.per_degree_rescaled[d];
                best.argmax_a = pairs[i].first;
                best.argmax_b = pairs[i].second;
            }
            if (options.keep_trace)
                out.trace.push_back({pairs[i].first, pairs[i].second, options.degrees[d], r.per_degree_1d[d],
                                     r.per_degree_rescaled[d]});
        }
        if (r.combined > out.value) {
            out.value = r.combined;
            out.argmax_a = pairs[i].first;
            out.argmax_b = pairs[i].second;
        }
    }
    return out;
}

} // namespace axw
