#pragma once

#include "axw/mesh.hpp"
#include "axw/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <set>
#include <vector>

namespace axw::test {

inline std::filesystem::path support_dir()
{
    return AXW_TEST_SUPPORT_DIR;
}

inline MeshWithFunction tetrahedron()
{
    return load_voff(support_dir() / "tetrahedron.voff");
}

/// Normalized values on a lattice of `steps` + 1 levels per component when
/// steps > 0 (many ties), otherwise random 6-digit values.
inline VertexFunction random_function(Xoshiro256& rng, std::size_t n, std::size_t k, int steps)
{
    std::vector<double> values(n * k);
    for (auto& x : values)
        x = steps > 0 ? std::floor(rng.uniform01() * (steps + 1)) / steps : rng.uniform01();
    for (std::size_t j = 0; j < k; ++j) {
        // pin the extremes so the function is normalized after quantization
        auto lo = static_cast<std::size_t>(rng() % n);
        auto hi = (lo + 1 + rng() % (n - 1)) % n;
        values[lo * k + j] = 0.0;
        values[hi * k + j] = 1.0;
    }
    return normalize(VertexFunction(k, std::move(values)));
}

/// Random 2-complex: `triangles` distinct triangles plus a few loose edges on
/// n vertices.
inline SimplicialComplex random_complex(Xoshiro256& rng, std::size_t n, std::size_t triangles, std::size_t edges)
{
    std::set<std::vector<VertexId>> cells;
    auto pick = [&](std::size_t m) {
        std::vector<VertexId> c;
        while (c.size() < m) {
            auto v = static_cast<VertexId>(rng() % n);
            if (std::find(c.begin(), c.end(), v) == c.end())
                c.push_back(v);
        }
        std::sort(c.begin(), c.end());
        return c;
    };
    while (cells.size() < triangles)
        cells.insert(pick(3));
    for (std::size_t e = 0; e < edges; ++e)
        cells.insert(pick(2));
    std::vector<std::vector<VertexId>> list;
    for (const auto& c : cells) {
        bool covered = false;
        if (c.size() == 2)
            for (const auto& t : cells)
                covered = covered || (t.size() == 3 && std::includes(t.begin(), t.end(), c.begin(), c.end()));
        if (!covered)
            list.push_back(c);
    }
    return SimplicialComplex::from_cells(n, list);
}

/// Deterministic corpus of small k = 2 meshes (at most a few hundred simplices).
inline std::vector<MeshWithFunction> corpus(std::size_t count, std::uint64_t seed = 7)
{
    std::vector<MeshWithFunction> out;
    for (std::size_t i = 0; i < count; ++i) {
        auto rng = Xoshiro256::for_stream(seed, i);
        std::size_t n = 6 + rng() % 11;
        std::size_t tri = 3 + rng() % (2 * n);
        auto K = random_complex(rng, n, tri, rng() % 4);
        int steps = (i % 3 == 0) ? 0 : static_cast<int>(3 + rng() % 6);
        out.emplace_back(std::move(K), random_function(rng, n, 2, steps));
    }
    return out;
}

/// Mesh paired with a perturbed copy of itself on the same complex.
inline MeshWithFunction perturbed(const MeshWithFunction& mesh, Xoshiro256& rng, double amplitude, bool renormalize)
{
    auto values = mesh.function().data();
    for (auto& x : values)
        x += rng.uniform(-amplitude, amplitude);
    VertexFunction f(mesh.components(), std::move(values));
    return mesh.with_function(renormalize ? normalize(f) : f);
}

} // namespace axw::test
