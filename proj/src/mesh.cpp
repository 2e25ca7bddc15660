#include "axw/mesh.hpp"

#include "axw/error.hpp"
#include "axw/interp.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

namespace axw {

namespace {

bool span_less(std::span<const VertexId> a, std::span<const VertexId> b)
{
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

} // namespace

SimplicialComplex SimplicialComplex::from_cells(std::size_t num_vertices,
                                                const std::vector<std::vector<VertexId>>& cells,
                                                std::vector<std::vector<double>> coordinates)
{
    if (!coordinates.empty()) {
        if (coordinates.size() != num_vertices)
            throw ValidationError("coordinate rows do not match the vertex count");
        for (const auto& row : coordinates)
            if (row.size() != coordinates.front().size())
                throw ValidationError("vertices have differing embedding dimensions");
    }

    std::vector<std::vector<VertexId>> canonical;
    canonical.reserve(cells.size());
    std::size_t top = 0;
    for (const auto& cell : cells) {
        if (cell.empty())
            throw ValidationError("empty cell");
        auto sorted = cell;
        std::sort(sorted.begin(), sorted.end());
        for (auto v : sorted)
            if (v < 0 || static_cast<std::size_t>(v) >= num_vertices)
                throw ValidationError("cell references vertex " + std::to_string(v) +
                                      " but only " + std::to_string(num_vertices) + " vertices exist");
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
            throw ValidationError("cell repeats a vertex");
        if (sorted.size() > 31)
            throw ValidationError("cell dimension too large");
        top = std::max(top, sorted.size());
        canonical.push_back(std::move(sorted));
    }
    {
        auto check = canonical;
        std::sort(check.begin(), check.end());
        if (std::adjacent_find(check.begin(), check.end()) != check.end())
            throw ValidationError("duplicate cell");
    }

    std::size_t levels = std::max<std::size_t>(top, num_vertices > 0 ? 1 : 0);
    std::vector<std::vector<std::vector<VertexId>>> by_dim(levels);
    if (levels > 0) {
        by_dim[0].reserve(num_vertices);
        for (std::size_t v = 0; v < num_vertices; ++v)
            by_dim[0].push_back({static_cast<VertexId>(v)});
    }
    std::vector<VertexId> face;
    for (const auto& cell : canonical) {
        auto m = static_cast<unsigned>(cell.size());
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            if (std::popcount(mask) < 2)
                continue;
            face.clear();
            for (unsigned i = 0; i < m; ++i)
                if (mask & (1u << i))
                    face.push_back(cell[i]);
            by_dim[face.size() - 1].push_back(face);
        }
    }

    SimplicialComplex K;
    K.num_vertices_ = num_vertices;
    K.coordinates_ = std::move(coordinates);
    K.offset_.push_back(0);
    for (auto& level : by_dim) {
        std::sort(level.begin(), level.end());
        level.erase(std::unique(level.begin(), level.end()), level.end());
        K.dim_begin_.push_back(static_cast<SimplexId>(K.offset_.size() - 1));
        for (const auto& s : level) {
            K.verts_.insert(K.verts_.end(), s.begin(), s.end());
            K.offset_.push_back(K.verts_.size());
        }
    }
    K.dim_begin_.push_back(static_cast<SimplexId>(K.offset_.size() - 1));

    K.facets_.assign(K.verts_.size(), -1);
    std::vector<VertexId> scratch;
    for (SimplexId s = 0; s < static_cast<SimplexId>(K.size()); ++s) {
        auto vs = K.vertices_of(s);
        if (vs.size() < 2)
            continue;
        for (std::size_t i = 0; i < vs.size(); ++i) {
            scratch.assign(vs.begin(), vs.end());
            scratch.erase(scratch.begin() + static_cast<std::ptrdiff_t>(i));
            K.facets_[K.offset_[static_cast<std::size_t>(s)] + i] = *K.find(scratch);
        }
    }
    return K;
}

std::size_t SimplicialComplex::count(int dim) const
{
    if (dim < 0 || dim > dimension())
        return 0;
    auto d = static_cast<std::size_t>(dim);
    return static_cast<std::size_t>(dim_begin_[d + 1] - dim_begin_[d]);
}

std::optional<SimplexId> SimplicialComplex::find(std::span<const VertexId> sorted_vertices) const
{
    int d = static_cast<int>(sorted_vertices.size()) - 1;
    if (d < 0 || d > dimension())
        return std::nullopt;
    SimplexId lo = first_of_dim(d);
    SimplexId hi = first_of_dim(d + 1);
    while (lo < hi) {
        SimplexId mid = lo + (hi - lo) / 2;
        if (span_less(vertices_of(mid), sorted_vertices))
            lo = mid + 1;
        else
            hi = mid;
    }
    if (lo < first_of_dim(d + 1) && std::ranges::equal(vertices_of(lo), sorted_vertices))
        return lo;
    return std::nullopt;
}

std::vector<SimplexId> SimplicialComplex::maximal_simplices() const
{
    std::vector<char> is_face(size(), 0);
    for (auto f : facets_)
        if (f >= 0)
            is_face[static_cast<std::size_t>(f)] = 1;
    std::vector<SimplexId> result;
    for (SimplexId s = 0; s < static_cast<SimplexId>(size()); ++s)
        if (!is_face[static_cast<std::size_t>(s)])
            result.push_back(s);
    return result;
}

long SimplicialComplex::euler_characteristic() const
{
    long chi = 0;
    for (int d = 0; d <= dimension(); ++d)
        chi += (d % 2 == 0 ? 1 : -1) * static_cast<long>(count(d));
    return chi;
}

double quantize(double x, int precision)
{
    const double scale = std::pow(10.0, precision);
    return std::round(x * scale) / scale + 0.0;
}

VertexFunction::VertexFunction(std::size_t components, std::vector<double> values, int precision,
                               bool quantize_values)
    : k_(components), precision_(precision), values_(std::move(values))
{
    if (k_ == 0)
        throw ValidationError("vertex function needs at least one component");
    if (values_.size() % k_ != 0)
        throw DimensionMismatch("value count is not a multiple of the component count");
    for (auto& x : values_) {
        if (!std::isfinite(x))
            throw ValidationError("non-finite function value");
        if (quantize_values)
            x = quantize(x, precision_);
    }
}

VertexFunction VertexFunction::component(std::size_t j) const
{
    std::vector<double> out(size());
    for (std::size_t v = 0; v < size(); ++v)
        out[v] = values_[v * k_ + j];
    return VertexFunction(1, std::move(out), precision_, false);
}

std::vector<double> VertexFunction::component_min() const
{
    std::vector<double> out(k_, 0.0);
    for (std::size_t v = 0; v < size(); ++v)
        for (std::size_t j = 0; j < k_; ++j)
            out[j] = v == 0 ? values_[j] : std::min(out[j], values_[v * k_ + j]);
    return out;
}

std::vector<double> VertexFunction::component_max() const
{
    std::vector<double> out(k_, 0.0);
    for (std::size_t v = 0; v < size(); ++v)
        for (std::size_t j = 0; j < k_; ++j)
            out[j] = v == 0 ? values_[j] : std::max(out[j], values_[v * k_ + j]);
    return out;
}

VertexFunction normalize(const VertexFunction& function)
{
    auto lo = function.component_min();
    auto hi = function.component_max();
    const std::size_t k = function.components();
    for (std::size_t j = 0; j < k; ++j)
        if (!(hi[j] > lo[j]))
            throw ConstantComponentError(j);
    std::vector<double> out(function.data());
    for (std::size_t i = 0; i < out.size(); ++i) {
        std::size_t j = i % k;
        out[i] = (out[i] - lo[j]) / (hi[j] - lo[j]);
    }
    return VertexFunction(k, std::move(out), function.precision(), true);
}

MeshWithFunction::MeshWithFunction(std::shared_ptr<const SimplicialComplex> complex, VertexFunction function)
    : complex_(std::move(complex)), function_(std::move(function))
{
    if (!complex_)
        throw ValidationError("null complex");
    if (function_.size() != complex_->num_vertices())
        throw ValidationError("function is defined on " + std::to_string(function_.size()) +
                              " vertices but the complex has " +
                              std::to_string(complex_->num_vertices()));
}

MeshWithFunction::MeshWithFunction(SimplicialComplex complex, VertexFunction function)
    : MeshWithFunction(std::make_shared<const SimplicialComplex>(std::move(complex)), std::move(function))
{
}

namespace {

void collect_flags(const SimplicialComplex& K, SimplexId s, std::vector<VertexId>& chain,
                   std::vector<std::vector<VertexId>>& cells)
{
    chain.push_back(s);
    if (K.dim_of(s) == 0) {
        auto cell = chain;
        std::sort(cell.begin(), cell.end());
        cells.push_back(std::move(cell));
    } else {
        for (auto f : K.facets_of(s))
            collect_flags(K, f, chain, cells);
    }
    chain.pop_back();
}

} // namespace

MeshWithFunction barycentric_subdivide(const MeshWithFunction& mesh, Interpolant mode)
{
    const auto& K = mesh.complex();
    const auto& phi = mesh.function();
    const std::size_t k = phi.components();
    const std::size_t n = K.size();

    std::vector<double> values(n * k);
    std::optional<AxiswiseInterpolant> interp;
    if (mode == Interpolant::axiswise)
        interp.emplace(mesh);

    std::vector<double> weights;
    for (SimplexId s = 0; s < static_cast<SimplexId>(n); ++s) {
        std::span<double> out(values.data() + static_cast<std::size_t>(s) * k, k);
        auto vs = K.vertices_of(s);
        if (vs.size() == 1) {
            std::ranges::copy(phi[vs[0]], out.begin());
            continue;
        }
        if (mode == Interpolant::linear) {
            auto val = evaluate_linear(mesh, CarrierPoint::barycenter(K, s));
            std::ranges::copy(val, out.begin());
        } else {
            weights.assign(vs.size(), 1.0 / static_cast<double>(vs.size()));
            interp->evaluate(s, weights, out);
        }
    }

    std::vector<std::vector<VertexId>> cells;
    std::vector<VertexId> chain;
    for (auto s : K.maximal_simplices())
        if (K.dim_of(s) > 0)
            collect_flags(K, s, chain, cells);

    std::vector<std::vector<double>> coords;
    if (!K.coordinates().empty()) {
        const std::size_t d = K.embedding_dimension();
        coords.assign(n, std::vector<double>(d, 0.0));
        for (SimplexId s = 0; s < static_cast<SimplexId>(n); ++s) {
            auto vs = K.vertices_of(s);
            auto& row = coords[static_cast<std::size_t>(s)];
            for (auto v : vs)
                for (std::size_t i = 0; i < d; ++i)
                    row[i] += K.coordinates()[static_cast<std::size_t>(v)][i];
            for (auto& x : row)
                x /= static_cast<double>(vs.size());
        }
    }

    return MeshWithFunction(SimplicialComplex::from_cells(n, cells, std::move(coords)),
                            VertexFunction(k, std::move(values), phi.precision(), false));
}

} // namespace axw
