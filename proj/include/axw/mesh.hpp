#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <span>
#include <vector>

namespace axw {

using VertexId = std::int32_t;
using SimplexId = std::int32_t;

inline constexpr int kDefaultPrecision = 6;

/// Abstract simplicial complex closed under faces.
///
/// Simplices are enumerated canonically: by dimension, then by the
/// lexicographic order of their strictly increasing vertex tuples. The
/// 0-simplex {v} therefore has id v, and every simplex id is larger than the
/// ids of all its proper faces.
class SimplicialComplex {
public:
    SimplicialComplex() = default;

    /// Builds the closure of `cells` over the vertex set {0, ..., num_vertices-1}.
    /// Every vertex is a 0-simplex even when no cell references it. Throws
    /// ValidationError on dangling vertex ids, repeated vertices inside a cell
    /// or a cell listed twice.
    static SimplicialComplex from_cells(std::size_t num_vertices,
                                        const std::vector<std::vector<VertexId>>& cells,
                                        std::vector<std::vector<double>> coordinates = {});

    std::size_t num_vertices() const { return num_vertices_; }
    std::size_t size() const { return offset_.empty() ? 0 : offset_.size() - 1; }

    /// Top dimension, -1 for the empty complex.
    int dimension() const { return static_cast<int>(dim_begin_.size()) - 2; }
    std::size_t count(int dim) const;
    SimplexId first_of_dim(int dim) const { return dim_begin_[static_cast<std::size_t>(dim)]; }

    int dim_of(SimplexId s) const
    {
        return static_cast<int>(offset_[static_cast<std::size_t>(s) + 1] -
                                offset_[static_cast<std::size_t>(s)]) - 1;
    }

    std::span<const VertexId> vertices_of(SimplexId s) const
    {
        auto i = static_cast<std::size_t>(s);
        return {verts_.data() + offset_[i], offset_[i + 1] - offset_[i]};
    }

    /// Codimension-one faces; entry i omits the i-th vertex. Empty for vertices.
    std::span<const SimplexId> facets_of(SimplexId s) const
    {
        if (dim_of(s) == 0)
            return {};
        auto i = static_cast<std::size_t>(s);
        return {facets_.data() + offset_[i], offset_[i + 1] - offset_[i]};
    }

    /// Lookup by strictly increasing vertex tuple.
    std::optional<SimplexId> find(std::span<const VertexId> sorted_vertices) const;

    /// Simplices that are not a proper face of another simplex, in id order.
    std::vector<SimplexId> maximal_simplices() const;

    long euler_characteristic() const;

    /// Embedding coordinates, one row per vertex; empty when the complex is abstract.
    const std::vector<std::vector<double>>& coordinates() const { return coordinates_; }
    std::size_t embedding_dimension() const
    {
        return coordinates_.empty() ? 0 : coordinates_.front().size();
    }

    bool operator==(const SimplicialComplex& other) const
    {
        return num_vertices_ == other.num_vertices_ && offset_ == other.offset_ &&
               verts_ == other.verts_;
    }

private:
    std::size_t num_vertices_ = 0;
    std::vector<SimplexId> dim_begin_; // dimension d occupies [dim_begin_[d], dim_begin_[d+1])
    std::vector<std::size_t> offset_;  // simplex s occupies [offset_[s], offset_[s+1]) of verts_/facets_
    std::vector<VertexId> verts_;
    std::vector<SimplexId> facets_;
    std::vector<std::vector<double>> coordinates_;
};

/// Rounds to `precision` fractional decimal digits.
double quantize(double x, int precision);

/// Vector-valued function on the vertices of a complex, stored row-major.
class VertexFunction {
public:
    VertexFunction() = default;

    /// `values` holds num_vertices rows of `components` entries. When
    /// `quantize_values` is set every entry is rounded to `precision` digits.
    VertexFunction(std::size_t components, std::vector<double> values,
                   int precision = kDefaultPrecision, bool quantize_values = true);

    std::size_t components() const { return k_; }
    std::size_t size() const { return k_ == 0 ? 0 : values_.size() / k_; }
    int precision() const { return precision_; }

    std::span<const double> operator[](VertexId v) const
    {
        return {values_.data() + static_cast<std::size_t>(v) * k_, k_};
    }
    double at(VertexId v, std::size_t j) const { return values_[static_cast<std::size_t>(v) * k_ + j]; }
    const std::vector<double>& data() const { return values_; }

    /// Single-component function holding component j.
    VertexFunction component(std::size_t j) const;

    std::vector<double> component_min() const;
    std::vector<double> component_max() const;

    bool operator==(const VertexFunction& other) const
    {
        return k_ == other.k_ && values_ == other.values_;
    }

private:
    std::size_t k_ = 0;
    int precision_ = kDefaultPrecision;
    std::vector<double> values_;
};

/// Per-component affine rescale onto [0,1], requantized at the input precision.
/// Throws ConstantComponentError if a component is constant.
VertexFunction normalize(const VertexFunction& function);

/// A complex paired with a function on its vertex set. Immutable; the complex
/// is shared so that many functions can sit on one triangulation.
class MeshWithFunction {
public:
    MeshWithFunction(std::shared_ptr<const SimplicialComplex> complex, VertexFunction function);
    MeshWithFunction(SimplicialComplex complex, VertexFunction function);

    const SimplicialComplex& complex() const { return *complex_; }
    const VertexFunction& function() const { return function_; }
    const std::shared_ptr<const SimplicialComplex>& shared_complex() const { return complex_; }
    std::size_t components() const { return function_.components(); }

    MeshWithFunction with_function(VertexFunction function) const
    {
        return {complex_, std::move(function)};
    }

private:
    std::shared_ptr<const SimplicialComplex> complex_;
    VertexFunction function_;
};

/// Reads the VOFF text format. Lower faces are synthesized from the listed
/// cells and function values are quantized to `precision` digits.
MeshWithFunction read_voff(std::istream& in, int precision = kDefaultPrecision);
MeshWithFunction load_voff(const std::filesystem::path& path, int precision = kDefaultPrecision);

/// Writes maximal simplices as cells, all reals with exactly `precision` digits.
void write_voff(std::ostream& out, const MeshWithFunction& mesh);
void save_voff(const std::filesystem::path& path, const MeshWithFunction& mesh);

enum class Interpolant { linear, axiswise };

/// First barycentric subdivision. The new vertex of simplex s gets id s, so
/// original vertices keep their ids and values; the others take the chosen
/// interpolant's value at the barycenter. Values are not requantized.
MeshWithFunction barycentric_subdivide(const MeshWithFunction& mesh, Interpolant mode);

} // namespace axw
