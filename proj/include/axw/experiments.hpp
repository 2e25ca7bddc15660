#pragma once

#include "axw/interp.hpp"
#include "axw/matchdist.hpp"
#include "axw/mesh.hpp"
#include "axw/persistence.hpp"

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace axw {

inline constexpr int kFourierTerms = 6;

/// Trigonometric polynomial sum_{k=1..6} c_k cos(k t) + s_k sin(k t).
struct FourierSeries {
    std::array<double, kFourierTerms> cos_coeffs{};
    std::array<double, kFourierTerms> sin_coeffs{};

    double operator()(double t) const;
    /// Same value from precomputed cos(k t) and sin(k t), k = 1..6.
    double from_harmonics(const double* cos_kt, const double* sin_kt) const;
    /// Fills cos(k t) and sin(k t) for k = 1..6.
    static void harmonics(double t, double* cos_kt, double* sin_kt);
    /// Global minimum and maximum over one period: `samples` equally spaced
    /// probes, each local extremum candidate then polished by Brent's method.
    std::pair<double, double> extrema(int samples = 4096) const;
};

/// Random coefficients for one function. Per component c = 0, 1 the draw
/// order is alpha[c][0..5], beta[c][0..5], then for the torus gamma[c][0..5],
/// delta[c][0..5]; every entry is uniform in [-1, 1).
struct FourierCoefficients {
    std::array<std::array<double, kFourierTerms>, 2> alpha{};
    std::array<std::array<double, kFourierTerms>, 2> beta{};
    std::array<std::array<double, kFourierTerms>, 2> gamma{};
    std::array<std::array<double, kFourierTerms>, 2> delta{};

    /// Draws from stream `stream` of `seed` (one stream per sample index).
    static FourierCoefficients draw(std::uint64_t seed, std::uint64_t stream, bool torus);
};

/// Evaluates a function at the points 2 pi (i_1/n_1, ..., i_d/n_d) of a
/// fixed regular grid, addressed by integer index.
class GridEvaluator {
public:
    virtual ~GridEvaluator() = default;
    /// index[c] lies in [0, n_c).
    virtual void evaluate(const std::int64_t* index, double* out) const = 0;
};

/// Normalized function on a parameter box [0, 2pi)^d, periodic in every
/// parameter, with values in R^2.
class ParametricFunction {
public:
    virtual ~ParametricFunction() = default;
    virtual std::size_t parameters() const = 0;
    static constexpr std::size_t components() { return 2; }
    /// Writes both normalized components of f(param) to out.
    virtual void evaluate(const double* param, double* out) const = 0;
    static double period();
    /// Tabulated evaluator on the grid with points_per_period[c] points along
    /// parameter c, or null when direct evaluation is as cheap.
    virtual std::unique_ptr<GridEvaluator> grid_evaluator(const std::vector<std::size_t>& points_per_period) const
    {
        (void)points_per_period;
        return nullptr;
    }
};

/// f(t) = normalized (A_0(t), A_1(t)). With `independent` unset the second
/// component reuses the first component's cosine coefficients; set, it uses
/// its own.
class CircleFunction : public ParametricFunction {
public:
    CircleFunction(const FourierCoefficients& coeffs, bool independent = false);
    CircleFunction(const std::array<FourierSeries, 2>& series);

    std::size_t parameters() const override { return 1; }
    void evaluate(const double* param, double* out) const override;
    double raw(std::size_t component, double t) const { return series_[component](t); }
    const std::array<FourierSeries, 2>& series() const { return series_; }
    const std::array<double, 2>& raw_min() const { return lo_; }
    const std::array<double, 2>& raw_max() const { return hi_; }

private:
    std::array<FourierSeries, 2> series_;
    std::array<double, 2> lo_{}, hi_{};
};

/// f(t, u) = normalized (A_c(t) * (2 + B_c(u) / 2))_{c=0,1}.
class TorusFunction : public ParametricFunction {
public:
    explicit TorusFunction(const FourierCoefficients& coeffs);
    TorusFunction(const std::array<FourierSeries, 2>& a, const std::array<FourierSeries, 2>& b);

    std::size_t parameters() const override { return 2; }
    void evaluate(const double* param, double* out) const override;
    /// Tabulates each factor along its own axis.
    std::unique_ptr<GridEvaluator> grid_evaluator(const std::vector<std::size_t>& points_per_period) const override;
    double raw(std::size_t component, double t, double u) const;
    const std::array<double, 2>& raw_min() const { return lo_; }
    const std::array<double, 2>& raw_max() const { return hi_; }

private:
    void normalize_range();

    std::array<FourierSeries, 2> a_, b_;
    std::array<double, 2> lo_{}, hi_{};
};

/// Throws ConstantComponentError when a component is constant.
CircleFunction circle_function(std::uint64_t seed, std::uint64_t stream = 0, bool independent = false);
TorusFunction torus_function(std::uint64_t seed, std::uint64_t stream = 0);

/// Cycle on 2^N vertices at t_i = 2 pi i / 2^N; the coordinate of a vertex is t_i.
std::shared_ptr<const SimplicialComplex> circle_complex(int N);
/// Torus grid with 2^N x 2^(N-2) vertices (t_i, u_j), vertex id i * 2^(N-2) + j,
/// and the two triangle families (i,j),(i+1,j),(i+1,j+1) and (i,j),(i,j+1),(i+1,j+1)
/// with indices taken cyclically. Coordinates are (t_i, u_j). Requires N >= 4.
std::shared_ptr<const SimplicialComplex> torus_complex(int N);

/// Samples f at the vertex coordinates of `complex`.
MeshWithFunction sample_function(std::shared_ptr<const SimplicialComplex> complex, const ParametricFunction& f);
MeshWithFunction sample_circle(const CircleFunction& f, int N);
MeshWithFunction sample_torus(const TorusFunction& f, int N);

/// Max of the componentwise |interp - f| over the barycentric lattice points
/// (weights in multiples of 1/resolution) of every simplex.
/// Vertex coordinates are read as parameters of f and unwrapped per simplex.
double sup_error(const AxiswiseInterpolant& interp, const ParametricFunction& f, int resolution,
                 const std::vector<std::size_t>& grid = {});
double sup_error(const MeshWithFunction& mesh, const ParametricFunction& f, int resolution,
                 const std::vector<std::size_t>& grid = {});

struct SupErrorOptions {
    int start_resolution = 0; ///< 0 picks 64 for edges and 6 for higher simplices
    double tolerance = 1e-4;
    int max_resolution = 1024;
    /// When set, vertex coordinates lie on the grid 2 pi i / grid[c]; lattice
    /// points are then addressed exactly on the refined grid and f may be
    /// evaluated through its grid evaluator.
    std::vector<std::size_t> grid;
};

/// sup_error with the resolution doubled until the estimate changes by less
/// than the tolerance (or the cap is reached); returns the finest estimate.
double converged_sup_error(const AxiswiseInterpolant& interp, const ParametricFunction& f,
                           const SupErrorOptions& options = {});

struct ExperimentOptions {
    std::size_t samples = 100;
    std::vector<int> Ns;
    std::uint64_t seed = 0;
    bool independent_coeffs = false;
    unsigned threads = 1;
    /// Simplex counts are reported as a percentage of the count at this N.
    int reference_N = 10;
    SupErrorOptions sup{};
};

struct ExperimentRow {
    int N = 0;
    double percent_kept = 0.0;
    std::size_t samples = 0;
    double mu = 0.0;
    double sigma = 0.0; ///< population standard deviation
    double mu_plus_sigma = 0.0;
    double frac_within_bound = 0.0; ///< share of samples with error <= mu + sigma
    std::vector<double> errors;     ///< per-sample sup errors in sample order
};

struct ExperimentReport {
    std::string name;
    std::vector<ExperimentRow> rows;

    /// Columns N,percent_kept,samples,mu,sigma,mu_plus_sigma,frac_within_bound.
    void write_csv(std::ostream& out) const;
};

ExperimentReport run_circle_experiment(const ExperimentOptions& options);
ExperimentReport run_torus_experiment(const ExperimentOptions& options);

/// Simplex count of the circle / torus triangulation at N.
std::size_t circle_simplex_count(int N);
std::size_t torus_simplex_count(int N);

/// Summary statistics of one row from per-sample errors.
ExperimentRow summarize(int N, double percent_kept, std::vector<double> errors);

/// One-parameter matching distance of the sublevel filtrations of a single
/// component on two meshes.
double component_matching_distance(const MeshWithFunction& a, const MeshWithFunction& b, std::size_t component,
                                   int degree, const FieldPrime& field = FieldPrime());

struct AliasingRow {
    int degree = 0;
    std::string measure; ///< "f1", "f2" (one-parameter rows) or "2d"
    double epsilon = 0.0; ///< 0 for one-parameter rows
    double nonsub = 0.0;
    double linear = 0.0;
    double axiswise = 0.0;
    double diff = 0.0;         ///< linear - nonsub
    double percent_diff = 0.0; ///< 100 * diff / min(nonsub, linear)
};

struct AliasingOptions {
    std::vector<double> epsilons{1.125, 0.5625, 0.28125};
    std::vector<int> degrees{1, 0};
    FieldPrime field{};
    unsigned threads = 1;
    bool allow_unnormalized = false;
};

/// Distances between the two meshes, between their linear subdivisions and
/// between their axis-wise subdivisions. For each degree: one row per
/// component, then one row per epsilon.
std::vector<AliasingRow> run_aliasing_protocol(const MeshWithFunction& a, const MeshWithFunction& b,
                                               const AliasingOptions& options = {});
void write_aliasing_csv(std::ostream& out, const std::vector<AliasingRow>& rows);

/// Reads an OFF surface (3D coordinates, polygonal faces fan-triangulated).
SimplicialComplex read_off(std::istream& in);
SimplicialComplex load_off(const std::string& path);

/// Two measuring functions from the principal vector of a 3D triangle mesh:
/// 1 - dist(v, d) / max dist(., d) and 1 - dist(v, pi) / max dist(., pi),
/// where d is the line and pi the plane through the area-weighted centre of
/// mass with the principal vector as direction and normal respectively.
MeshWithFunction principal_measure(const SimplicialComplex& complex, int precision = kDefaultPrecision);

/// Formats a number for CSV output; infinities print as inf / -inf.
std::string format_number(double x);

} // namespace axw
