#include "axw/experiments.hpp"

#include "axw/error.hpp"
#include "axw/rng.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <functional>
#include <istream>
#include <map>
#include <mutex>
#include <numbers>
#include <ostream>
#include <set>
#include <sstream>
#include <thread>

namespace axw {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Minimizes h near each sampled local minimum and returns the smallest value found.
template <class H>
double periodic_minimum(const H& h, int samples)
{
    const double step = kTwoPi / samples;
    std::vector<double> probe(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        probe[static_cast<std::size_t>(i)] = h(step * i);
    double best = *std::min_element(probe.begin(), probe.end());
    constexpr int bits = std::numeric_limits<double>::digits / 2 + 4;
    for (int i = 0; i < samples; ++i) {
        double prev = probe[static_cast<std::size_t>((i + samples - 1) % samples)];
        double next = probe[static_cast<std::size_t>((i + 1) % samples)];
        double here = probe[static_cast<std::size_t>(i)];
        if (here <= prev && here <= next) {
            auto [x, fx] = boost::math::tools::brent_find_minima(h, step * (i - 1), step * (i + 1), bits);
            (void)x;
            best = std::min(best, fx);
        }
    }
    return best;
}

void run_parallel(std::size_t jobs, unsigned threads, const std::function<void(std::size_t)>& job)
{
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (std::size_t i = next++; i < jobs; i = next++)
                job(i);
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
            next = jobs;
        }
    };
    threads = std::max(1u, threads);
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
}

void check_range(const std::array<double, 2>& lo, const std::array<double, 2>& hi)
{
    for (std::size_t c = 0; c < 2; ++c)
        if (!(hi[c] - lo[c] > 1e-12))
            throw ConstantComponentError(c);
}

} // namespace

double FourierSeries::operator()(double t) const
{
    double c[kFourierTerms], s[kFourierTerms];
    harmonics(t, c, s);
    return from_harmonics(c, s);
}

void FourierSeries::harmonics(double t, double* cos_kt, double* sin_kt)
{
    const double c1 = std::cos(t), s1 = std::sin(t);
    cos_kt[0] = c1;
    sin_kt[0] = s1;
    for (int k = 1; k < kFourierTerms; ++k) {
        cos_kt[k] = cos_kt[k - 1] * c1 - sin_kt[k - 1] * s1;
        sin_kt[k] = sin_kt[k - 1] * c1 + cos_kt[k - 1] * s1;
    }
}

double FourierSeries::from_harmonics(const double* cos_kt, const double* sin_kt) const
{
    double sum = 0.0;
    for (std::size_t k = 0; k < kFourierTerms; ++k)
        sum += cos_coeffs[k] * cos_kt[k] + sin_coeffs[k] * sin_kt[k];
    return sum;
}

std::pair<double, double> FourierSeries::extrema(int samples) const
{
    if (samples < 3)
        throw DomainError("extremum search needs at least three probes");
    double lo = periodic_minimum([this](double t) { return (*this)(t); }, samples);
    double hi = -periodic_minimum([this](double t) { return -(*this)(t); }, samples);
    return {lo, hi};
}

FourierCoefficients FourierCoefficients::draw(std::uint64_t seed, std::uint64_t stream, bool torus)
{
    auto rng = Xoshiro256::for_stream(seed, stream);
    FourierCoefficients out;
    auto fill = [&](std::array<double, kFourierTerms>& a) {
        for (auto& x : a)
            x = rng.uniform(-1.0, 1.0);
    };
    for (std::size_t c = 0; c < 2; ++c) {
        fill(out.alpha[c]);
        fill(out.beta[c]);
        if (torus) {
            fill(out.gamma[c]);
            fill(out.delta[c]);
        }
    }
    return out;
}

double ParametricFunction::period()
{
    return kTwoPi;
}

CircleFunction::CircleFunction(const FourierCoefficients& coeffs, bool independent)
    : CircleFunction(std::array<FourierSeries, 2>{
          FourierSeries{coeffs.alpha[0], coeffs.beta[0]},
          FourierSeries{independent ? coeffs.alpha[1] : coeffs.alpha[0], coeffs.beta[1]}})
{
}

CircleFunction::CircleFunction(const std::array<FourierSeries, 2>& series) : series_(series)
{
    for (std::size_t c = 0; c < 2; ++c)
        std::tie(lo_[c], hi_[c]) = series_[c].extrema(4096);
    check_range(lo_, hi_);
}

void CircleFunction::evaluate(const double* param, double* out) const
{
    double ct[kFourierTerms], st[kFourierTerms];
    FourierSeries::harmonics(param[0], ct, st);
    for (std::size_t c = 0; c < 2; ++c)
        out[c] = (series_[c].from_harmonics(ct, st) - lo_[c]) / (hi_[c] - lo_[c]);
}

TorusFunction::TorusFunction(const FourierCoefficients& coeffs)
    : TorusFunction({FourierSeries{coeffs.alpha[0], coeffs.beta[0]}, FourierSeries{coeffs.alpha[1], coeffs.beta[1]}},
                    {FourierSeries{coeffs.gamma[0], coeffs.delta[0]}, FourierSeries{coeffs.gamma[1], coeffs.delta[1]}})
{
}

TorusFunction::TorusFunction(const std::array<FourierSeries, 2>& a, const std::array<FourierSeries, 2>& b)
    : a_(a), b_(b)
{
    normalize_range();
}

void TorusFunction::normalize_range()
{
    // The function is a product of a factor in t and a factor in u, so its
    // extremes are among the products of the factors' extremes.
    for (std::size_t c = 0; c < 2; ++c) {
        auto [a_lo, a_hi] = a_[c].extrema(512);
        auto [b_lo, b_hi] = b_[c].extrema(512);
        const double f_lo = 2.0 + 0.5 * b_lo, f_hi = 2.0 + 0.5 * b_hi;
        const double corners[] = {a_lo * f_lo, a_lo * f_hi, a_hi * f_lo, a_hi * f_hi};
        lo_[c] = *std::min_element(std::begin(corners), std::end(corners));
        hi_[c] = *std::max_element(std::begin(corners), std::end(corners));
    }
    check_range(lo_, hi_);
}

double TorusFunction::raw(std::size_t component, double t, double u) const
{
    return a_[component](t) * (2.0 + 0.5 * b_[component](u));
}

void TorusFunction::evaluate(const double* param, double* out) const
{
    double ct[kFourierTerms], st[kFourierTerms], cu[kFourierTerms], su[kFourierTerms];
    FourierSeries::harmonics(param[0], ct, st);
    FourierSeries::harmonics(param[1], cu, su);
    for (std::size_t c = 0; c < 2; ++c) {
        double v = a_[c].from_harmonics(ct, st) * (2.0 + 0.5 * b_[c].from_harmonics(cu, su));
        out[c] = (v - lo_[c]) / (hi_[c] - lo_[c]);
    }
}

namespace {

class TorusGrid : public GridEvaluator {
public:
    TorusGrid(const std::array<FourierSeries, 2>& a, const std::array<FourierSeries, 2>& b,
              const std::array<double, 2>& lo, const std::array<double, 2>& hi, std::size_t nt, std::size_t nu)
        : nt_(nt), nu_(nu), t_factor_(2 * nt), u_factor_(2 * nu)
    {
        for (std::size_t i = 0; i < nt; ++i)
            for (std::size_t c = 0; c < 2; ++c)
                t_factor_[2 * i + c] = a[c](kTwoPi * static_cast<double>(i) / static_cast<double>(nt));
        for (std::size_t j = 0; j < nu; ++j)
            for (std::size_t c = 0; c < 2; ++c)
                u_factor_[2 * j + c] = 2.0 + 0.5 * b[c](kTwoPi * static_cast<double>(j) / static_cast<double>(nu));
        for (std::size_t c = 0; c < 2; ++c) {
            lo_[c] = lo[c];
            inv_range_[c] = 1.0 / (hi[c] - lo[c]);
        }
    }

    void evaluate(const std::int64_t* index, double* out) const override
    {
        const auto i = static_cast<std::size_t>(index[0]), j = static_cast<std::size_t>(index[1]);
        for (std::size_t c = 0; c < 2; ++c)
            out[c] = (t_factor_[2 * i + c] * u_factor_[2 * j + c] - lo_[c]) * inv_range_[c];
    }

private:
    std::size_t nt_, nu_;
    std::vector<double> t_factor_, u_factor_;
    std::array<double, 2> lo_{}, inv_range_{};
};

} // namespace

std::unique_ptr<GridEvaluator> TorusFunction::grid_evaluator(const std::vector<std::size_t>& points_per_period) const
{
    if (points_per_period.size() != 2)
        throw DimensionMismatch("torus grid needs two sizes");
    return std::make_unique<TorusGrid>(a_, b_, lo_, hi_, points_per_period[0], points_per_period[1]);
}

CircleFunction circle_function(std::uint64_t seed, std::uint64_t stream, bool independent)
{
    return CircleFunction(FourierCoefficients::draw(seed, stream, false), independent);
}

TorusFunction torus_function(std::uint64_t seed, std::uint64_t stream)
{
    return TorusFunction(FourierCoefficients::draw(seed, stream, true));
}

std::shared_ptr<const SimplicialComplex> circle_complex(int N)
{
    if (N < 2 || N > 24)
        throw DomainError("circle refinement must lie in 2..24");
    const auto n = std::size_t{1} << N;
    std::vector<std::vector<VertexId>> cells;
    std::vector<std::vector<double>> coords;
    for (std::size_t i = 0; i < n; ++i) {
        cells.push_back({static_cast<VertexId>(i), static_cast<VertexId>((i + 1) % n)});
        coords.push_back({kTwoPi * static_cast<double>(i) / static_cast<double>(n)});
    }
    return std::make_shared<const SimplicialComplex>(SimplicialComplex::from_cells(n, cells, std::move(coords)));
}

std::shared_ptr<const SimplicialComplex> torus_complex(int N)
{
    if (N < 4 || N > 14)
        throw DomainError("torus refinement must lie in 4..14");
    const std::size_t nt = std::size_t{1} << N, nu = std::size_t{1} << (N - 2);
    auto id = [&](std::size_t i, std::size_t j) { return static_cast<VertexId>((i % nt) * nu + (j % nu)); };
    std::vector<std::vector<VertexId>> cells;
    std::vector<std::vector<double>> coords(nt * nu);
    cells.reserve(2 * nt * nu);
    for (std::size_t i = 0; i < nt; ++i)
        for (std::size_t j = 0; j < nu; ++j) {
            coords[static_cast<std::size_t>(id(i, j))] = {kTwoPi * static_cast<double>(i) / static_cast<double>(nt),
                                                          kTwoPi * static_cast<double>(j) / static_cast<double>(nu)};
            cells.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            cells.push_back({id(i, j), id(i, j + 1), id(i + 1, j + 1)});
        }
    return std::make_shared<const SimplicialComplex>(
        SimplicialComplex::from_cells(nt * nu, cells, std::move(coords)));
}

MeshWithFunction sample_function(std::shared_ptr<const SimplicialComplex> complex, const ParametricFunction& f)
{
    if (complex->embedding_dimension() != f.parameters())
        throw DimensionMismatch("vertex coordinates do not match the function's parameters");
    std::vector<double> values(complex->num_vertices() * 2);
    for (std::size_t v = 0; v < complex->num_vertices(); ++v)
        f.evaluate(complex->coordinates()[v].data(), values.data() + 2 * v);
    return MeshWithFunction(std::move(complex), VertexFunction(2, std::move(values)));
}

MeshWithFunction sample_circle(const CircleFunction& f, int N)
{
    return sample_function(circle_complex(N), f);
}

MeshWithFunction sample_torus(const TorusFunction& f, int N)
{
    return sample_function(torus_complex(N), f);
}

namespace {

// Relative-interior lattice points {w : w_i = n_i / r, n_i >= 1, sum n_i = r}
// of a simplex with m vertices; `parts` holds the n_i, `weights` the w_i.
// With `fine_only`, points that also lie on the lattice of resolution r / 2
// are left out.
struct Lattice {
    std::vector<int> parts;
    std::vector<double> weights;
};

Lattice interior_lattice(std::size_t m, int r, bool fine_only)
{
    Lattice out;
    std::vector<int> parts(m, 0);
    std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
        if (i + 1 == m) {
            if (left < 1)
                return;
            parts[i] = left;
            if (fine_only && std::all_of(parts.begin(), parts.end(), [](int p) { return p % 2 == 0; }))
                return;
            for (int p : parts) {
                out.parts.push_back(p);
                out.weights.push_back(static_cast<double>(p) / r);
            }
            return;
        }
        for (int p = left - static_cast<int>(m - i - 1); p >= 1; --p) {
            parts[i] = p;
            rec(i + 1, left - p);
        }
    };
    rec(0, r);
    return out;
}

// Each point of the carrier lies in the relative interior of exactly one
// simplex, so scanning interiors visits every lattice point once.
double lattice_max(const AxiswiseInterpolant& interp, const ParametricFunction& f, int resolution, bool fine_only,
                   const std::vector<std::size_t>& grid)
{
    if (resolution < 1)
        throw DomainError("sampling resolution must be positive");
    const auto& mesh = interp.mesh();
    const auto& K = mesh.complex();
    const std::size_t P = f.parameters();
    if (K.embedding_dimension() != P)
        throw DimensionMismatch("vertex coordinates do not match the function's parameters");
    if (mesh.components() != ParametricFunction::components())
        throw DimensionMismatch("the mesh function must have two components");
    if (!grid.empty() && grid.size() != P)
        throw DimensionMismatch("grid needs one size per parameter");
    const double period = ParametricFunction::period();
    const auto& coords = K.coordinates();
    const bool on_grid = !grid.empty();

    // Integer grid positions of the vertices.
    std::vector<std::int64_t> vertex_index;
    std::vector<std::int64_t> fine(P);
    std::unique_ptr<GridEvaluator> tabulated;
    if (on_grid) {
        vertex_index.resize(K.num_vertices() * P);
        for (std::size_t v = 0; v < K.num_vertices(); ++v)
            for (std::size_t c = 0; c < P; ++c) {
                const auto n = static_cast<std::int64_t>(grid[c]);
                double q = coords[v][c] * static_cast<double>(n) / period;
                auto i = std::llround(q);
                if (std::abs(q - static_cast<double>(i)) > 1e-6)
                    throw DomainError("vertex coordinates are not on the declared grid");
                vertex_index[v * P + c] = ((i % n) + n) % n;
            }
        std::vector<std::size_t> sizes(P);
        for (std::size_t c = 0; c < P; ++c) {
            fine[c] = static_cast<std::int64_t>(grid[c]) * resolution;
            sizes[c] = static_cast<std::size_t>(fine[c]);
        }
        tabulated = f.grid_evaluator(sizes);
    }

    std::vector<Lattice> lattices(static_cast<std::size_t>(std::max(K.dimension(), 0)) + 2);
    for (std::size_t m = 1; m < lattices.size(); ++m)
        lattices[m] = interior_lattice(m, resolution, fine_only);

    std::vector<double> param(P), unwrapped, fv(2), iv(2);
    std::vector<std::int64_t> local, index(P);
    double worst = 0.0;
    for (SimplexId s = 0; s < static_cast<SimplexId>(K.size()); ++s) {
        auto vs = K.vertices_of(s);
        const std::size_t m = vs.size();
        const auto& lattice = lattices[m];
        if (lattice.parts.empty())
            continue;

        if (on_grid) {
            local.assign(m * P, 0);
            const auto v0 = static_cast<std::size_t>(vs[0]);
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t c = 0; c < P; ++c) {
                    const auto n = static_cast<std::int64_t>(grid[c]);
                    std::int64_t base = vertex_index[v0 * P + c];
                    std::int64_t d = vertex_index[static_cast<std::size_t>(vs[i]) * P + c] - base;
                    if (2 * d > n)
                        d -= n;
                    else if (2 * d < -n)
                        d += n;
                    local[i * P + c] = base + d;
                }
        } else {
            unwrapped.assign(m * P, 0.0);
            const auto& base = coords[static_cast<std::size_t>(vs[0])];
            for (std::size_t i = 0; i < m; ++i)
                for (std::size_t c = 0; c < P; ++c) {
                    double x = coords[static_cast<std::size_t>(vs[i])][c];
                    x -= period * std::round((x - base[c]) / period);
                    unwrapped[i * P + c] = x;
                }
        }

        for (std::size_t at = 0; at < lattice.parts.size(); at += m) {
            const double* w = lattice.weights.data() + at;
            if (on_grid) {
                const int* n = lattice.parts.data() + at;
                for (std::size_t c = 0; c < P; ++c) {
                    std::int64_t sum = 0;
                    for (std::size_t i = 0; i < m; ++i)
                        sum += n[i] * local[i * P + c];
                    // local indices stay within half a period of the base vertex
                    if (sum < 0)
                        sum += fine[c];
                    else if (sum >= fine[c])
                        sum -= fine[c];
                    index[c] = sum;
                }
                if (tabulated) {
                    tabulated->evaluate(index.data(), fv.data());
                } else {
                    for (std::size_t c = 0; c < P; ++c)
                        param[c] = period * static_cast<double>(index[c]) / static_cast<double>(fine[c]);
                    f.evaluate(param.data(), fv.data());
                }
            } else {
                std::fill(param.begin(), param.end(), 0.0);
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t c = 0; c < P; ++c)
                        param[c] += w[i] * unwrapped[i * P + c];
                f.evaluate(param.data(), fv.data());
            }
            interp.evaluate(s, std::span<const double>(w, m), iv);
            for (std::size_t c = 0; c < 2; ++c)
                worst = std::max(worst, std::abs(iv[c] - fv[c]));
        }
    }
    return worst;
}

} // namespace

double sup_error(const AxiswiseInterpolant& interp, const ParametricFunction& f, int resolution,
                 const std::vector<std::size_t>& grid)
{
    return lattice_max(interp, f, resolution, false, grid);
}

double sup_error(const MeshWithFunction& mesh, const ParametricFunction& f, int resolution,
                 const std::vector<std::size_t>& grid)
{
    return sup_error(AxiswiseInterpolant(mesh), f, resolution, grid);
}

double converged_sup_error(const AxiswiseInterpolant& interp, const ParametricFunction& f,
                           const SupErrorOptions& options)
{
    int r = options.start_resolution;
    if (r <= 0)
        r = interp.mesh().complex().dimension() <= 1 ? 64 : 6;
    double estimate = sup_error(interp, f, r, options.grid);
    while (2 * r <= options.max_resolution) {
        r *= 2;
        double finer = std::max(estimate, lattice_max(interp, f, r, true, options.grid));
        bool settled = finer - estimate < options.tolerance;
        estimate = finer;
        if (settled)
            break;
    }
    return estimate;
}

std::size_t circle_simplex_count(int N)
{
    return 2 * (std::size_t{1} << N);
}

std::size_t torus_simplex_count(int N)
{
    return 6 * (std::size_t{1} << N) * (std::size_t{1} << (N - 2));
}

ExperimentRow summarize(int N, double percent_kept, std::vector<double> errors)
{
    ExperimentRow row;
    row.N = N;
    row.percent_kept = percent_kept;
    row.samples = errors.size();
    if (errors.empty())
        return row;
    double sum = 0.0;
    for (double e : errors)
        sum += e;
    row.mu = sum / static_cast<double>(errors.size());
    double sq = 0.0;
    for (double e : errors)
        sq += (e - row.mu) * (e - row.mu);
    row.sigma = std::sqrt(sq / static_cast<double>(errors.size()));
    row.mu_plus_sigma = row.mu + row.sigma;
    auto within = std::count_if(errors.begin(), errors.end(), [&](double e) { return e <= row.mu_plus_sigma; });
    row.frac_within_bound = static_cast<double>(within) / static_cast<double>(errors.size());
    row.errors = std::move(errors);
    return row;
}

namespace {

template <class MakeFunction>
ExperimentReport run_experiment(const std::string& name, const ExperimentOptions& options, int min_N,
                                std::shared_ptr<const SimplicialComplex> (*make_complex)(int),
                                std::size_t (*count)(int), std::vector<std::size_t> (*grid)(int),
                                const MakeFunction& make_function)
{
    if (options.samples < 1)
        throw DomainError("at least one sample is required");
    if (options.Ns.empty())
        throw DomainError("at least one refinement level is required");
    for (int N : options.Ns)
        if (N < min_N)
            throw DomainError(name + " experiment requires N >= " + std::to_string(min_N));

    std::vector<std::shared_ptr<const SimplicialComplex>> complexes;
    for (int N : options.Ns)
        complexes.push_back(make_complex(N));

    std::vector<std::vector<double>> errors(options.Ns.size(), std::vector<double>(options.samples));
    run_parallel(options.samples, options.threads, [&](std::size_t i) {
        const auto f = make_function(i);
        for (std::size_t n = 0; n < options.Ns.size(); ++n) {
            AxiswiseInterpolant interp(sample_function(complexes[n], f));
            SupErrorOptions sup = options.sup;
            sup.grid = grid(options.Ns[n]);
            errors[n][i] = converged_sup_error(interp, f, sup);
        }
    });

    ExperimentReport report;
    report.name = name;
    const double reference = static_cast<double>(count(options.reference_N));
    for (std::size_t n = 0; n < options.Ns.size(); ++n) {
        int N = options.Ns[n];
        report.rows.push_back(
            summarize(N, 100.0 * static_cast<double>(count(N)) / reference, std::move(errors[n])));
    }
    return report;
}

} // namespace

ExperimentReport run_circle_experiment(const ExperimentOptions& options)
{
    auto grid = [](int N) { return std::vector<std::size_t>{std::size_t{1} << N}; };
    return run_experiment("circle", options, 2, circle_complex, circle_simplex_count, +grid, [&](std::size_t i) {
        return circle_function(options.seed, i, options.independent_coeffs);
    });
}

ExperimentReport run_torus_experiment(const ExperimentOptions& options)
{
    auto grid = [](int N) { return std::vector<std::size_t>{std::size_t{1} << N, std::size_t{1} << (N - 2)}; };
    return run_experiment("torus", options, 4, torus_complex, torus_simplex_count, +grid,
                          [&](std::size_t i) { return torus_function(options.seed, i); });
}

std::string format_number(double x)
{
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    if (std::isnan(x))
        return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

void ExperimentReport::write_csv(std::ostream& out) const
{
    out << "N,percent_kept,samples,mu,sigma,mu_plus_sigma,frac_within_bound\n";
    for (const auto& r : rows)
        out << r.N << ',' << format_number(r.percent_kept) << ',' << r.samples << ',' << format_number(r.mu) << ','
            << format_number(r.sigma) << ',' << format_number(r.mu_plus_sigma) << ','
            << format_number(r.frac_within_bound) << '\n';
}

double component_matching_distance(const MeshWithFunction& a, const MeshWithFunction& b, std::size_t component,
                                   int degree, const FieldPrime& field)
{
    if (component >= a.components() || component >= b.components())
        throw DimensionMismatch("component index out of range");
    auto diagram = [&](const MeshWithFunction& m) {
        const auto values = m.function().component(component).data();
        return compute_diagrams(build_scalar_filtration(m, values), degree, field)[static_cast<std::size_t>(degree)];
    };
    return matching_distance_1d(diagram(a), diagram(b));
}

namespace {

void fill_differences(AliasingRow& row)
{
    row.diff = row.linear == row.nonsub ? 0.0 : row.linear - row.nonsub;
    const double base = std::min(row.nonsub, row.linear);
    if (row.diff == 0.0)
        row.percent_diff = 0.0;
    else if (base == 0.0 || std::isinf(row.diff))
        row.percent_diff = std::copysign(INFINITY, row.diff);
    else
        row.percent_diff = 100.0 * row.diff / base;
}

} // namespace

std::vector<AliasingRow> run_aliasing_protocol(const MeshWithFunction& a, const MeshWithFunction& b,
                                               const AliasingOptions& options)
{
    if (a.components() != b.components())
        throw DimensionMismatch("compared functions have different numbers of components");
    const std::array<MeshWithFunction, 3> as{a, barycentric_subdivide(a, Interpolant::linear),
                                             barycentric_subdivide(a, Interpolant::axiswise)};
    const std::array<MeshWithFunction, 3> bs{b, barycentric_subdivide(b, Interpolant::linear),
                                             barycentric_subdivide(b, Interpolant::axiswise)};

    std::vector<AliasingRow> rows;
    for (int q : options.degrees) {
        for (std::size_t c = 0; c < a.components(); ++c) {
            AliasingRow row;
            row.degree = q;
            row.measure = "f" + std::to_string(c + 1);
            double* out[] = {&row.nonsub, &row.linear, &row.axiswise};
            for (std::size_t m = 0; m < 3; ++m)
                *out[m] = component_matching_distance(as[m], bs[m], c, q, options.field);
            fill_differences(row);
            rows.push_back(row);
        }
        for (double eps : options.epsilons) {
            AliasingRow row;
            row.degree = q;
            row.measure = "2d";
            row.epsilon = eps;
            MatchOptions match;
            match.degrees = {q};
            match.field = options.field;
            match.threads = options.threads;
            match.allow_unnormalized = options.allow_unnormalized;
            double* out[] = {&row.nonsub, &row.linear, &row.axiswise};
            for (std::size_t m = 0; m < 3; ++m)
                *out[m] = approx_matching_distance(as[m], bs[m], eps, match).value;
            fill_differences(row);
            rows.push_back(row);
        }
    }
    return rows;
}

void write_aliasing_csv(std::ostream& out, const std::vector<AliasingRow>& rows)
{
    out << "degree,measure,epsilon,nonsub,linear,axiswise,diff,percent_diff\n";
    for (const auto& r : rows)
        out << r.degree << ',' << r.measure << ',' << (r.measure == "2d" ? format_number(r.epsilon) : "") << ','
            << format_number(r.nonsub) << ',' << format_number(r.linear) << ',' << format_number(r.axiswise) << ','
            << format_number(r.diff) << ',' << format_number(r.percent_diff) << '\n';
}

namespace {

// Next non-empty, non-comment line split into tokens.
bool next_tokens(std::istream& in, std::vector<std::string>& tokens)
{
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ss(line);
        tokens.clear();
        for (std::string t; ss >> t;)
            tokens.push_back(t);
        if (!tokens.empty())
            return true;
    }
    return false;
}

double to_double(const std::string& s)
{
    try {
        std::size_t used = 0;
        double x = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(x))
            throw ParseError("bad number '" + s + "'");
        return x;
    } catch (const std::logic_error&) {
        throw ParseError("bad number '" + s + "'");
    }
}

long to_integer(const std::string& s)
{
    try {
        std::size_t used = 0;
        long x = std::stol(s, &used);
        if (used != s.size())
            throw ParseError("bad integer '" + s + "'");
        return x;
    } catch (const std::logic_error&) {
        throw ParseError("bad integer '" + s + "'");
    }
}

} // namespace

SimplicialComplex read_off(std::istream& in)
{
    std::vector<std::string> tok;
    if (!next_tokens(in, tok) || tok[0] != "OFF")
        throw ParseError("OFF header expected");
    tok.erase(tok.begin());
    if (tok.empty() && !next_tokens(in, tok))
        throw ParseError("OFF counts expected");
    if (tok.size() < 2)
        throw ParseError("OFF counts line needs vertex and face counts");
    const long nv = to_integer(tok[0]), nf = to_integer(tok[1]);
    if (nv < 0 || nf < 0)
        throw ParseError("negative OFF counts");

    std::vector<std::vector<double>> coords;
    for (long v = 0; v < nv; ++v) {
        if (!next_tokens(in, tok) || tok.size() < 3)
            throw ParseError("OFF vertex line needs three coordinates");
        coords.push_back({to_double(tok[0]), to_double(tok[1]), to_double(tok[2])});
    }
    std::set<std::vector<VertexId>> cells;
    for (long f = 0; f < nf; ++f) {
        if (!next_tokens(in, tok))
            throw ParseError("missing OFF face line");
        const long n = to_integer(tok[0]);
        if (n < 1 || static_cast<long>(tok.size()) < n + 1)
            throw ParseError("OFF face line is too short");
        std::vector<VertexId> ids;
        for (long i = 1; i <= n; ++i) {
            long id = to_integer(tok[static_cast<std::size_t>(i)]);
            if (id < 0 || id >= nv)
                throw ValidationError("OFF face refers to a missing vertex");
            ids.push_back(static_cast<VertexId>(id));
        }
        auto add = [&](std::vector<VertexId> cell) {
            std::sort(cell.begin(), cell.end());
            if (std::adjacent_find(cell.begin(), cell.end()) == cell.end())
                cells.insert(std::move(cell));
        };
        if (n <= 3)
            add(ids);
        else
            for (long i = 1; i + 1 < n; ++i)
                add({ids[0], ids[static_cast<std::size_t>(i)], ids[static_cast<std::size_t>(i + 1)]});
    }
    return SimplicialComplex::from_cells(static_cast<std::size_t>(nv),
                                         std::vector<std::vector<VertexId>>(cells.begin(), cells.end()),
                                         std::move(coords));
}

SimplicialComplex load_off(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open " + path);
    return read_off(in);
}

MeshWithFunction principal_measure(const SimplicialComplex& complex, int precision)
{
    if (complex.embedding_dimension() != 3)
        throw DimensionMismatch("principal measure needs 3D vertex coordinates");
    using Vec = std::array<double, 3>;
    const auto& X = complex.coordinates();
    auto at = [&](VertexId v) {
        const auto& p = X[static_cast<std::size_t>(v)];
        return Vec{p[0], p[1], p[2]};
    };
    auto sub = [](Vec a, Vec b) { return Vec{a[0] - b[0], a[1] - b[1], a[2] - b[2]}; };
    auto dot = [](Vec a, Vec b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; };
    auto norm = [&](Vec a) { return std::sqrt(dot(a, a)); };

    Vec centre{0, 0, 0};
    double total = 0.0;
    if (complex.dimension() >= 2)
        for (std::size_t i = 0; i < complex.count(2); ++i) {
            auto vs = complex.vertices_of(complex.first_of_dim(2) + static_cast<SimplexId>(i));
            Vec a = at(vs[0]), b = at(vs[1]), c = at(vs[2]);
            Vec u = sub(b, a), w = sub(c, a);
            Vec cr{u[1] * w[2] - u[2] * w[1], u[2] * w[0] - u[0] * w[2], u[0] * w[1] - u[1] * w[0]};
            double area = 0.5 * norm(cr);
            for (std::size_t d = 0; d < 3; ++d)
                centre[d] += area * (a[d] + b[d] + c[d]) / 3.0;
            total += area;
        }
    if (total > 0.0) {
        for (auto& x : centre)
            x /= total;
    } else {
        for (VertexId v = 0; v < static_cast<VertexId>(complex.num_vertices()); ++v)
            for (std::size_t d = 0; d < 3; ++d)
                centre[d] += at(v)[d] / static_cast<double>(complex.num_vertices());
    }

    Vec direction{0, 0, 0};
    double weight = 0.0;
    for (VertexId v = 0; v < static_cast<VertexId>(complex.num_vertices()); ++v) {
        Vec r = sub(at(v), centre);
        double len = norm(r);
        for (std::size_t d = 0; d < 3; ++d)
            direction[d] += r[d] * len;
        weight += len * len;
    }
    double dlen = norm(direction);
    if (!(weight > 0.0) || !(dlen > 0.0))
        throw DomainError("principal vector vanishes");
    for (auto& x : direction)
        x /= dlen;

    const std::size_t n = complex.num_vertices();
    std::vector<double> to_line(n), to_plane(n);
    for (VertexId v = 0; v < static_cast<VertexId>(n); ++v) {
        Vec r = sub(at(v), centre);
        double along = dot(r, direction);
        to_plane[static_cast<std::size_t>(v)] = std::abs(along);
        to_line[static_cast<std::size_t>(v)] = std::sqrt(std::max(0.0, dot(r, r) - along * along));
    }
    double max_line = *std::max_element(to_line.begin(), to_line.end());
    double max_plane = *std::max_element(to_plane.begin(), to_plane.end());
    if (!(max_line > 0.0))
        throw ConstantComponentError(0);
    if (!(max_plane > 0.0))
        throw ConstantComponentError(1);
    std::vector<double> values(2 * n);
    for (std::size_t v = 0; v < n; ++v) {
        values[2 * v] = 1.0 - to_line[v] / max_line;
        values[2 * v + 1] = 1.0 - to_plane[v] / max_plane;
    }
    return MeshWithFunction(complex, VertexFunction(2, std::move(values), precision));
}

} // namespace axw
