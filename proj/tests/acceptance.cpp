#include "axw/experiments.hpp"
#include "axw/filtration.hpp"
#include "axw/matchdist.hpp"
#include "axw/mesh.hpp"
#include "axw/persistence.hpp"
#include "support/bottleneck_oracle.hpp"
#include "support/corpus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

using namespace axw;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

unsigned worker_count()
{
    return std::max(1u, std::thread::hardware_concurrency());
}

bool strictly_below(const std::vector<double>& a, const std::vector<double>& b)
{
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] < b[i]))
            return false;
    return true;
}

std::string fmt(const char* pattern, double x)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, x);
    return buf;
}

// Distances computed separately may both be infinite; they then agree.
double difference(double x, double y)
{
    if (std::isinf(x) && std::isinf(y))
        return 0.0;
    return std::abs(x - y);
}

Outcome aliasing_tetrahedron()
{
    auto mesh = test::tetrahedron();
    std::vector<double> alpha{0.75, 0.5};
    auto b1 = [&](const MeshWithFunction& m) { return betti_numbers(sublevel(m, alpha), 1)[1]; };
    auto orig = b1(mesh);
    auto lin = b1(barycentric_subdivide(mesh, Interpolant::linear));
    auto ax = b1(barycentric_subdivide(mesh, Interpolant::axiswise));
    std::ostringstream d;
    d << "betti1 original=" << orig << " linear=" << lin << " axiswise=" << ax;
    return {orig == 0 && lin == 1 && ax == 0, d.str()};
}

Outcome subdivision_invariance()
{
    std::size_t checked = 0, mismatches = 0;
    for (const auto& mesh : test::corpus(30)) {
        auto sub = barycentric_subdivide(mesh, Interpolant::axiswise);
        auto lambda = lambda_set(mesh);
        int top = mesh.complex().dimension();
        for (const auto& a : lambda)
            for (const auto& b : lambda) {
                if (!strictly_below(a, b))
                    continue;
                auto x = discrete_rank_invariants(mesh, a, b, top);
                auto y = discrete_rank_invariants(sub, a, b, top);
                ++checked;
                mismatches += x != y;
            }
    }
    std::ostringstream d;
    d << checked << " (lambda, lambda') pairs on 30 meshes, " << mismatches << " mismatches";
    return {mismatches == 0 && checked > 0, d.str()};
}

Outcome oracle_equivalence()
{
    auto corpus = test::corpus(30);
    auto rng = Xoshiro256(2024);
    std::size_t checked = 0, mismatches = 0;
    for (int line = 0; line < 100; ++line) {
        const auto& mesh = corpus[static_cast<std::size_t>(line) % corpus.size()];
        auto pair = AdmissiblePair::planar(rng.uniform(0.02, 0.98), rng.uniform(-1, 1));
        int top = mesh.complex().dimension();
        auto D = compute_diagrams(build_scalar_filtration(mesh, scalar_reduce(mesh, pair)), top);
        for (int draw = 0; draw < 5; ++draw) {
            double s = rng.uniform(-1.5, 3), t = s + rng.uniform(0.01, 3);
            auto discrete = discrete_rank_invariants(mesh, pair.point(s), pair.point(t), top);
            for (int q = 0; q <= top; ++q) {
                ++checked;
                mismatches += rank_1d(D[static_cast<std::size_t>(q)], s, t) != discrete[static_cast<std::size_t>(q)];
            }
        }
    }
    std::ostringstream d;
    d << checked << " (line, s, t, degree) checks, " << mismatches << " mismatches";
    return {mismatches == 0, d.str()};
}

Outcome lambda_representatives()
{
    std::size_t checked = 0, failures = 0;
    for (const auto& mesh : test::corpus(30)) {
        auto lambda = lambda_set(mesh);
        auto cones = cone_set(mesh);
        std::vector<boost::dynamic_bitset<>> reps;
        for (const auto& l : lambda)
            reps.push_back(sublevel(mesh, l).members());
        for (int i = 0; i < 50; ++i)
            for (int j = 0; j < 50; ++j) {
                std::vector<double> alpha{(i + 0.5) / 50, (j + 0.5) / 50};
                auto K = sublevel(mesh, alpha);
                ++checked;
                if (K.empty()) {
                    // nothing to represent unless alpha is itself critical
                    failures += cones.contains(alpha);
                    continue;
                }
                failures += std::find(reps.begin(), reps.end(), K.members()) == reps.end();
            }
    }
    std::ostringstream d;
    d << checked << " grid levels on 30 meshes, " << failures << " without a representative";
    return {failures == 0, d.str()};
}

Outcome circle_table()
{
    ExperimentOptions o;
    o.samples = 2000;
    o.Ns = {4, 6, 9};
    o.independent_coeffs = true;
    o.threads = worker_count();
    auto report = run_circle_experiment(o);
    const double target[] = {0.346717, 0.101172, 0.013012}, tol[] = {0.02, 0.008, 0.002};
    Outcome out;
    for (std::size_t i = 0; i < 3; ++i) {
        const auto& r = report.rows[i];
        out.pass = out.pass && std::abs(r.mu - target[i]) <= tol[i];
        out.detail += "N=" + std::to_string(r.N) + " mu=" + fmt("%.6f", r.mu) + " ";
    }
    out.detail += "(independent coefficients, 2000 samples)";
    return out;
}

Outcome torus_table()
{
    ExperimentOptions o;
    o.samples = 500;
    o.Ns = {6, 9};
    o.threads = worker_count();
    auto report = run_torus_experiment(o);
    const double target[] = {0.178587, 0.025411}, tol[] = {0.01, 0.003};
    Outcome out;
    for (std::size_t i = 0; i < 2; ++i) {
        const auto& r = report.rows[i];
        out.pass = out.pass && std::abs(r.mu - target[i]) <= tol[i];
        out.detail += "N=" + std::to_string(r.N) + " mu=" + fmt("%.6f", r.mu) + " ";
    }
    out.detail += "(500 samples)";
    return out;
}

Outcome error_bound_sandwich()
{
    auto corpus = test::corpus(5, 1234);
    auto rng = Xoshiro256(77);
    Outcome out;
    double worst = 0.0;
    for (const auto& mesh : corpus) {
        auto other = test::perturbed(mesh, rng, 0.2, true);
        std::vector<double> d;
        for (int n : {4, 5, 6}) {
            MatchOptions o;
            o.refinement = n;
            o.threads = worker_count();
            d.push_back(approx_matching_distance(mesh, other, 1.0, o).value);
        }
        for (int i = 0; i < 2; ++i) {
            double gap = difference(d[static_cast<std::size_t>(i)], d[static_cast<std::size_t>(i) + 1]);
            double bound = 18.0 / std::ldexp(1.0, 4 + i);
            out.pass = out.pass && gap <= bound;
            worst = std::max(worst, gap / bound);
        }
    }
    out.detail = "5 pairs, largest gap / bound = " + fmt("%.4f", worst);
    return out;
}

Outcome discrete_stability()
{
    auto mesh = test::corpus(1, 4321)[0];
    auto rng = Xoshiro256(99);
    const double eps = 9.0 / 32;
    std::size_t violations = 0;
    double worst = 0.0;
    MatchOptions o;
    o.allow_unnormalized = true;
    o.threads = worker_count();
    for (int trial = 0; trial < 50; ++trial) {
        auto other = test::perturbed(mesh, rng, 0.05 - 1e-6, false);
        double eta = 0.0;
        for (std::size_t i = 0; i < other.function().data().size(); ++i)
            eta = std::max(eta, std::abs(other.function().data()[i] - mesh.function().data()[i]));
        double d = approx_matching_distance(mesh, other, eps, o).value;
        violations += !(eta <= 0.05 && d <= eta + eps);
        worst = std::max(worst, d);
    }
    std::ostringstream out;
    out << "50 perturbations, max dtilde = " << fmt("%.6f", worst) << ", bound 0.05 + 9/32, " << violations
        << " violations";
    return {violations == 0, out.str()};
}

Outcome bottleneck_oracle()
{
    auto rng = Xoshiro256(31337);
    std::size_t failures = 0;
    for (int i = 0; i < 1000; ++i) {
        auto ess = rng() % 3;
        auto a = test::random_diagram(rng, 6, ess);
        auto b = test::random_diagram(rng, 6, i % 10 == 0 ? (ess + 1) % 3 : ess);
        double fast = matching_distance_1d(a, b), slow = test::brute_force_bottleneck(a, b);
        failures += difference(fast, slow) > 1e-12;
    }
    return {failures == 0, "1000 diagram pairs, " + std::to_string(failures) + " disagreements"};
}

Outcome one_dimensional_immunity()
{
    auto corpus = test::corpus(30);
    auto rng = Xoshiro256(5);
    std::size_t checked = 0, mismatches = 0;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const auto& a = corpus[i];
        auto b = test::perturbed(a, rng, 0.3, true);
        MeshWithFunction models[3][2] = {
            {a, b},
            {barycentric_subdivide(a, Interpolant::linear), barycentric_subdivide(b, Interpolant::linear)},
            {barycentric_subdivide(a, Interpolant::axiswise), barycentric_subdivide(b, Interpolant::axiswise)}};
        int top = std::min(1, a.complex().dimension());
        for (std::size_t c = 0; c < 2; ++c)
            for (int q = 0; q <= top; ++q) {
                double d0 = component_matching_distance(models[0][0], models[0][1], c, q);
                double d1 = component_matching_distance(models[1][0], models[1][1], c, q);
                double d2 = component_matching_distance(models[2][0], models[2][1], c, q);
                ++checked;
                mismatches += !(d0 == d1 && d0 == d2);
            }
    }
    std::ostringstream d;
    d << checked << " single-component distances, " << mismatches << " differ across models";
    return {mismatches == 0, d.str()};
}

struct Criterion {
    int id;
    const char* name;
    std::function<Outcome()> run;
};

} // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria{
        {1, "topological aliasing on the tetrahedron", aliasing_tetrahedron},
        {2, "rank invariant unchanged by axis-wise subdivision", subdivision_invariance},
        {3, "line reduction matches the discrete rank invariant", oracle_equivalence},
        {4, "every sublevel is represented in Lambda", lambda_representatives},
        {5, "circle interpolation error table", circle_table},
        {6, "torus interpolation error table", torus_table},
        {7, "grid refinement sandwich", error_bound_sandwich},
        {8, "discrete stability under perturbation", discrete_stability},
        {9, "bottleneck distance against brute force", bottleneck_oracle},
        {10, "one-parameter distances immune to subdivision", one_dimensional_immunity},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i)
        selected.insert(std::stoi(argv[i]));

    int failed = 0;
    for (const auto& c : criteria) {
        if (!selected.empty() && !selected.count(c.id))
            continue;
        auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = c.run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] criterion %d: %s | %s | %.1f s\n", out.pass ? "PASS" : "FAIL", c.id, c.name,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        failed += !out.pass;
    }
    return failed == 0 ? 0 : 1;
}
