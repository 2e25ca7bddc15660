#include "axw/error.hpp"
#include "axw/matchdist.hpp"
#include "support/bottleneck_oracle.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

#include <cmath>

using namespace axw;

TEST_CASE("one-dimensional matching distance")
{
    PersistenceDiagram d{0, {{0, 1}, {0.2, 0.5}}, {0.1}, 0};
    CHECK(matching_distance_1d(d, d) == 0.0);
    PersistenceDiagram one{0, {{0, 1}}, {}, 0}, none{0, {}, {}, 0};
    CHECK(matching_distance_1d(one, none) == 0.5);
    PersistenceDiagram e0{0, {}, {0}, 0}, e3{0, {}, {0.3}, 0}, e00{0, {}, {0, 0}, 0};
    CHECK(matching_distance_1d(e0, e3) == doctest::Approx(0.3));
    CHECK(std::isinf(matching_distance_1d(e00, e0)));
    PersistenceDiagram other{1, {}, {}, 0};
    CHECK_THROWS_AS(matching_distance_1d(none, other), DomainError);
    CHECK(point_cost({0, 1}, {0.1, 0.95}) == doctest::Approx(0.1));
    CHECK(point_cost({0, 0.1}, {5, 5.2}) == doctest::Approx(0.1));
}

TEST_CASE("bottleneck agrees with brute force")
{
    auto rng = Xoshiro256(77);
    for (int i = 0; i < 300; ++i) {
        auto ess = rng() % 3;
        auto a = test::random_diagram(rng, 5, ess);
        auto b = test::random_diagram(rng, 5, ess);
        CHECK(matching_distance_1d(a, b) == doctest::Approx(test::brute_force_bottleneck(a, b)).epsilon(1e-12));
    }
}

TEST_CASE("metric axioms on random diagrams")
{
    auto rng = Xoshiro256(78);
    for (int i = 0; i < 500; ++i) {
        auto a = test::random_diagram(rng, 5, 1);
        auto b = test::random_diagram(rng, 5, 1);
        auto c = test::random_diagram(rng, 5, 1);
        double ab = matching_distance_1d(a, b), ba = matching_distance_1d(b, a);
        CHECK(ab == ba);
        CHECK(matching_distance_1d(a, a) == 0.0);
        CHECK(matching_distance_1d(a, c) <= ab + matching_distance_1d(b, c) + 1e-9);
    }
}

TEST_CASE("lattice of admissible pairs")
{
    auto g = GridSpec::for_tolerance(9.0 / 8);
    CHECK(g.refinement == 4);
    CHECK(g.lattice_size() == 512);
    auto pairs = g.pairs();
    CHECK(pairs.size() == 514);
    CHECK(pairs.front() == std::pair<double, double>{1.0 / 32, 31.0 / 32});
    CHECK(pairs[512] == std::pair<double, double>{0.5, 2.0});
    CHECK(pairs[513] == std::pair<double, double>{0.5, -2.0});
    CHECK(GridSpec::for_tolerance(9.0 / 16).refinement == 5);
    CHECK(GridSpec::for_tolerance(9.0 / 32).refinement == 6);
    CHECK(GridSpec::for_tolerance(1.0).refinement == 5);
    CHECK_THROWS_AS(GridSpec::for_tolerance(0.0), DomainError);
}

TEST_CASE("rescaled distance")
{
    auto mesh = test::tetrahedron();
    auto r = rescaled_distance(mesh, mesh, AdmissiblePair::planar(0.3, 0.1), {0, 1});
    CHECK(r.combined == 0.0);

    auto lin = barycentric_subdivide(mesh, Interpolant::linear);
    // line through alpha = (0.75, 0.5) with direction (1/2, 1/2)
    auto pair = AdmissiblePair::planar(0.5, 0.125);
    auto d = rescaled_distance(mesh, lin, pair, {1});
    CHECK(d.per_degree_1d[0] > 0.0);
    CHECK(d.per_degree_rescaled[0] == doctest::Approx(0.5 * d.per_degree_1d[0]));
}

TEST_CASE("approximate distance basics")
{
    auto corpus = test::corpus(3);
    auto r = approx_matching_distance(corpus[0], corpus[0], 9.0 / 8);
    CHECK(r.value == 0.0);
    CHECK(r.refinement == 4);
    CHECK(r.certified);

    // a loop and a path differ in H_1 on every line
    MeshWithFunction loop{SimplicialComplex::from_cells(3, {{0, 1}, {1, 2}, {0, 2}}),
                          VertexFunction(2, {0, 0, 1, 0.5, 0.5, 1})};
    MeshWithFunction path{SimplicialComplex::from_cells(3, {{0, 1}, {1, 2}}), VertexFunction(2, {0, 0, 1, 0.5, 0.5, 1})};
    MatchOptions h1;
    h1.degrees = {1};
    CHECK(std::isinf(approx_matching_distance(loop, path, 9.0 / 8, h1).value));

    MeshWithFunction wide{SimplicialComplex::from_cells(2, {{0, 1}}), VertexFunction(2, {0, 0, 2, 1})};
    CHECK_THROWS_AS(approx_matching_distance(wide, wide, 1.0), DomainError);
    MatchOptions loose;
    loose.allow_unnormalized = true;
    CHECK(!approx_matching_distance(wide, wide, 1.0, loose).certified);
    MeshWithFunction k1{SimplicialComplex::from_cells(2, {{0, 1}}), VertexFunction(1, {0, 1})};
    CHECK_THROWS_AS(approx_matching_distance(k1, k1, 1.0), DomainError);
}

TEST_CASE("thread count does not change the result")
{
    auto corpus = test::corpus(4, 99);
    MatchOptions one, many;
    many.threads = 4;
    one.keep_trace = many.keep_trace = true;
    auto a = approx_matching_distance(corpus[1], corpus[2], 9.0 / 16, one);
    auto b = approx_matching_distance(corpus[1], corpus[2], 9.0 / 16, many);
    CHECK(a.value == b.value);
    CHECK(a.argmax_a == b.argmax_a);
    CHECK(a.argmax_b == b.argmax_b);
    CHECK(a.trace.size() == b.trace.size());
}

TEST_CASE("grid refinement consistency")
{
    auto corpus = test::corpus(6, 31);
    for (std::size_t i = 0; i + 1 < corpus.size(); i += 2) {
        std::vector<double> d;
        for (int n : {4, 5, 6}) {
            MatchOptions o;
            o.refinement = n;
            d.push_back(approx_matching_distance(corpus[i], corpus[i + 1], 1.0, o).value);
        }
        if (std::isinf(d[0])) {
            CHECK(std::isinf(d[1]));
            CHECK(std::isinf(d[2]));
            continue;
        }
        CHECK(std::abs(d[0] - d[1]) <= 18.0 / 16);
        CHECK(std::abs(d[0] - d[2]) <= 18.0 / 16);
        CHECK(std::abs(d[1] - d[2]) <= 18.0 / 32);
    }
}

TEST_CASE("extra pairs exceed the grid maximum by at most the grid bound")
{
    auto corpus = test::corpus(4, 41);
    auto rng = Xoshiro256(5);
    auto r = approx_matching_distance(corpus[0], corpus[1], 9.0 / 8);
    if (std::isinf(r.value))
        return;
    for (int i = 0; i < 50; ++i) {
        double a = rng.uniform(0.001, 0.999), b = rng.uniform(-1, 1);
        auto extra = rescaled_distance(corpus[0], corpus[1], AdmissiblePair::planar(a, b), {0, 1}).combined;
        CHECK(extra <= r.value + 18.0 / 16 + 1e-12);
    }
}

TEST_CASE("stability under a uniform shift")
{
    auto mesh = test::corpus(1, 55)[0];
    auto values = mesh.function().data();
    for (std::size_t v = 0; v < values.size(); v += 2)
        values[v] += 0.03;
    auto shifted = mesh.with_function(VertexFunction(2, values));
    MatchOptions o;
    o.allow_unnormalized = true;
    CHECK(approx_matching_distance(mesh, shifted, 9.0 / 32, o).value <= 0.03 + 9.0 / 32);
}
