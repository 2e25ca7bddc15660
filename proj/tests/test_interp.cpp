#include "axw/interp.hpp"
#include "axw/error.hpp"
#include "support/corpus.hpp"

#include <doctest.h>

using namespace axw;

namespace {

std::vector<double> random_weights(Xoshiro256& rng, std::size_t m)
{
    std::vector<double> w(m);
    double sum = 0.0;
    for (auto& x : w) {
        x = -std::log(1.0 - rng.uniform01());
        sum += x;
    }
    for (auto& x : w)
        x /= sum;
    return w;
}

SimplexId edge(const MeshWithFunction& mesh, VertexId a, VertexId b)
{
    std::vector<VertexId> e{a, b};
    return *mesh.complex().find(e);
}

bool dominated(const std::vector<double>& x, std::span<const double> bound)
{
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] > bound[j] + 1e-12)
            return false;
    return true;
}

} // namespace

TEST_CASE("mu on the tetrahedron")
{
    auto mesh = test::tetrahedron();
    CHECK(mu(mesh, edge(mesh, 1, 3)) == std::vector<double>{1, 1});
    CHECK(mu(mesh, 2) == std::vector<double>{0, 0});
    CHECK(mu(mesh, edge(mesh, 0, 2)) == std::vector<double>{0, 0});
}

TEST_CASE("distinguished points")
{
    auto mesh = test::tetrahedron();
    AxiswiseInterpolant interp(mesh);
    auto e13 = interp.data(edge(mesh, 1, 3));
    CHECK(e13.tau == edge(mesh, 1, 3));
    CHECK(std::vector<double>(e13.w.begin(), e13.w.end()) == std::vector<double>{0.5, 0.5});
    auto e02 = interp.data(edge(mesh, 0, 2));
    CHECK(e02.tau == 0);
    CHECK(std::vector<double>(e02.w.begin(), e02.w.end()) == std::vector<double>{1.0, 0.0});
    auto v = interp.data(3);
    CHECK(v.tau == 3);
    CHECK(v.w.size() == 1);
}

TEST_CASE("axis-wise evaluation on the tetrahedron")
{
    auto mesh = test::tetrahedron();
    AxiswiseInterpolant interp(mesh);
    auto s = edge(mesh, 1, 3);
    CHECK(interp.evaluate(CarrierPoint::vertex(1)) == std::vector<double>{1, 0});
    CHECK(interp.evaluate({s, {0.5, 0.5}}) == std::vector<double>{1, 1});
    auto q = interp.evaluate({s, {0.25, 0.75}});
    CHECK(q[0] == doctest::Approx(0.75));
    CHECK(q[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(interp.evaluate({s, {0.6, 0.6}}), DomainError);
    CHECK_THROWS_AS(interp.evaluate({s, {1.2, -0.2}}), DomainError);
    CHECK_THROWS_AS(interp.evaluate({s, {1.0}}), DomainError);
}

TEST_CASE("linear evaluation")
{
    auto mesh = test::tetrahedron();
    auto s = edge(mesh, 1, 3);
    auto m = evaluate_linear(mesh, {s, {0.5, 0.5}});
    CHECK(m[0] == doctest::Approx(0.75));
    CHECK(m[1] == doctest::Approx(0.5));
    std::vector<VertexId> tri{1, 2, 3};
    auto t = evaluate_linear(mesh, CarrierPoint::barycenter(mesh.complex(), *mesh.complex().find(tri)));
    CHECK(t[0] == doctest::Approx(0.5));
    CHECK(t[1] == doctest::Approx(1.0 / 3));
    CHECK(evaluate_linear(mesh, CarrierPoint::vertex(3)) == std::vector<double>{0.5, 1});
}

TEST_CASE("interpolant is bounded by mu and exact at vertices")
{
    auto rng = Xoshiro256(3);
    for (const auto& mesh : test::corpus(10)) {
        AxiswiseInterpolant interp(mesh);
        const auto& K = mesh.complex();
        for (VertexId v = 0; v < static_cast<VertexId>(K.num_vertices()); ++v) {
            auto p = CarrierPoint::vertex(v);
            auto phi = mesh.function()[v];
            CHECK(interp.evaluate(p) == std::vector<double>(phi.begin(), phi.end()));
            CHECK(evaluate_linear(mesh, p) == std::vector<double>(phi.begin(), phi.end()));
        }
        for (SimplexId s = 0; s < static_cast<SimplexId>(K.size()); ++s) {
            auto d = interp.data(s);
            std::vector<double> w(d.w.begin(), d.w.end());
            CHECK(interp.evaluate({s, w}) == std::vector<double>(d.mu.begin(), d.mu.end()));
            for (int i = 0; i < 100; ++i)
                CHECK(dominated(interp.evaluate({s, random_weights(rng, K.vertices_of(s).size())}), d.mu));
        }
    }
}

TEST_CASE("monotone along spokes")
{
    auto rng = Xoshiro256(5);
    for (const auto& mesh : test::corpus(6)) {
        AxiswiseInterpolant interp(mesh);
        const auto& K = mesh.complex();
        for (SimplexId s = K.first_of_dim(1); s < static_cast<SimplexId>(K.size()); ++s) {
            auto d = interp.data(s);
            auto m = K.vertices_of(s).size();
            // boundary point: random weights with one coordinate zeroed
            auto y = random_weights(rng, m);
            y[rng() % m] = 0.0;
            double sum = 0.0;
            for (double x : y)
                sum += x;
            for (auto& x : y)
                x /= sum;
            std::vector<double> prev;
            for (int step = 0; step <= 20; ++step) {
                double t = step / 20.0;
                std::vector<double> x(m);
                for (std::size_t i = 0; i < m; ++i)
                    x[i] = (1 - t) * y[i] + t * d.w[i];
                auto v = interp.evaluate({s, x});
                if (!prev.empty())
                    for (std::size_t j = 0; j < v.size(); ++j)
                        CHECK(v[j] >= prev[j] - 1e-12);
                prev = v;
            }
        }
    }
}

TEST_CASE("scalar functions: axis-wise equals linear")
{
    auto rng = Xoshiro256(9);
    for (const auto& mesh : test::corpus(6, 21)) {
        auto scalar = mesh.with_function(mesh.function().component(1));
        AxiswiseInterpolant interp(scalar);
        const auto& K = scalar.complex();
        for (int i = 0; i < 1000; ++i) {
            auto s = static_cast<SimplexId>(rng() % K.size());
            CarrierPoint p{s, random_weights(rng, K.vertices_of(s).size())};
            CHECK(interp.evaluate(p)[0] == doctest::Approx(evaluate_linear(scalar, p)[0]).epsilon(1e-9));
        }
    }
}

TEST_CASE("continuity across shared faces")
{
    auto rng = Xoshiro256(13);
    for (const auto& mesh : test::corpus(6, 5)) {
        AxiswiseInterpolant interp(mesh);
        const auto& K = mesh.complex();
        for (SimplexId s = K.first_of_dim(1); s < static_cast<SimplexId>(K.size()); ++s) {
            auto m = K.vertices_of(s).size();
            auto x = random_weights(rng, m);
            std::size_t drop = rng() % m;
            // point on the facet opposite `drop`, and a nearby interior point
            std::vector<double> on_face;
            for (std::size_t i = 0; i < m; ++i)
                if (i != drop)
                    on_face.push_back(x[i] / (1.0 - x[drop]));
            auto face_value = interp.evaluate({K.facets_of(s)[drop], on_face});
            for (double delta : {1e-3, 1e-6}) {
                std::vector<double> near(m);
                for (std::size_t i = 0, t = 0; i < m; ++i)
                    near[i] = i == drop ? delta : on_face[t++] * (1.0 - delta);
                auto v = interp.evaluate({s, near});
                for (std::size_t j = 0; j < v.size(); ++j)
                    CHECK(std::abs(v[j] - face_value[j]) <= 1e3 * delta);
            }
        }
    }
}

TEST_CASE("sublevel bounds at sample points")
{
    auto rng = Xoshiro256(17);
    for (const auto& mesh : test::corpus(5, 3)) {
        AxiswiseInterpolant interp(mesh);
        const auto& K = mesh.complex();
        const auto& phi = mesh.function();
        for (int trial = 0; trial < 20; ++trial) {
            std::vector<double> alpha{rng.uniform01(), rng.uniform01()};
            for (SimplexId s = 0; s < static_cast<SimplexId>(K.size()); ++s) {
                auto vs = K.vertices_of(s);
                bool in_sublevel = true, some_vertex = false;
                for (auto v : vs) {
                    bool below = phi.at(v, 0) <= alpha[0] && phi.at(v, 1) <= alpha[1];
                    in_sublevel = in_sublevel && below;
                    some_vertex = some_vertex || below;
                }
                for (int i = 0; i < 50; ++i) {
                    auto x = interp.evaluate({s, random_weights(rng, vs.size())});
                    bool below = x[0] <= alpha[0] && x[1] <= alpha[1];
                    if (in_sublevel)
                        CHECK(below);
                    if (below)
                        CHECK(some_vertex);
                }
            }
        }
    }
}
