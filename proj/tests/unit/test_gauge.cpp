#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <thread>

#include "../support.hpp"

using namespace ftloc;
using fixtures::rows;
using fixtures::vec;

namespace {

bool contains_row(const std::vector<Vec>& gens, const Vec& v, double tol = 1e-9) {
    for (const Vec& g : gens)
        if ((g - v).norm() <= tol) return true;
    return false;
}

}  // namespace

TEST_CASE("five-form gauge values") {
    Gauge g = fixtures::five_form();
    CHECK(g.eval(vec({-2, 2})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.eval(vec({0, 0})) == 0.0);
    CHECK(g.eval(vec({0, 4})) == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(g.eval(vec({-2, -2})) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("five-form ball vertices") {
    Gauge g = fixtures::five_form();
    std::vector<Vec> verts;
    for (Eigen::Index i = 0; i < g.vertices().rows(); ++i) verts.push_back(g.vertices().row(i).transpose());
    CHECK(verts.size() == 5);
    for (const Vec& v : {vec({-2, 2}), vec({0, 1}), vec({1, 0}), vec({0, -1}), vec({-2, -2})})
        CHECK(contains_row(verts, v));
}

TEST_CASE("polar values") {
    Gauge g = fixtures::five_form();
    CHECK(g.polar(vec({0, 0.5})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.polar(vec({1, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(Gauge::euclidean(2).polar(vec({3, 4})) == doctest::Approx(5.0).epsilon(1e-12));
    Gauge shifted = Gauge::ellipsoid(Mat::Identity(2, 2), vec({0.5, 0}));
    CHECK(shifted.polar(vec({1, 0})) == doctest::Approx(1.5).epsilon(1e-12));
}

TEST_CASE("norming functionals") {
    Gauge g = fixtures::five_form();
    NormingSet a = g.norming_functionals(vec({-2, 2}));
    CHECK_FALSE(a.whole_polar_ball);
    CHECK(a.generators.size() == 2);
    CHECK(contains_row(a.generators, vec({-0.5, 0})));
    CHECK(contains_row(a.generators, vec({0.5, 1})));

    NormingSet b = g.norming_functionals(vec({0, 4}));
    CHECK(b.generators.size() == 2);
    CHECK(contains_row(b.generators, vec({1, 1})));
    CHECK(contains_row(b.generators, vec({0.5, 1})));

    NormingSet e = Gauge::euclidean(2).norming_functionals(vec({3, 4}));
    REQUIRE(e.generators.size() == 1);
    CHECK((e.generators[0] - vec({0.6, 0.8})).norm() <= 1e-12);

    CHECK(g.norming_functionals(vec({0, 0})).whole_polar_ball);
}

TEST_CASE("norming functionals of a vertex-described ball") {
    Gauge g = Gauge::v_polytope(rows({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));
    NormingSet s = g.norming_functionals(vec({0.25, 0.5}));
    REQUIRE(s.generators.size() == 1);
    CHECK((s.generators[0] - vec({1, 1})).norm() <= 1e-9);
    NormingSet corner = g.norming_functionals(vec({2, 0}));
    CHECK(corner.generators.size() == 2);
    for (const Vec& phi : corner.generators) {
        CHECK(g.polar(phi) == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(phi.dot(vec({2, 0})) == doctest::Approx(2.0).epsilon(1e-9));
    }
}

TEST_CASE("opposite gauge") {
    Gauge g = fixtures::five_form();
    Gauge o = g.opposite();
    CHECK(o.eval(vec({2, -2})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(o.eval(vec({2, 2})) == doctest::Approx(g.eval(vec({-2, -2}))).epsilon(1e-12));
    CHECK(Gauge::euclidean(2).opposite().is_symmetric());
    Gauge diamond = Gauge::v_polytope(rows({{1, 0}, {0, 1}, {-1, 0}, {0, -1}}));
    CHECK(diamond.is_symmetric());
    CHECK(diamond.opposite().eval(vec({0.3, -0.2})) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK_FALSE(g.is_symmetric());
}

TEST_CASE("asymmetry witness") {
    AsymmetryWitness w = asymmetry_witness(fixtures::five_form());
    CHECK(w.ratio == doctest::Approx(4.0).epsilon(1e-12));
    CHECK(std::abs(w.x0(0) + 2.0) <= 1e-12);
    CHECK(std::abs(std::abs(w.x0(1)) - 2.0) <= 1e-12);

    CHECK(asymmetry_witness(Gauge::euclidean(2)).ratio == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(asymmetry_witness(Gauge::l1(3)).ratio == doctest::Approx(1.0).epsilon(1e-9));

    // Ball shifted to the right: the longest radius points along +e1, so gamma(-x)/gamma(x)
    // peaks at x0 on the positive axis.
    AsymmetryWitness e = asymmetry_witness(Gauge::ellipsoid(Mat::Identity(2, 2), vec({0.5, 0})));
    CHECK(e.ratio == doctest::Approx(3.0).epsilon(1e-7));
    CHECK(e.x0(0) > 0);
    CHECK(std::abs(e.x0(1)) <= 1e-4 * e.x0.norm());
}

TEST_CASE("shifted ellipsoid along its axis") {
    Gauge g = Gauge::ellipsoid(Mat::Identity(2, 2), vec({0.5, 0}));
    CHECK(g.eval(vec({1.5, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.eval(vec({-0.5, 0})) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g.eval(vec({-1, 0})) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("construction errors") {
    CHECK_THROWS_AS(Gauge::h_polytope(rows({{1, 0}, {0, 1}})), InvalidGauge);
    CHECK_THROWS_AS(Gauge::v_polytope(rows({{1, 0}, {2, 1}, {1, 2}})), InvalidGauge);
    CHECK_THROWS_AS(Gauge::ellipsoid(Mat::Identity(2, 2), vec({1.5, 0})), InvalidGauge);
    Mat indefinite = rows({{1, 0}, {0, -1}});
    CHECK_THROWS_AS(Gauge::ellipsoid(indefinite, vec({0, 0})), InvalidGauge);
    CHECK_THROWS_AS(Gauge::euclidean(2).eval(vec({1, 2, 3})), DimensionMismatch);
    CHECK_THROWS_AS(fixtures::five_form().polar(vec({1})), DimensionMismatch);
}

TEST_CASE("weighted gauge is a scaled ball") {
    Gauge g = fixtures::five_form().scaled(3.0);
    CHECK(g.eval(vec({-2, 2})) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(g.polar(vec({1, 0})) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("lipschitz and radii") {
    Gauge g = fixtures::five_form();
    fixtures::Random R(11);
    for (int k = 0; k < 200; ++k) {
        Vec x = R.box(2, 5.0), y = R.box(2, 5.0);
        CHECK(std::abs(g.eval(x) - g.eval(y)) <= g.lipschitz() * (x - y).norm() + 1e-12);
    }
    CHECK(g.inner_radius() <= g.outer_radius());
    CHECK(Gauge::euclidean(3).outer_radius() == doctest::Approx(1.0));
}

TEST_CASE("three-dimensional polytopes convert both ways") {
    Gauge l1 = Gauge::l1(3);
    Gauge again = Gauge::h_polytope(l1.facets());
    fixtures::Random R(12);
    for (int k = 0; k < 100; ++k) {
        Vec x = R.box(3, 2.0);
        CHECK(again.eval(x) == doctest::Approx(x.lpNorm<1>()).epsilon(1e-10));
        Vec phi = R.box(3, 2.0);
        CHECK(again.polar(phi) == doctest::Approx(phi.lpNorm<Eigen::Infinity>()).epsilon(1e-10));
    }
}

TEST_CASE("concurrent evaluation is consistent") {
    Gauge g = Gauge::h_polytope(fixtures::five_form().facets());
    std::vector<double> out(8);
    std::vector<std::thread> ts;
    for (int t = 0; t < 8; ++t) ts.emplace_back([&, t] { out[t] = g.polar(vec({0.3, 0.7})) + g.vertices().rows(); });
    for (auto& t : ts) t.join();
    for (double v : out) CHECK(v == out[0]);
}
