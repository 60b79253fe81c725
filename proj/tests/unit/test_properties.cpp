#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "../properties.hpp"

using namespace ftloc;
using fixtures::Random;

namespace {

void require_ok(const properties::Outcome& o) {
    INFO(o.detail);
    CHECK(o.checks > 0);
    CHECK(o.ok);
}

}  // namespace

TEST_CASE("gauge axioms") {
    for (unsigned seed : {101u, 102u}) require_ok(properties::gauge_axioms(seed));
}

TEST_CASE("Cauchy-Schwarz inequalities") {
    for (unsigned seed : {201u, 202u}) require_ok(properties::cauchy_schwarz(seed));
}

TEST_CASE("bipolar maximum and norming functionals") {
    for (unsigned seed : {301u, 302u}) require_ok(properties::bipolar_max(seed));
}

TEST_CASE("cone distance identity") { require_ok(properties::cone_distance_identity(401)); }

TEST_CASE("flat subdifferential") { require_ok(properties::flat_subdifferential(501)); }

TEST_CASE("directional derivatives") { require_ok(properties::directional_derivatives(601)); }

TEST_CASE("absorption, scaling, removal and splitting") { require_ok(properties::point_set_operations(701)); }

TEST_CASE("solution loci are convex; strictly convex gauges give one optimum") {
    require_ok(properties::locus_shape(801));
}

TEST_CASE("polar of the opposite gauge") {
    Random R(901);
    for (int d : {2, 3})
        for (const Gauge& g : properties::gauge_zoo(R, d))
            for (int k = 0; k < 50; ++k) {
                Vec phi = R.box(d, 3.0);
                CHECK(std::abs(g.opposite().polar(phi) - g.polar(-phi)) <= 1e-12 * (1.0 + g.polar(-phi)));
            }
}

TEST_CASE("every norming generator is on the polar sphere and attains the gauge") {
    Random R(902);
    for (int d : {2, 3})
        for (const Gauge& g : properties::gauge_zoo(R, d))
            for (int k = 0; k < 50; ++k) {
                Vec x = R.box(d, 3.0);
                // Aim at ridges of polytopes as well as generic points.
                if (k % 4 == 0 && g.polytopal()) x = g.vertices().row(k % g.vertices().rows()).transpose();
                double gx = g.eval(x);
                for (const Vec& phi : g.norming_functionals(x).generators) {
                    CHECK(std::abs(g.polar(phi) - 1.0) <= 1e-7);
                    CHECK(std::abs(phi.dot(x) - gx) <= 1e-7 * (1.0 + gx));
                }
            }
}

TEST_CASE("asymmetry ratio is one exactly for symmetric balls") {
    Random R(903);
    for (int d : {2, 3})
        for (const Gauge& g : properties::gauge_zoo(R, d)) {
            bool ratio_one = std::abs(asymmetry_witness(g).ratio - 1.0) <= 1e-9;
            CHECK(ratio_one == g.is_symmetric());
        }
    Mat V = fixtures::rows({{2, 0}, {0, 1}, {-2, 0}, {0, -1}, {1, 1}, {-1, -1}});
    CHECK(std::abs(asymmetry_witness(Gauge::v_polytope(V)).ratio - 1.0) <= 1e-9);
}

TEST_CASE("Fenchel-Young equality for distance subgradients") {
    Random R(904);
    for (int t = 0; t < 200; ++t) {
        int d = 2 + t % 2;
        Gauge g = t % 2 ? R.polytope_gauge(d) : R.ellipsoid_gauge(d);
        ConvexSet K = R.mixed_site(d, 2.0);
        Vec x = R.box(d, 4.0);
        Vec phi;
        double dist = SiteTerm(g, K).value_and_subgradient(x, phi);
        Support h = K.support(phi);
        REQUIRE_FALSE(h.infinite);
        CHECK(std::abs(phi.dot(x) - dist - h.value) <= 1e-7 * (1.0 + std::abs(dist)));
        CHECK(g.polar(-phi) <= 1.0 + 1e-7);
        CHECK(dist_subdifferential_contains(g, x, K, phi, 1e-7));
    }
}

TEST_CASE("projection witnesses are optimal") {
    Random R(905);
    for (int t = 0; t < 100; ++t) {
        int d = 2 + t % 2;
        Gauge g = t % 3 ? R.polytope_gauge(d) : R.ellipsoid_gauge(d);
        ConvexSet K = R.mixed_site(d, 2.0);
        Vec x = R.box(d, 4.0);
        Distance dist = set_distance(g, x, K);
        CHECK(std::abs(g.eval(dist.witness - x) - dist.value) <= 1e-7);
        for (int k = 0; k < 20; ++k) CHECK(g.eval(K.project(R.box(d, 4.0)) - x) >= dist.value - 1e-7);
    }
}

TEST_CASE("certificates from the solver are accepted; nearby points have none") {
    Random R(906);
    int rejected = 0, total = 0;
    for (int t = 0; t < 40; ++t) {
        Instance inst = R.polyhedral_instance(2 + t % 2);
        Solution s = solve(inst);
        REQUIRE(s.certificate.has_value());
        CHECK(certify_sets(inst, s.point, *s.certificate, 1e-6).accepted);
        Vec sum = Vec::Zero(inst.dimension);
        for (const Vec& phi : s.certificate->phis) sum += phi;
        CHECK(sum.norm() <= 1e-6);
        ++total;
        if (!find_certificate(inst, s.point + 1e-2 * R.unit(inst.dimension))) ++rejected;
    }
    CHECK(rejected >= 0.95 * total);
}

TEST_CASE("locus polygon equals the minimum sublevel set") {
    Random R(907);
    int compared = 0;
    for (int t = 0; t < 30; ++t) {
        Instance inst = properties::random_points_instance(R, R.integer(2, 4), false);
        Solution s = solve(inst);
        bool at_site = false;
        for (const Site& site : inst.sites) at_site = at_site || (site.set.anchor() - s.point).norm() <= 1e-7;
        if (at_site || !s.certificate) continue;
        Polygon locus = ft_locus_polygon(inst, s.point, *s.certificate);
        Polygon level = sublevel_polygon(inst, s.value);
        CHECK(hausdorff(locus, level) <= 1e-5);
        for (const Point2& p : locus.samples()) CHECK(objective_eval(inst, Vec(p)) <= s.value + 1e-7);
        ++compared;
    }
    CHECK(compared >= 10);
}
