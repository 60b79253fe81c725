#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "../support.hpp"

using namespace ftloc;
using fixtures::rows;
using fixtures::vec;

namespace {

EuclidInstance symmetric_three() {
    const double h = std::sqrt(3.0) / 2.0;
    return fixtures::euclid_points({vec({1, 0}), vec({-0.5, h}), vec({-0.5, -h})});
}

EuclidInstance with_last(std::vector<Vec> pts, const ConvexSet& last) {
    EuclidInstance e = fixtures::euclid_points(pts);
    e.sites.push_back({last, 1.0});
    return e;
}

}  // namespace

TEST_CASE("general optimality test") {
    CHECK(euclid_optimal(symmetric_three(), vec({0, 0})));
    CHECK_FALSE(euclid_optimal(symmetric_three(), vec({0.1, 0})));

    EuclidInstance heron_like = with_last({vec({0, 1}), vec({2, 1})}, fixtures::x_axis());
    EuclidOptimality h = euclid_optimality(heron_like, vec({1, 0}));
    CHECK_FALSE(h.optimal);
    CHECK(h.u.norm() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
    CHECK(h.containing == std::vector<int>{2});
    CHECK(objective_eval(heron_like.to_instance(), vec({1, 0.3})) < objective_eval(heron_like.to_instance(), vec({1, 0})));

    EuclidInstance one;
    one.dimension = 2;
    one.sites.push_back({ConvexSet::ball(vec({0, 0}), 1.0), 1.0});
    CHECK(euclid_optimal(one, vec({0.5, 0.5})));
}

TEST_CASE("agreement with the general certificate search") {
    fixtures::Random R(41);
    for (int t = 0; t < 30; ++t) {
        std::vector<Vec> pts;
        for (int k = 0; k < 4; ++k) pts.push_back(R.box(2, 3.0));
        EuclidInstance e = fixtures::euclid_points(pts);
        Solution s = solve(e.to_instance());
        CHECK(euclid_optimality(e, s.point, 1e-4).optimal);
        CHECK_FALSE(euclid_optimal(e, s.point + vec({0.05, 0.05})));
    }
}

TEST_CASE("floating and absorbed cases") {
    CHECK(flat_case_test(symmetric_three(), vec({0, 0}), FlatCase::Floating).optimal);

    EuclidVerdict corner = flat_case_test(with_last({vec({1, 0}), vec({0, 1})}, ConvexSet::point(vec({0, 0}))),
                                          vec({0, 0}), FlatCase::PointAbsorbed);
    CHECK_FALSE(corner.optimal);
    CHECK(corner.v.norm() == doctest::Approx(std::sqrt(2.0)));

    CHECK(flat_case_test(with_last({vec({2, 0}), vec({-1, 0})}, ConvexSet::point(vec({0, 0}))), vec({0, 0}),
                         FlatCase::PointAbsorbed)
              .optimal);

    EuclidInstance flat = with_last({vec({0, 1}), vec({0, 2})}, fixtures::x_axis());
    CHECK_FALSE(flat_case_test(flat, vec({0, 0}), FlatCase::FlatAbsorbed).optimal);
    EuclidInstance balanced = with_last({vec({0, 1}), vec({0, -1})}, fixtures::x_axis());
    CHECK(flat_case_test(balanced, vec({0, 0}), FlatCase::FlatAbsorbed).optimal);
    EuclidInstance tilted = with_last({vec({1, 1})}, fixtures::x_axis());
    CHECK_FALSE(flat_case_test(tilted, vec({0, 0}), FlatCase::FlatAbsorbed).optimal);
}

TEST_CASE("structural preconditions") {
    CHECK_THROWS_AS(flat_case_test(symmetric_three(), vec({1, 0}), FlatCase::Floating), PreconditionError);
    CHECK_THROWS_AS(flat_case_test(symmetric_three(), vec({0, 0}), FlatCase::PointAbsorbed), PreconditionError);
    CHECK_THROWS_AS(flat_case_test(symmetric_three(), vec({0, 0}), FlatCase::FlatAbsorbed), PreconditionError);
    EuclidInstance e = with_last({vec({0, 1})}, fixtures::x_axis());
    CHECK_THROWS_AS(flat_point_absorbed_test(e, vec({0, 0})), PreconditionError);
    Instance general = fixtures::two_point_asymmetric();
    CHECK_THROWS_AS(EuclidInstance::from_instance(general), PreconditionError);
}

TEST_CASE("flat-point absorbed bound") {
    auto fixture = [](std::vector<Vec> pts) {
        pts.push_back(vec({0, 0}));
        return with_last(pts, fixtures::x_axis());
    };
    EuclidVerdict a = flat_point_absorbed_test(fixture({}), vec({0, 0}));
    CHECK(a.optimal);
    CHECK(a.alpha == 0.0);
    CHECK(a.bound == doctest::Approx(1.0));

    EuclidVerdict b = flat_point_absorbed_test(fixture({vec({0, 3}), vec({0, 5})}), vec({0, 0}));
    CHECK(b.optimal);
    CHECK(b.alpha == doctest::Approx(M_PI / 2));
    CHECK(b.bound == doctest::Approx(2.0));
    CHECK((b.v - vec({0, 2})).norm() <= 1e-12);

    EuclidVerdict c = flat_point_absorbed_test(fixture({vec({0, 3}), vec({0, 5}), vec({0, 7})}), vec({0, 0}));
    CHECK_FALSE(c.optimal);
    CHECK(c.v.norm() == doctest::Approx(3.0));

    // Along the flat the point only contributes: the bound is 1 / cos(alpha) for small angles.
    EuclidVerdict d = flat_point_absorbed_test(fixture({vec({3, 0}), vec({1, 1})}), vec({0, 0}));
    double expected_alpha = std::atan2(1.0 / std::sqrt(2.0), 1.0 + 1.0 / std::sqrt(2.0));
    CHECK(d.alpha == doctest::Approx(expected_alpha));
    CHECK(d.bound == doctest::Approx(1.0 / std::cos(expected_alpha)));
    CHECK_FALSE(d.optimal);
}

TEST_CASE("cone-cap sums") {
    std::vector<ConvexSet> sets = {ConvexSet::point(vec({0, 0})), fixtures::x_axis()};
    CHECK(cone_cap_sum_residual(sets, {1.0, 1.0}, vec({0, 0}), vec({0, 2}), 1e-9) <= 1e-9);
    CHECK(cone_cap_sum_residual(sets, {1.0, 1.0}, vec({0, 0}), vec({0, 2.5}), 1e-9) >= 0.4);
    CHECK(cone_cap_sum_residual(sets, {1.0, 1.0}, vec({0, 0}), vec({0.6, 1.7}), 1e-9) <= 1e-8);
    CHECK(cone_cap_sum_residual(sets, {1.0, 1.0}, vec({0, 0}), vec({1.0, 1.5}), 1e-9) > 1e-3);
}

TEST_CASE("directional derivatives") {
    ConvexSet ball = ConvexSet::ball(vec({0, 0}), 1.0);
    CHECK(directional_derivative(ball, vec({2, 0}), vec({1, 0})) == doctest::Approx(1.0));
    CHECK(directional_derivative(ball, vec({1, 0}), vec({0, 1})) == doctest::Approx(0.0));
    CHECK(directional_derivative(ball, vec({1, 0}), vec({1, 0})) == doctest::Approx(1.0));
    CHECK(directional_derivative(ball, vec({0, 0}), vec({1, 0})) == doctest::Approx(0.0));
    CHECK(directional_derivative(fixtures::x_axis(), vec({3, 0}), vec({0, -2})) == doctest::Approx(2.0));
}

TEST_CASE("multiplicity classes") {
    Multiplicity one = multiplicity_classify(fixtures::x_axis(), {vec({0, 1})});
    CHECK(one.verdict == Multiplicity::Verdict::Multiple);
    CHECK(one.which == 1);
    CHECK(std::min((one.locus_a - vec({0, 1})).norm(), (one.locus_b - vec({0, 1})).norm()) <= 1e-12);
    CHECK(std::min((one.locus_a - vec({0, 0})).norm(), (one.locus_b - vec({0, 0})).norm()) <= 1e-12);

    Multiplicity two = multiplicity_classify(fixtures::x_axis(), {vec({-1, 0}), vec({1, 0})});
    CHECK(two.verdict == Multiplicity::Verdict::Multiple);
    CHECK(two.which == 2);
    CHECK((two.locus_a - two.locus_b).norm() == doctest::Approx(2.0));

    Multiplicity three = multiplicity_classify(fixtures::x_axis(), {vec({0, 1}), vec({0, 2}), vec({0, 3})});
    CHECK(three.verdict == Multiplicity::Verdict::Multiple);
    CHECK(three.which == 3);
    double lo = std::min(three.locus_a(1), three.locus_b(1)), hi = std::max(three.locus_a(1), three.locus_b(1));
    CHECK(lo == doctest::Approx(1.0));
    CHECK(hi == doctest::Approx(2.0));

    ConvexSet moved = ConvexSet::flat(vec({0, 2}), rows({{1, 0}}));
    CHECK(multiplicity_classify(moved, {vec({0, 1}), vec({0, 2}), vec({0, 3})}).verdict == Multiplicity::Verdict::Unique);
    CHECK(multiplicity_classify(fixtures::x_axis(), {vec({0, 1}), vec({1, 2}), vec({0, 3})}).verdict ==
          Multiplicity::Verdict::Unique);
    CHECK(multiplicity_classify(fixtures::x_axis(), {vec({-1, 0}), vec({0, 0}), vec({1, 0})}).verdict ==
          Multiplicity::Verdict::Unique);
}

TEST_CASE("names") {
    CHECK(std::string(to_string(FlatCase::Floating)) == "floating");
    CHECK(std::string(to_string(Multiplicity::Verdict::Multiple)) == "multiple");
}
