#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <dualq/star_body.hpp>

using namespace dualq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

std::vector<double> at_angle(double th) { return {std::cos(th), std::sin(th)}; }

}  // namespace

TEST_CASE("radial evaluation of the basic kinds") {
    StarBody ball = StarBody::ball(3);
    std::vector<double> u = {0.6, 0.0, 0.8};
    CHECK(radial_eval(ball, u) == 1.0);
    CHECK(radial_eval(StarBody::dilate(ball, 2.5), u) == 2.5);

    StarBody trig = StarBody::trig(2.0, {1.0});
    CHECK_THAT(radial_eval(trig, at_angle(0.0)), WithinAbs(3.0, 1e-15));
    CHECK_THAT(radial_eval(trig, at_angle(kPi)), WithinAbs(1.0, 1e-15));
    CHECK_THAT(radial_eval(trig, at_angle(kPi / 2)), WithinAbs(2.0, 1e-15));
}

TEST_CASE("radial evaluation rejects bad arguments") {
    StarBody ball = StarBody::ball(2);
    std::vector<double> bad = {1.0, 0.1};
    CHECK_THROWS_AS(radial_eval(ball, bad), Error);
    std::vector<double> wrong_dim = {1.0, 0.0, 0.0};
    try {
        radial_eval(ball, wrong_dim);
        FAIL("expected a dimension error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Dimension);
    }
    CHECK_THROWS_AS(StarBody::ball(2, -1.0), Error);
    CHECK_THROWS_AS(StarBody::trig(1.0, {1.5}), Error);
    CHECK_THROWS_AS(StarBody::zonal(3, {0.0, 0.5, 1.0}, {1.0, 2.0, 1.5}), Error);
}

TEST_CASE("radial sums act pointwise") {
    StarBody trig = StarBody::trig(2.0, {1.0});
    StarBody s = radial_sum(trig, StarBody::ball(2), 1.0, 0.5);
    for (double th : {0.0, 0.3, 1.7, kPi, 4.0})
        CHECK_THAT(radial_eval(s, at_angle(th)), WithinAbs(2.5 + std::cos(th), 1e-14));

    StarBody b3 = radial_sum(StarBody::ball(2, 1.0), StarBody::ball(2, 2.0), 1.0, 1.0);
    CHECK(radial_eval(b3, at_angle(0.4)) == 3.0);

    StarBody twice = radial_sum(trig, trig, 1.0, 1.0);
    SphereGrid g = build_grid(2, 64);
    auto a = sample(twice, g);
    auto b = sample(StarBody::dilate(trig, 2.0), g);
    for (std::size_t i = 0; i < g.size(); ++i) CHECK_THAT(a[i], WithinRel(b[i], 1e-12));

    CHECK_THROWS_AS(radial_sum(trig, trig, 0.0, 0.0), Error);
    CHECK_THROWS_AS(radial_sum(trig, StarBody::ball(3), 1.0, 1.0), Error);
}

TEST_CASE("dilate absorption on random radial sums") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> coef(-0.3, 0.3), mu(0.0, 3.0);
    SphereGrid g = build_grid(2, 128);
    for (int trial = 0; trial < 20; ++trial) {
        StarBody l = StarBody::trig(1.5, {coef(rng), coef(rng)}, {coef(rng)});
        const double m = mu(rng), la = mu(rng) + 0.1;
        auto a = sample(radial_sum(l, l, m, la), g);
        auto b = sample(StarBody::dilate(l, m + la), g);
        for (std::size_t i = 0; i < g.size(); ++i) REQUIRE_THAT(a[i], WithinRel(b[i], 1e-12));
    }
}

TEST_CASE("zonal bodies depend only on |u1| and interpolate monotonically") {
    StarBody z = StarBody::zonal(3, {0.0, 0.25, 0.5, 0.75, 1.0}, {1.0, 1.2, 1.3, 1.9, 2.0});
    std::vector<double> u = {0.5, 0.6, std::sqrt(1 - 0.25 - 0.36)};
    std::vector<double> v = {-0.5, -std::sqrt(0.75), 0.0};
    CHECK_THAT(radial_eval(z, u), WithinAbs(1.3, 1e-14));
    CHECK_THAT(radial_eval(z, v), WithinAbs(1.3, 1e-14));
    double prev = 0.0;
    for (int k = 0; k <= 1000; ++k) {
        const double t = k / 1000.0;
        std::vector<double> w = {t, std::sqrt(1 - t * t), 0.0};
        const double r = radial_eval(z, w);
        REQUIRE(r >= prev - 1e-15);
        REQUIRE(r >= 1.0);
        REQUIRE(r <= 2.0);
        prev = r;
    }
}

TEST_CASE("zonal interpolation converges for a smooth profile") {
    // rho = 1 + t^2 sampled uniformly in the polar angle
    std::vector<double> t, r;
    const int m = 257;
    for (int k = m - 1; k >= 0; --k) {
        const double phi = 0.5 * kPi * k / (m - 1);
        const double tt = k == m - 1 ? 0.0 : (k == 0 ? 1.0 : std::cos(phi));
        t.push_back(tt);
        r.push_back(1.0 + tt * tt);
    }
    StarBody z = StarBody::zonal(2, t, r);
    for (double s : {0.013, 0.2, 0.5, 0.77, 0.999}) {
        std::vector<double> u = {s, std::sqrt(1 - s * s)};
        CHECK_THAT(radial_eval(z, u), WithinAbs(1.0 + s * s, 1e-6));
    }
}

TEST_CASE("grid tables evaluate at their nodes") {
    auto g = std::make_shared<const SphereGrid>(build_grid(3, 8));
    std::vector<double> vals(g->size());
    for (std::size_t i = 0; i < g->size(); ++i) vals[i] = 1.0 + g->node(i)[0] * g->node(i)[0];
    StarBody t = StarBody::grid_table(g, vals);
    for (std::size_t i = 0; i < g->size(); i += 5) CHECK(t.eval(g->node(i)) == vals[i]);
    StarBody tz = StarBody::grid_table(g, vals, TableInterp::Zonal);
    for (std::size_t i = 0; i < g->size(); i += 5) CHECK_THAT(tz.eval(g->node(i)), WithinAbs(vals[i], 1e-12));
}

TEST_CASE("ratio range extremes") {
    SphereGrid g = build_grid(2, 2048);
    RatioRange r = ratio_range(StarBody::ball(2), StarBody::trig(2.0, {1.0}), g);
    CHECK_THAT(r.a, WithinAbs(1.0, 1e-12));
    CHECK_THAT(r.b, WithinAbs(3.0, 1e-12));
    CHECK_FALSE(r.dilate);

    StarBody trig = StarBody::trig(2.0, {0.5}, {0.3});
    r = ratio_range(trig, trig, g);
    CHECK(r.a == 1.0);
    CHECK(r.b == 1.0);
    CHECK(r.dilate);

    r = ratio_range(StarBody::ball(2), StarBody::ball(2, 0.5), g);
    CHECK(r.a == 0.5);
    CHECK(r.b == 0.5);
    CHECK(r.dilate);
}
