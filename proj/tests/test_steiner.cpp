#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <dualq/steiner.hpp>

#include "support.hpp"

using namespace dualq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const GridSet& grids() {
    static GridSet g;
    return g;
}
const SphereGrid& grid(int n) { return *grids().get(n); }

StarBody trig_l() { return StarBody::trig(2.0, {1.0}); }

bool contains(const std::vector<Complex>& roots, Complex z, double tol) {
    for (const Complex& r : roots)
        if (std::abs(r - z) <= tol * std::max(1.0, std::abs(z))) return true;
    return false;
}

}  // namespace

TEST_CASE("dual Steiner polynomials of known pairs") {
    for (int n : {2, 3}) {
        std::mt19937_64 rng(5 + n);
        StarBody l = testgen::random_body(rng, n);
        auto p = build_poly(l, l, grid(n));
        const double vol = p.w[0];
        for (int i = 0; i <= n; ++i) CHECK_THAT(p.coeffs[i], WithinRel(vol * binomial(n, i), 1e-12));
        for (const Complex& z : roots(p).roots) CHECK(std::abs(z + 1.0) <= 1e-10);
    }
    auto p = build_poly(StarBody::ball(2), trig_l(), grid(2));
    CHECK_THAT(p.coeffs[0], WithinRel(kPi, 1e-12));
    CHECK_THAT(p.coeffs[1], WithinRel(4 * kPi, 1e-12));
    CHECK_THAT(p.coeffs[2], WithinRel(4.5 * kPi, 1e-12));
    // f(1) = |K + L|
    StarBody sum = radial_sum(StarBody::ball(2), trig_l(), 1, 1);
    CHECK_THAT(p(1.0).real(), WithinRel(dual_quermass(sum, sum, 0, grid(2)), 1e-12));
    CHECK_THAT(p(1.0).real(), WithinRel(9.5 * kPi, 1e-12));

    CHECK_THROWS_AS(build_poly_from_tuple({1, -1, 1}, 2), Error);
    CHECK_THROWS_AS(build_poly_from_tuple({1, 1}, 2), Error);
}

TEST_CASE("root sets: residual, conjugates, Vieta") {
    auto p = build_poly(StarBody::ball(2), trig_l(), grid(2));
    auto rs = roots(p);
    REQUIRE(rs.roots.size() == 2);
    CHECK(contains(rs.roots, {-4.0 / 9, std::sqrt(2.0) / 9}, 1e-10));
    CHECK(contains(rs.roots, {-4.0 / 9, -std::sqrt(2.0) / 9}, 1e-10));
    CHECK(rs.residual <= 1e-10);

    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 2;
        StarBody k = testgen::random_body(rng, n), l = testgen::random_body(rng, n);
        auto q = build_poly(k, l, grid(n));
        auto r = roots(q);
        CHECK(r.residual <= 1e-10);
        CHECK(vieta_deviation(q, r) <= 1e-8);
        for (const Complex& z : r.roots) {
            CHECK(contains(r.roots, std::conj(z), 1e-9));
            CHECK_FALSE((z.real() >= 0 && std::abs(z.imag()) <= 1e-12));
        }
        // reciprocity f_{K;L}(z) = z^n f_{L;K}(1/z)
        CHECK(reciprocity_deviation(q, build_poly(l, k, grid(n)), trial) <= 1e-10);
    }
}

TEST_CASE("root transformations") {
    StarBody b = StarBody::ball(2);
    auto t = transform_root(RootTransform::Scale, 2.0, b, b, -1.0, grid(2));
    CHECK(contains(roots(build_poly(t.k, t.l, grid(2))).roots, -2.0, 1e-10));

    const Complex g(-4.0 / 9, std::sqrt(2.0) / 9);
    t = transform_root(RootTransform::Shift, 0.1, b, trig_l(), g, grid(2));
    CHECK(std::abs(t.predicted - (g - 0.1)) < 1e-15);
    CHECK(contains(roots(build_poly(t.k, t.l, grid(2))).roots, t.predicted, 1e-10));
    t = transform_root(RootTransform::Compress, 0.5, b, trig_l(), g, grid(2));
    CHECK(std::abs(t.predicted - Complex(-4.0 / 9, 0.5 * std::sqrt(2.0) / 9)) < 1e-15);
    CHECK(contains(roots(build_poly(t.k, t.l, grid(2))).roots, t.predicted, 1e-10));

    CHECK_THROWS_AS(transform_root(RootTransform::Compress, 0.5, b, trig_l(), 0.5, grid(2)), Error);
    CHECK_THROWS_AS(transform_root(RootTransform::Scale, 2.0, b, trig_l(), -1.0, grid(2)), Error);

    std::mt19937_64 rng(97);
    std::uniform_real_distribution<double> lam(0.2, 5.0), mu(0.0, 2.0), rho(0.05, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 2;
        StarBody k = testgen::random_body(rng, n), l = testgen::random_body(rng, n);
        auto rs = roots(build_poly(k, l, grid(n)));
        Complex z = rs.roots.back();  // largest real part, upper half-plane first among equals
        for (const Complex& r : rs.roots)
            if (r.imag() >= 0 && r.real() < 0) z = r;
        for (auto [kind, p] : {std::pair{RootTransform::Scale, lam(rng)}, std::pair{RootTransform::Shift, mu(rng)},
                               std::pair{RootTransform::Compress, rho(rng)}}) {
            auto tr = transform_root(kind, p, k, l, z, grid(n));
            CHECK(contains(roots(build_poly(tr.k, tr.l, grid(n))).roots, tr.predicted, 1e-8));
        }
    }
}

TEST_CASE("derivative descends one dimension") {
    auto d = derivative_descend(StarBody::ball(2), trig_l(), grids());
    REQUIRE(d.realization.k.dim() == 1);
    CHECK_THAT(d.realized[0], WithinRel(4 * kPi, 1e-12));
    CHECK_THAT(d.realized[1], WithinRel(9 * kPi, 1e-12));
    CHECK(d.max_rel_dev <= 1e-6);
    auto z = poly_roots(d.realized);
    CHECK_THAT(z[0].real(), WithinRel(-4.0 / 9, 1e-12));

    // dilate branch
    StarBody l = StarBody::dilate(StarBody::ball(3), 1.5);
    d = derivative_descend(StarBody::ball(3), l, grids());
    CHECK(d.realization.verdict.status == ConeStatus::GeometricRay);
    CHECK(d.max_rel_dev <= 1e-10);

    std::mt19937_64 rng(101);
    StarBody k3 = testgen::random_zonal(rng, 3), l3 = testgen::random_zonal(rng, 3);
    d = derivative_descend(k3, l3, grids());
    CHECK(d.max_rel_dev <= 1e-6);
    // Lucas
    auto orig = poly_roots(build_poly(k3, l3, grid(3)).coeffs);
    for (const Complex& w : poly_roots(d.realized)) CHECK(in_convex_hull(w, orig));
}

TEST_CASE("antiderivative lifts one dimension") {
    auto a = antiderivative_lift(StarBody::ball(2), StarBody::ball(2), grids());
    CHECK(a.realization.verdict.status == ConeStatus::GeometricRay);
    CHECK_THAT(a.constant, WithinRel(kPi / 3, 1e-12));
    for (int i = 0; i <= 2; ++i) CHECK_THAT(a.realized[i], WithinRel(kPi * binomial(2, i), 1e-10));

    a = antiderivative_lift(StarBody::ball(2), trig_l(), grids());
    CHECK(a.margin > 0);
    CHECK(a.max_rel_dev <= 1e-6);
    const auto lifted = poly_roots(build_poly(a.realization.k, a.realization.l, grid(3)).coeffs);
    for (const Complex& g : poly_roots(a.target)) CHECK(in_convex_hull(g, lifted));
}

TEST_CASE("stability") {
    for (int n : {2, 3, 4}) {
        std::vector<double> w(n + 1, 1.7);
        CHECK(stability_check(build_poly_from_tuple(w, n)).routh == Stability::Stable);
    }
    std::mt19937_64 rng(103);
    for (int trial = 0; trial < 20; ++trial) {
        StarBody k = testgen::random_trig(rng), l = testgen::random_trig(rng);
        auto s = stability_check(build_poly(k, l, grid(2)));
        CHECK(s.routh == Stability::Stable);
        CHECK(s.roots_agree);
    }
    auto s = stability_check(build_poly_from_tuple({1.001, 0.02, 0.1001, 1.000001}, 3));
    CHECK(s.routh == Stability::Nonstable);
    CHECK(s.max_real > 0);
    CHECK(s.roots_agree);
}

TEST_CASE("non-stable polynomials exist from dimension three") {
    auto w = nonstable_search(3, 1, grid(3));
    CHECK(w.root.real() > 0);
    CHECK(w.root.imag() > std::sqrt(3.0) * w.root.real());
    CHECK(w.residual <= 1e-10);
    CHECK(std::abs(w.poly(w.root)) <= 1e-10 * w.poly.scale());
    CHECK(stability_check(w.poly).routh == Stability::Nonstable);
    CHECK_THROWS_AS(nonstable_search(2, 1, grid(2)), Error);
}

TEST_CASE("real roots force dilates") {
    StarBody l = trig_l();
    auto p = build_poly(StarBody::dilate(l, 2.0), l, grid(2));
    auto r = real_roots_rigidity_check(p, grid(2));
    CHECK(r.all_real);
    CHECK(r.coincide);
    CHECK(r.dilate);
    CHECK(r.newton_holds);
    for (const Complex& z : roots(p).roots) CHECK_THAT(z.real(), WithinRel(-2.0, 1e-10));

    r = real_roots_rigidity_check(build_poly(StarBody::ball(2), l, grid(2)), grid(2));
    CHECK_FALSE(r.all_real);
    CHECK(r.newton_slack.size() == 1);
    CHECK_FALSE(r.newton_holds);

    // (1+z)(2+z)(3+z)/6 is no dual Steiner polynomial
    auto w = tuple_from_coeffs({1, 11.0 / 6, 1, 1.0 / 6});
    auto v = interval_search(consecutive_tuple(3, w));
    CHECK((v.status == ConeStatus::Outside || v.status == ConeStatus::Unknown));

    CHECK_THROWS_AS(real_roots_rigidity_check(build_poly_from_tuple({1, 1, 1}, 2), grid(2)), Error);

    std::mt19937_64 rng(107);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 2;
        StarBody k = testgen::random_body(rng, n), m = testgen::random_body(rng, n);
        CHECK_NOTHROW(real_roots_rigidity_check(build_poly(k, m, grid(n)), grid(n)));
    }
}
