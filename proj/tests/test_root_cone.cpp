#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include <dualq/root_cone.hpp>

#include "support.hpp"

using namespace dualq;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

const GridSet& grids() {
    static GridSet g(std::map<int, int>{{4, 16}});
    return g;
}
const SphereGrid& grid(int n) { return *grids().get(n); }

// Independent re-verification: quadrature tuple, polynomial, residual.
double reverify(const ConeQuery& q) {
    const auto& [k, l] = *q.witness->pair;
    const int n = q.n;
    std::vector<double> c;
    for (int i = 0; i <= n; ++i) c.push_back(binomial(n, i) * dual_quermass(k, l, i, grid(n)));
    Complex f = 0.0;
    double scale = 0.0;
    for (int i = n; i >= 0; --i) {
        f = f * q.z + c[i];
        scale = scale * std::abs(q.z) + c[i];
    }
    return std::abs(f) / scale;
}

}  // namespace

TEST_CASE("exact law in dimension two") {
    auto q = membership_exact_n2({-1, 2});
    REQUIRE(q.status == Membership::In);
    REQUIRE(q.witness);
    CHECK(q.witness->tuple == std::vector<double>{5, 1, 1});
    CHECK(q.witness->residual <= 1e-15);
    auto z = poly_roots({5, 2, 1});
    CHECK(std::abs(z[1] - Complex(-1, 2)) < 1e-14);

    q = membership_exact_n2({0.5, 1});
    CHECK(q.status == Membership::Out);
    CHECK_FALSE(q.certificate.empty());
    CHECK(membership_exact_n2({0, 1}).status == Membership::Out);
    CHECK(membership_exact_n2(-3.0).status == Membership::In);
    CHECK_THROWS_AS(membership_exact_n2({-1, -1}), Error);

    q = membership_search(-3.0, 2, grid(2));
    REQUIRE(q.status == Membership::In);
    REQUIRE(q.witness->pair);
    CHECK(reverify(q) <= 1e-12);
    CHECK_THAT(radial_eval(q.witness->pair->first, {1, 0}), WithinRel(3.0, 1e-15));
}

TEST_CASE("dimension-two search agrees with the exact law") {
    std::mt19937_64 rng(109);
    std::uniform_real_distribution<double> re(-3, 3), im(0, 3);
    SearchSettings s;
    s.pair_for_n2 = false;
    for (int k = 0; k < 1000; ++k) {
        const Complex z(re(rng), k % 50 == 0 ? 0.0 : im(rng));
        const bool in = z.real() < 0;
        CHECK((membership_search(z, 2, grid(2), s).status == Membership::In) == in);
    }
    for (Complex z : {Complex(-1, 1), Complex(-0.3, 1), Complex(-2, 0.5)}) {
        auto q = membership_search(z, 2, grid(2));
        REQUIRE(q.status == Membership::In);
        REQUIRE(q.witness->pair);
        CHECK(q.witness->residual <= 1e-8);
        CHECK(reverify(q) <= 1e-7);
    }
}

TEST_CASE("dimension-three bound") {
    CHECK_FALSE(necessary_bound_n3({1, 1}));
    CHECK(necessary_bound_n3({1, 2}));
    CHECK(necessary_bound_n3({-1, 0.1}));
    auto q = membership_search({1, 1}, 3, grid(3));
    CHECK(q.status == Membership::Out);
    CHECK_FALSE(q.certificate.empty());
    CHECK(membership_search(2.0, 3, grid(3)).status == Membership::Out);
}

TEST_CASE("dimension-three search finds witnesses") {
    auto q = membership_search({-0.1, 1}, 3, grid(3));
    REQUIRE(q.status == Membership::In);
    CHECK(q.witness->residual <= 1e-8);
    CHECK(reverify(q) <= 1e-7);

    // a non-stable direction
    q = membership_search(std::polar(1.0, 80 * kPi / 180), 3, grid(3));
    REQUIRE(q.status == Membership::In);
    CHECK(q.z.real() > 0);
    CHECK(reverify(q) <= 1e-7);
}

TEST_CASE("convex combinations of witnesses") {
    auto q1 = membership_search({-1, 1}, 2, grid(2)), q2 = membership_search({-2, 1}, 2, grid(2));
    REQUIRE(q1.witness->pair);
    REQUIRE(q2.witness->pair);
    auto c = convex_combination_witness(q1.z, *q1.witness->pair, q2.z, *q2.witness->pair, 0.5, grid(2));
    CHECK(std::abs(c.z - Complex(-1.5, 1)) < 1e-15);
    CHECK(c.residual <= 1e-7);
    CHECK(witness_residual(c.m, c.l, Complex(-1.5, 1), grid(2)) <= 1e-7);

    // same point
    c = convex_combination_witness(q1.z, *q1.witness->pair, q1.z, *q1.witness->pair, 0.3, grid(2));
    CHECK(c.residual <= 1e-7);

    // both on the negative axis
    StarBody b = StarBody::ball(2);
    c = convex_combination_witness(-1.0, {b, b}, -3.0, {StarBody::dilate(b, 3), b}, 0.5, grid(2));
    CHECK(c.z == Complex(-2.0));
    CHECK_THAT(radial_eval(c.m, {0, 1}), WithinRel(2.0, 1e-15));
    CHECK_THAT(radial_eval(c.l, {0, 1}), WithinRel(1.0, 1e-15));

    // a complex and a real root
    c = convex_combination_witness(q1.z, *q1.witness->pair, -3.0, {StarBody::dilate(b, 3), b}, 0.25, grid(2));
    CHECK(c.residual <= 1e-7);

    CHECK_THROWS_AS(convex_combination_witness({-1, 1}, {b, b}, -1.0, {b, b}, 0.5, grid(2)), Error);

    // seeded suite from trig pairs
    std::mt19937_64 rng(113);
    std::uniform_real_distribution<double> u(0.05, 0.95);
    for (int k = 0; k < 5; ++k) {
        StarBody k1 = testgen::random_trig(rng), l1 = testgen::random_trig(rng);
        StarBody k2 = testgen::random_trig(rng), l2 = testgen::random_trig(rng);
        const Complex g1 = roots(build_poly(k1, l1, grid(2))).roots[1];
        const Complex g2 = roots(build_poly(k2, l2, grid(2))).roots[1];
        auto cw = convex_combination_witness(g1, {k1, l1}, g2, {k2, l2}, u(rng), grid(2));
        CHECK(cw.residual <= 1e-7);
    }
}

TEST_CASE("monotone embedding into the next dimension") {
    StarBody b = StarBody::ball(2);
    auto e = monotone_embed(-1.0, b, b, grids());
    CHECK(e.contained);
    for (const Complex& z : e.lifted_roots) CHECK(std::abs(z + 1.0) < 1e-9);

    StarBody l = StarBody::trig(2.0, {1.0});
    const Complex g(-4.0 / 9, std::sqrt(2.0) / 9);
    e = monotone_embed(g, b, l, grids());
    CHECK(e.contained);
    CHECK(e.lift.max_rel_dev <= 1e-6);

    // chain 2 -> 3 -> 4
    Complex g3 = e.lifted_roots.front();
    for (const Complex& z : e.lifted_roots)
        if (z.imag() > g3.imag()) g3 = z;
    auto e2 = monotone_embed(g3, e.lift.realization.k, e.lift.realization.l, grids());
    CHECK(e2.contained);
    CHECK(e2.lift.max_rel_dev <= 1e-2);  // coarse four-dimensional grid
    CHECK_THROWS_AS(monotone_embed({-1, 1}, b, l, grids()), Error);
}

TEST_CASE("directional maps") {
    auto m = cone_boundary_map(2, 36, grid(2));
    REQUIRE(m.size() == 36);
    for (const auto& e : m) {
        const bool in = e.theta > kPi / 2 + 1e-12;
        CHECK((e.query.status == Membership::In) == in);
        if (!in) CHECK(e.query.status == Membership::Out);
    }

    m = cone_boundary_map(3, 12, grid(3));
    bool seen_in = false, nonstable = false;
    for (const auto& e : m) {
        if (e.theta <= kPi / 3 + 1e-12) CHECK(e.query.status == Membership::Out);
        if (e.query.status == Membership::In) {
            seen_in = true;
            CHECK(e.query.witness->residual <= 1e-8);
            if (e.query.z.real() > 0) nonstable = true;
        } else {
            CHECK_FALSE(seen_in);  // IN angles form an interval ending at pi
        }
    }
    CHECK(m.back().query.status == Membership::In);
    CHECK(nonstable);
}
