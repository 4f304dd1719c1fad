#pragma once

#include <boost/math/special_functions/beta.hpp>

#include <algorithm>
#include <cmath>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "lp.hpp"
#include "measure.hpp"
#include "moment.hpp"
#include "numerics.hpp"
#include "quermass.hpp"
#include "sphere_grid.hpp"
#include "star_body.hpp"

namespace dualq {

// sigma({v : |v_1| >= s}) / sigma(S^{n-1})
inline double cap_fraction(int n, double s) {
    if (!(s >= 0.0 && s <= 1.0)) fail_input("cap_fraction: s must lie in [0,1]");
    if (n < 1) fail_input("cap_fraction: dimension must be >= 1");
    if (n == 1) return 1.0;
    if (n == 2) return 2.0 * std::acos(s) / kPi;
    if (n == 3) return 1.0 - s;
    // v_1^2 ~ Beta(1/2, (n-1)/2)
    return boost::math::ibetac(0.5, 0.5 * (n - 1), s * s);
}

struct SynthSettings {
    MomentSettings moment;
    std::vector<int> spline_pieces = {4, 8, 16, 32, 64, 128};
    double accept_fraction = 1e-4;  // floor mass fraction that ends the refinement
    int profile_knots = 4097;
};

namespace detail {

// LP over log-spline bumps plus a uniform floor, maximizing the floor.
inline std::optional<std::pair<IntervalMeasure, double>> spline_floor_lp(const QuermassTuple& t, Interval iv,
                                                                        int pieces, double residual_tol) {
    LogSpline sp;
    sp.pieces = pieces;
    sp.s0 = std::log(iv.a);
    sp.s1 = std::log(iv.b);
    const int nb = static_cast<int>(sp.basis_count());
    const int m = static_cast<int>(t.size());
    Eigen::MatrixXd a(m, nb + 1);
    Eigen::VectorXd b(m), c = Eigen::VectorXd::Zero(nb + 1);
    for (int r = 0; r < m; ++r) {
        const auto bm = spline_basis_moments(sp, t.indices[r]);
        for (int k = 0; k < nb; ++k) a(r, k) = bm[k];
        a(r, nb) = power_integral(iv.a, iv.b, t.indices[r]);
        b(r) = t.values[r];
    }
    c(nb) = -1.0;
    LpResult res = lp_minimize(a, b, c);
    if (res.status != LpStatus::Optimal) return std::nullopt;
    IntervalMeasure mu;
    mu.interval = iv;
    mu.floor = std::max(0.0, res.x(nb));
    sp.coeffs.assign(nb, 0.0);
    bool any = false;
    for (int k = 0; k < nb; ++k) {
        sp.coeffs[k] = std::max(0.0, res.x(k));
        any = any || sp.coeffs[k] > 0.0;
    }
    if (any) mu.spline = std::move(sp);
    for (int r = 0; r < m; ++r)
        if (rel_diff(mu.moment(t.indices[r]), t.values[r]) > residual_tol) return std::nullopt;
    const double frac = mu.floor * (iv.b - iv.a) / t.omega0();
    return std::make_pair(std::move(mu), frac);
}

}  // namespace detail

// Sub-interval of iv on which the fitted density carries the largest uniform
// floor. A wide scan interval forces the floor to spread over regions the
// tuple barely charges; the synthesized body then has steep ramps.
inline Interval refine_interval(const QuermassTuple& t, Interval iv, const SynthSettings& s = {}) {
    const double x0 = std::log(iv.a), x1 = std::log(iv.b);
    constexpr int kPieces = 16;
    auto score = [&](double x, double y) {
        x = std::max(x, x0);
        y = std::min(y, x1);
        if (y - x < 1e-3 * (x1 - x0)) return -1.0;
        auto r = detail::spline_floor_lp(t, {std::exp(x), std::exp(y)}, kPieces, s.moment.residual_tol);
        return r ? r->second : -1.0;
    };
    constexpr int kGrid = 13;
    double bx = x0, by = x1, best = score(x0, x1);
    for (int i = 0; i < kGrid; ++i)
        for (int j = i + 1; j < kGrid; ++j) {
            const double x = x0 + (x1 - x0) * i / (kGrid - 1), y = x0 + (x1 - x0) * j / (kGrid - 1);
            const double v = score(x, y);
            if (v > best) {
                best = v;
                bx = x;
                by = y;
            }
        }
    if (!(best > 0.0)) return iv;
    // pattern search on the two endpoints
    double step = 0.5 * (x1 - x0) / (kGrid - 1);
    while (step > 1e-3 * (x1 - x0)) {
        bool moved = false;
        const double cand[4][2] = {{bx - step, by}, {bx + step, by}, {bx, by - step}, {bx, by + step}};
        for (const auto& c : cand) {
            const double v = score(c[0], c[1]);
            if (v > best) {
                best = v;
                bx = std::max(c[0], x0);
                by = std::min(c[1], x1);
                moved = true;
            }
        }
        if (!moved) step *= 0.5;
    }
    return {std::exp(bx), std::exp(by)};
}

// A floored smooth density on [a,b] whose moments match the tuple.
inline IntervalMeasure measure_from_moments(const QuermassTuple& t, Interval iv, const SynthSettings& s = {}) {
    make_interval(iv.a, iv.b);
    ConeVerdict v;
    if (t.size() >= 2) {
        v = interior_witness(t, iv, s.moment);
        if (v.status != ConeStatus::Interior)
            throw RefusalError("measure_from_moments: tuple is not interior for the interval", v);
    }
    std::optional<std::pair<IntervalMeasure, double>> best;
    for (int pieces : s.spline_pieces) {
        auto r = detail::spline_floor_lp(t, iv, pieces, s.moment.residual_tol);
        if (!r || !(r->second > 0.0)) continue;
        if (!best || r->second > best->second) best = std::move(r);
        if (best->second >= s.accept_fraction) break;
    }
    if (best) return std::move(best->first);
    if (v.density) return *v.density;
    // A single constraint: the uniform density of the right mass.
    IntervalMeasure mu;
    mu.interval = iv;
    mu.floor = t.omega0() / (iv.b - iv.a);
    return mu;
}

// Zonal body with rho(u) = G(cap_fraction(n, |u_1|)); its radial distribution
// against the unit ball is the normalized measure.
inline StarBody body_from_measure(const IntervalMeasure& mu, int n, int knots = 4097) {
    if (n < 2) fail_input("body_from_measure: dimension must be >= 2");
    if (knots < 2) fail_input("body_from_measure: need at least two profile knots");
    const double mass = mu.mass();
    if (rel_diff(mass, ball_volume(n)) > 1e-9) fail_input("body_from_measure: mass must equal |B^n_2|");
    if (!(mu.floor > 0.0)) fail_input("body_from_measure: measure needs a positive floor");
    TailProfile prof(mu);
    std::vector<double> t(knots), rho(knots);
    for (int k = 0; k < knots; ++k) {
        // ascending t, uniform in the polar angle
        const double phi = 0.5 * kPi * (knots - 1 - k) / (knots - 1);
        double tt = std::cos(phi);
        if (k == 0) tt = 0.0;
        if (k == knots - 1) tt = 1.0;
        t[k] = tt;
        rho[k] = prof.G(cap_fraction(n, tt));
    }
    return StarBody::zonal(n, std::move(t), std::move(rho));
}

struct Realization {
    ConeVerdict verdict;
    StarBody k, l;
    double max_rel_dev = 0.0;  // recomputed tuple vs target, when a grid was given
    std::optional<IntervalMeasure> measure;
};

// Witness pair (K, L) with W_i(K, L) = omega_i for i in the index set.
inline Realization realize_pair(const QuermassTuple& t, int n, const SphereGrid* grid = nullptr,
                                const SynthSettings& s = {}) {
    if (n < 1) fail_input("realize_pair: dimension must be >= 1");
    if (t.dim != 0 && t.dim != n) fail_dimension("realize_pair: tuple targets another dimension");
    Realization r;
    r.verdict = interval_search(t, s.moment);
    const double vol = ball_volume(n);
    const double scale = std::pow(t.omega0() / vol, 1.0 / n);
    if (r.verdict.status == ConeStatus::GeometricRay) {
        r.k = StarBody::ball(n, scale);
        r.l = StarBody::ball(n, scale * *r.verdict.lambda);
    } else if (r.verdict.status == ConeStatus::Interior && n >= 2) {
        QuermassTuple norm = t;
        for (double& w : norm.values) w *= vol / t.omega0();
        // The scan stops at the first interior doubling, which can leave the
        // tuple close to that interval's boundary; refine over two more.
        const Interval scan = *r.verdict.interval;
        const Interval iv = refine_interval(norm, {scan.a / 4, scan.b * 4}, s);
        IntervalMeasure mu = measure_from_moments(norm, iv, s);
        StarBody lp = body_from_measure(mu, n, s.profile_knots);
        r.k = StarBody::ball(n, scale);
        r.l = StarBody::dilate(lp, scale);
        r.measure = std::move(mu);
    } else {
        throw RefusalError(std::string("realize_pair: tuple verdict is ") + to_string(r.verdict.status), r.verdict);
    }
    if (grid) {
        require_same_dim(grid->dim(), n, "realize_pair");
        PairQuadrature q(r.k, r.l, *grid);
        for (std::size_t j = 0; j < t.size(); ++j)
            r.max_rel_dev = std::max(r.max_rel_dev, rel_diff(q(t.indices[j]), t.values[j]));
    }
    return r;
}

}  // namespace dualq
