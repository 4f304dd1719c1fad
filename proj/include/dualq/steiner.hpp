#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hankel.hpp"
#include "moment.hpp"
#include "numerics.hpp"
#include "polynomial.hpp"
#include "quermass.hpp"
#include "sphere_grid.hpp"
#include "star_body.hpp"
#include "synth.hpp"

namespace dualq {

// f(z) = sum C(n,i) W_i z^i
struct DualSteinerPoly {
    int dim = 0;
    std::vector<double> w;       // W_0..W_n
    std::vector<double> coeffs;  // C(n,i) W_i
    std::optional<std::pair<StarBody, StarBody>> provenance;

    Complex operator()(Complex z) const { return poly_eval(coeffs, z); }
    double scale() const { return max_abs_coeff(coeffs); }
};

inline DualSteinerPoly build_poly_from_tuple(const std::vector<double>& w, int n) {
    if (n < 1) fail_input("build_poly: dimension must be >= 1");
    if (w.size() != static_cast<std::size_t>(n) + 1) fail_input("build_poly: need W_0..W_n");
    DualSteinerPoly p;
    p.dim = n;
    p.w = w;
    for (int i = 0; i <= n; ++i) {
        if (!(w[i] > 0.0) || !std::isfinite(w[i])) fail_input("build_poly: entries must be positive");
        p.coeffs.push_back(binomial(n, i) * w[i]);
    }
    return p;
}

inline DualSteinerPoly build_poly_from_tuple(const QuermassTuple& t) {
    const int n = static_cast<int>(t.size()) - 1;
    for (int i = 0; i <= n; ++i)
        if (t.indices[i] != i) fail_input("build_poly: tuple must carry the indices 0..n");
    if (t.dim != 0 && t.dim != n) fail_dimension("build_poly: tuple length does not match its dimension");
    return build_poly_from_tuple(t.values, n);
}

inline DualSteinerPoly build_poly(const StarBody& k, const StarBody& l, const SphereGrid& grid) {
    require_same_dim(k.dim(), l.dim(), "build_poly");
    require_same_dim(k.dim(), grid.dim(), "build_poly");
    const int n = grid.dim();
    PairQuadrature q(k, l, grid);
    std::vector<double> w;
    for (int i = 0; i <= n; ++i) w.push_back(q(i));
    DualSteinerPoly p = build_poly_from_tuple(w, n);
    p.provenance = std::make_pair(k, l);
    return p;
}

// W from polynomial coefficients c_i = C(n,i) W_i; entries need not be positive.
inline std::vector<double> tuple_from_coeffs(const std::vector<double>& c) {
    const int n = static_cast<int>(c.size()) - 1;
    std::vector<double> w;
    for (int i = 0; i <= n; ++i) w.push_back(c[i] / binomial(n, i));
    return w;
}

struct RootSet {
    std::vector<Complex> roots;
    double residual = 0.0;  // max |f(z)| / max |c_i|
};

inline RootSet roots(const DualSteinerPoly& p) {
    RootSet r;
    r.roots = poly_roots(p.coeffs);
    r.residual = root_residual(p.coeffs, r.roots);
    return r;
}

// max over j of |s_j - (-1)^j C(n,j) W_{n-j} / W_n| relative to the target
inline double vieta_deviation(const DualSteinerPoly& p, const RootSet& r) {
    const auto e = elementary_symmetric(r.roots);
    const int n = p.dim;
    double worst = 0.0;
    for (int j = 1; j <= n; ++j) {
        const double target = (j % 2 ? -1.0 : 1.0) * binomial(n, j) * p.w[n - j] / p.w[n];
        worst = std::max(worst, std::abs(e[j] - target) / std::abs(target));
    }
    return worst;
}

// max over test points of |f_{K;L}(z) - z^n f_{L;K}(1/z)| / |f_{K;L}(z)|
inline double reciprocity_deviation(const DualSteinerPoly& kl, const DualSteinerPoly& lk, std::uint64_t seed,
                                    int points = 20) {
    require_same_dim(kl.dim, lk.dim, "reciprocity");
    auto rng = make_rng(seed, 11);
    std::uniform_real_distribution<double> rad(0.2, 3.0), ang(0.0, 2.0 * kPi);
    double worst = 0.0;
    for (int k = 0; k < points; ++k) {
        const Complex z = std::polar(rad(rng), ang(rng));
        const Complex lhs = kl(z), rhs = std::pow(z, kl.dim) * lk(1.0 / z);
        worst = std::max(worst, std::abs(lhs - rhs) / std::abs(lhs));
    }
    return worst;
}

// ---------------------------------------------------------------------------
// Root transformations of the first body.

enum class RootTransform { Scale, Shift, Compress };

struct TransformedPair {
    StarBody k, l;
    Complex predicted;
};

// param: lambda > 0 (scale), mu >= 0 (shift), 0 < rho <= 1 (compress).
inline TransformedPair transform_root(RootTransform kind, double param, const StarBody& k, const StarBody& l,
                                      Complex gamma, const SphereGrid& grid, double root_tol = 1e-8) {
    const DualSteinerPoly p = build_poly(k, l, grid);
    if (std::abs(p(gamma)) > root_tol * poly_abs_eval(p.coeffs, std::abs(gamma)))
        fail_input("transform_root: gamma is not a root of the pair's polynomial");
    switch (kind) {
        case RootTransform::Scale:
            if (!(param > 0.0)) fail_input("transform_root: scale needs lambda > 0");
            return {StarBody::dilate(k, param), l, param * gamma};
        case RootTransform::Shift:
            if (!(param >= 0.0)) fail_input("transform_root: shift needs mu >= 0");
            if (param == 0.0) return {k, l, gamma};
            return {radial_sum(k, l, 1.0, param), l, gamma - param};
        case RootTransform::Compress: {
            if (!(param > 0.0 && param <= 1.0)) fail_input("transform_root: compress needs 0 < rho <= 1");
            const double a = gamma.real(), b = gamma.imag();
            if (!(a < 0.0)) fail_input("transform_root: compress needs Re gamma < 0");
            const double mu = (param - 1.0) * a;
            StarBody nk = mu > 0.0 ? radial_sum(k, l, param, mu) : StarBody::dilate(k, param);
            return {nk, l, Complex(a, param * b)};
        }
    }
    fail_input("transform_root: unknown transformation");
}

// ---------------------------------------------------------------------------
// Realizing derivatives and antiderivatives in neighbouring dimensions.

struct DimensionShift {
    Realization realization;
    std::vector<double> target;    // coefficients the realized polynomial must have
    std::vector<double> realized;  // coefficients recomputed from the realized pair
    double max_rel_dev = 0.0;      // coefficientwise
    double constant = 0.0;         // antiderivative only: the lifted W_0
    double margin = 0.0;           // antiderivative only: min Hankel eigenvalue at the constant
};

namespace detail {

inline double coeff_deviation(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, rel_diff(a[i], b[i]));
    return worst;
}

}  // namespace detail

// f' is the dual Steiner polynomial of a pair in dimension n-1 with
// W'_j = n W_{j+1}.
inline DimensionShift derivative_descend(const StarBody& k, const StarBody& l, const GridSet& grids,
                                         const SynthSettings& s = {}) {
    require_same_dim(k.dim(), l.dim(), "derivative_descend");
    const int n = k.dim();
    if (n < 2) fail_input("derivative_descend: dimension must be >= 2");
    const DualSteinerPoly p = build_poly(k, l, *grids.get(n));
    std::vector<double> w;
    for (int j = 0; j < n; ++j) w.push_back(n * p.w[j + 1]);
    DimensionShift r;
    r.target = poly_derivative(p.coeffs);
    const auto g = grids.get(n - 1);
    r.realization = realize_pair(consecutive_tuple(n - 1, w), n - 1, g.get(), s);
    r.realized = build_poly(r.realization.k, r.realization.l, *g).coeffs;
    r.max_rel_dev = detail::coeff_deviation(r.target, r.realized);
    return r;
}

namespace detail {

// Lifted tuple (C, W_0/(n+1), ..., W_n/(n+1)).
inline std::vector<double> lifted_tuple(const std::vector<double>& w, double c) {
    const double k = static_cast<double>(w.size());
    std::vector<double> out = {c};
    for (double x : w) out.push_back(x / k);
    return out;
}

inline double lift_margin(const std::vector<double>& w, double c, Interval iv) {
    const auto [a, b] = hankel_split(lifted_tuple(w, c), iv);
    double e = scaled_min_eigenvalue(a);
    if (b.rows() > 0) e = std::min(e, scaled_min_eigenvalue(b));
    return e;
}

}  // namespace detail

// F with F' = f in dimension n+1: W''_0 = C free, W''_{j+1} = W_j/(n+1).
// C is the point of the admissible range maximizing the smallest eigenvalue
// of the parity-split Hankel matrices on the pair's ratio range (a concave
// function of C, so golden-section search finds it).
inline DimensionShift antiderivative_lift(const StarBody& k, const StarBody& l, const GridSet& grids,
                                          const SynthSettings& s = {}) {
    require_same_dim(k.dim(), l.dim(), "antiderivative_lift");
    const int n = k.dim();
    if (n < 1) fail_input("antiderivative_lift: dimension must be >= 1");
    const auto gn = grids.get(n);
    PairQuadrature q(k, l, *gn);
    std::vector<double> w;
    for (int i = 0; i <= n; ++i) w.push_back(q(i));
    const DualSteinerPoly p = build_poly_from_tuple(w, n);
    DimensionShift r;
    const RatioRange rr = q.range();
    const double w1 = w[0] / (n + 1);
    if (rr.dilate) {
        r.constant = w1 / std::sqrt(rr.a * rr.b);
    } else {
        const Interval iv{rr.a, rr.b};
        double lo = w1 / rr.b, hi = w1 / rr.a;
        const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - phi * (hi - lo), x2 = lo + phi * (hi - lo);
        double f1 = detail::lift_margin(w, x1, iv), f2 = detail::lift_margin(w, x2, iv);
        for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
            if (f1 < f2) {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + phi * (hi - lo);
                f2 = detail::lift_margin(w, x2, iv);
            } else {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - phi * (hi - lo);
                f1 = detail::lift_margin(w, x1, iv);
            }
        }
        r.constant = 0.5 * (lo + hi);
        r.margin = detail::lift_margin(w, r.constant, iv);
        if (!(r.margin > 0.0)) {
            ConeVerdict v;
            v.status = ConeStatus::Unknown;
            v.margin = r.margin;
            throw RefusalError("antiderivative_lift: no interior completion found", v);
        }
    }
    const auto lifted = detail::lifted_tuple(w, r.constant);
    const auto g = grids.get(n + 1);
    r.realization = realize_pair(consecutive_tuple(n + 1, lifted), n + 1, g.get(), s);
    const auto realized_lift = build_poly(r.realization.k, r.realization.l, *g).coeffs;
    r.target = p.coeffs;
    r.realized = poly_derivative(realized_lift);
    r.max_rel_dev = detail::coeff_deviation(r.target, r.realized);
    return r;
}

// ---------------------------------------------------------------------------
// Stability.

struct StabilityReport {
    Stability routh = Stability::Marginal;  // authoritative
    double max_real = 0.0;                  // largest real part among the roots
    bool roots_agree = true;                // advisory cross-check
};

inline StabilityReport stability_check(const DualSteinerPoly& p, double tau = 1e-9) {
    StabilityReport r;
    r.routh = routh_stability(p.coeffs);
    const auto z = poly_roots(p.coeffs);
    r.max_real = -INFINITY;
    for (const Complex& x : z) r.max_real = std::max(r.max_real, x.real());
    if (r.routh == Stability::Stable) r.roots_agree = r.max_real < -tau || std::abs(r.max_real) <= tau;
    if (r.routh == Stability::Nonstable) r.roots_agree = r.max_real > tau || std::abs(r.max_real) <= tau;
    return r;
}

struct NonstableWitness {
    QuermassTuple tuple;  // generated target
    Realization realization;
    DualSteinerPoly poly;  // recomputed from the realized pair
    Complex root;          // Re > 0, Im >= 0
    double residual = 0.0;
    int attempts = 0;
};

// Moments of p U[a, a(1+h)] + q U[b(1-h), b] + floor on [a,b], total mass |B^n|.
inline std::vector<double> endpoint_moments(int n, double a, double b, double p, double q, double floor_frac,
                                            double h = 0.05) {
    std::vector<double> w(n + 1, 0.0);
    const double fl = floor_frac * (p + q);
    for (int i = 0; i <= n; ++i) {
        w[i] = p * power_integral(a, a * (1 + h), i) / (a * h) + q * power_integral(b * (1 - h), b, i) / (b * h) +
               fl * power_integral(a, b, i) / (b - a);
    }
    const double scale = ball_volume(n) / w[0];
    for (double& x : w) x *= scale;
    return w;
}

// Seeded search over endpoint-concentrated densities for a realizable
// non-stable dual Steiner polynomial.
inline NonstableWitness nonstable_search(int n, std::uint64_t seed, const SphereGrid& grid, int budget = 200,
                                         const SynthSettings& s = {}) {
    if (n < 3) fail_input("nonstable_search: needs n >= 3");
    require_same_dim(grid.dim(), n, "nonstable_search");
    auto rng = make_rng(seed, 13);
    std::uniform_real_distribution<double> la(std::log(0.05), std::log(0.2)), lb(std::log(5.0), std::log(20.0)),
        lq(std::log(1e-3), std::log(5e-2));
    for (int attempt = 1; attempt <= budget; ++attempt) {
        const double a = std::exp(la(rng)), b = std::exp(lb(rng)), q = std::exp(lq(rng));
        const auto w = endpoint_moments(n, a, b, 1.0, q, 1e-3);
        if (routh_stability(build_poly_from_tuple(w, n).coeffs) != Stability::Nonstable) continue;
        const QuermassTuple t = consecutive_tuple(n, w);
        Realization real;
        try {
            real = realize_pair(t, n, &grid, s);
        } catch (const RefusalError&) {
            continue;
        }
        DualSteinerPoly p = build_poly(real.k, real.l, grid);
        if (routh_stability(p.coeffs) != Stability::Nonstable) continue;
        const RootSet rs = roots(p);
        for (const Complex& z : rs.roots) {
            if (z.real() > 0.0 && z.imag() >= 0.0) {
                NonstableWitness out{t, std::move(real), p, z, rs.residual, attempt};
                return out;
            }
        }
    }
    ConeVerdict v;
    throw RefusalError("nonstable_search: budget exhausted", v);
}

// ---------------------------------------------------------------------------
// All roots real forces them to coincide and the pair to be dilates.

struct RigidityReport {
    bool all_real = false;
    bool coincide = false;
    bool dilate = false;
    std::vector<double> newton_slack;  // E_j^2 - E_{j-1} E_{j+1}, E_j = s_j / C(n,j)
    bool newton_holds = false;
};

inline RigidityReport real_roots_rigidity_check(const DualSteinerPoly& p, const SphereGrid& grid) {
    if (!p.provenance) fail_input("real_roots_rigidity_check: polynomial has no provenance");
    const auto z = poly_roots(p.coeffs);
    RigidityReport r;
    r.all_real = std::all_of(z.begin(), z.end(), [](Complex x) { return std::abs(x.imag()) <= 1e-8 * std::max(1.0, std::abs(x)); });
    double zmax = 0.0, spread = 0.0;
    for (const Complex& x : z) zmax = std::max(zmax, std::abs(x));
    for (const Complex& x : z)
        for (const Complex& y : z) spread = std::max(spread, std::abs(x - y));
    r.coincide = spread <= 1e-6 * zmax;
    r.dilate = ratio_range(p.provenance->first, p.provenance->second, grid).dilate;
    const auto e = elementary_symmetric(z);
    const int n = p.dim;
    r.newton_holds = true;
    for (int j = 1; j < n; ++j) {
        auto E = [&](int i) { return e[i].real() / binomial(n, i); };
        const double slack = E(j) * E(j) - E(j - 1) * E(j + 1);
        r.newton_slack.push_back(slack);
        if (slack < -1e-10 * std::max(1.0, E(j) * E(j))) r.newton_holds = false;
    }
    if (r.all_real && !(r.coincide && r.dilate)) {
        std::ostringstream os;
        os << "real_roots_rigidity_check: all roots real but";
        if (!r.coincide) os << " they are spread by " << spread;
        if (!r.dilate) os << " the pair is not a dilate pair";
        fail_invariant(os.str());
    }
    return r;
}

}  // namespace dualq
