#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hankel.hpp"
#include "moment.hpp"
#include "numerics.hpp"
#include "polynomial.hpp"
#include "sphere_grid.hpp"
#include "star_body.hpp"
#include "steiner.hpp"
#include "synth.hpp"

namespace dualq {

enum class Membership { In, Out, Unknown };

inline const char* to_string(Membership m) {
    switch (m) {
        case Membership::In: return "IN";
        case Membership::Out: return "OUT";
        case Membership::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

struct ConeWitness {
    std::vector<double> tuple;  // W_0..W_n
    std::optional<std::pair<StarBody, StarBody>> pair;
    double residual = 0.0;  // |f(z)| / sum |c_i| |z|^i
};

struct ConeQuery {
    int n = 0;
    Complex z;
    Membership status = Membership::Unknown;
    std::optional<ConeWitness> witness;
    std::string certificate;  // name of the violated necessary condition, for OUT
    double margin = 0.0;      // best search margin
};

inline double root_residual_at(const std::vector<double>& coeffs, Complex z) {
    return std::abs(poly_eval(coeffs, z)) / poly_abs_eval(coeffs, std::abs(z));
}

inline double witness_residual(const StarBody& k, const StarBody& l, Complex z, const SphereGrid& grid) {
    return root_residual_at(build_poly(k, l, grid).coeffs, z);
}

// ---------------------------------------------------------------------------
// Certificates.

// b > sqrt(3) a is necessary for a + bi to be a root in dimension three.
inline bool necessary_bound_n3(Complex z) { return !(z.real() > 0.0 && z.imag() <= std::sqrt(3.0) * z.real()); }

inline std::string out_certificate(Complex z, int n) {
    if (z.imag() == 0.0 && z.real() >= 0.0) return "nonnegative real axis";
    if (n == 2 && z.real() >= 0.0) return "exact law for n=2: Re z >= 0";
    if (n == 3 && !necessary_bound_n3(z)) return "n=3 bound: Im z <= sqrt(3) Re z";
    return {};
}

namespace detail {

inline void check_query(Complex z, int n) {
    if (n < 2) fail_input("root cone: dimension must be >= 2");
    if (!(z.imag() >= 0.0)) fail_input("root cone: query must lie in the closed upper half-plane");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) fail_input("root cone: query must be finite");
}

}  // namespace detail

inline ConeQuery membership_exact_n2(Complex z) {
    detail::check_query(z, 2);
    ConeQuery q;
    q.n = 2;
    q.z = z;
    q.certificate = out_certificate(z, 2);
    if (!q.certificate.empty()) {
        q.status = Membership::Out;
        return q;
    }
    q.status = Membership::In;
    ConeWitness w;
    w.tuple = {std::norm(z), -z.real(), 1.0};
    w.residual = root_residual_at(build_poly_from_tuple(w.tuple, 2).coeffs, z);
    q.witness = std::move(w);
    return q;
}

// ---------------------------------------------------------------------------
// Moving a verified root by scaling and shifting the first body.

// From a pair with root gamma (Im gamma > 0) reach z with arg z >= arg gamma:
// scale by Im z / Im gamma, then shift left. nullopt when z is not reachable.
inline std::optional<StarBody> steer_root(const StarBody& k, const StarBody& l, Complex gamma, Complex z) {
    if (!(gamma.imag() > 0.0) || !(z.imag() > 0.0)) return std::nullopt;
    const double lam = z.imag() / gamma.imag();
    double mu = lam * gamma.real() - z.real();
    if (mu < 0.0) {
        if (mu < -1e-13 * std::abs(z)) return std::nullopt;
        mu = 0.0;
    }
    return mu > 0.0 ? radial_sum(k, l, lam, mu) : StarBody::dilate(k, lam);
}

// Dilate witness for a negative real point: (|z| L, L).
inline ConeWitness dilate_witness(Complex z, const StarBody& l, const SphereGrid& grid) {
    ConeWitness w;
    StarBody k = StarBody::dilate(l, std::abs(z.real()));
    const auto p = build_poly(k, l, grid);
    w.tuple = p.w;
    w.residual = root_residual_at(p.coeffs, z);
    w.pair = std::make_pair(k, l);
    return w;
}

struct SearchSettings {
    int multistarts = 16;
    int evals_per_start = 400;  // Nelder-Mead objective evaluations
    std::uint64_t seed = 1;
    double rotate = 1e-4;       // aim this angle below z, so the realized root can be steered onto z
    double margin_min = 1e-9;   // scaled Hankel margin that triggers realization
    double residual_max = 1e-8;
    bool pair_for_n2 = true;    // realize a pair in dimension two, where the exact law already decides
    SynthSettings synth;
};

namespace detail {

// Scaled smallest eigenvalue of the interval-free Hankel matrices of W_0..W_n
// (positive-half-line moment problem); negative when some W_i <= 0.
inline double stieltjes_margin(const std::vector<double>& w) {
    int bad = 0;
    for (double x : w) bad += !(x > 0.0);
    if (bad) return -static_cast<double>(bad);
    const int n = static_cast<int>(w.size()) - 1;
    const int ra = n / 2 + 1, rb = (n + 1) / 2;
    double m = scaled_min_eigenvalue(hankel(w, ra, 0));
    if (rb > 0) m = std::min(m, scaled_min_eigenvalue(hankel(w, rb, 1)));
    return m;
}

// Roots (z, conj z, Gamma) -> W_0..W_n with W_n = 1.
inline std::vector<double> tuple_from_roots(const std::vector<Complex>& roots) {
    return tuple_from_coeffs(poly_from_roots(roots));
}

// Gamma from unconstrained parameters: conjugate pairs in the open left
// half-plane (r = e^x, angle in (pi/2, pi)) and one negative real for odd n.
inline std::vector<Complex> gamma_from_params(const std::vector<double>& x, int n) {
    std::vector<Complex> g;
    const int pairs = (n - 2) / 2;
    for (int k = 0; k < pairs; ++k) {
        const double r = std::exp(x[2 * k]);
        const double phi = 0.5 * kPi + 0.5 * kPi / (1.0 + std::exp(-x[2 * k + 1]));
        g.push_back(std::polar(r, phi));
        g.push_back(std::polar(r, -phi));
    }
    if (n % 2 == 1) g.push_back(-std::exp(x[2 * pairs]));
    return g;
}

inline int gamma_param_count(int n) { return 2 * ((n - 2) / 2) + (n % 2); }

// Nelder-Mead maximization within an evaluation budget.
template <class F>
std::pair<std::vector<double>, double> nelder_mead_max(F&& f, std::vector<double> x0, double step, int budget) {
    const std::size_t d = x0.size();
    std::vector<std::vector<double>> s(d + 1, x0);
    std::vector<double> v(d + 1);
    for (std::size_t i = 0; i < d; ++i) s[i + 1][i] += step;
    int evals = 0;
    auto eval = [&](const std::vector<double>& x) {
        ++evals;
        return f(x);
    };
    for (std::size_t i = 0; i <= d; ++i) v[i] = eval(s[i]);
    while (evals < budget) {
        std::vector<std::size_t> ord(d + 1);
        for (std::size_t i = 0; i <= d; ++i) ord[i] = i;
        std::sort(ord.begin(), ord.end(), [&](std::size_t a, std::size_t b) { return v[a] > v[b]; });
        const std::size_t best = ord[0], worst = ord[d], second = ord[d - 1];
        if (std::abs(v[best] - v[worst]) <= 1e-14 * std::max(1.0, std::abs(v[best]))) {
            double spread = 0.0;
            for (std::size_t i = 0; i <= d; ++i)
                for (std::size_t j = 0; j < d; ++j) spread = std::max(spread, std::abs(s[i][j] - s[best][j]));
            if (spread < 1e-10) break;
        }
        std::vector<double> c(d, 0.0);
        for (std::size_t i = 0; i <= d; ++i)
            if (i != worst)
                for (std::size_t j = 0; j < d; ++j) c[j] += s[i][j] / static_cast<double>(d);
        auto along = [&](double t) {
            std::vector<double> x(d);
            for (std::size_t j = 0; j < d; ++j) x[j] = c[j] + t * (s[worst][j] - c[j]);
            return x;
        };
        const auto xr = along(-1.0);
        const double fr = eval(xr);
        if (fr > v[best]) {
            const auto xe = along(-2.0);
            const double fe = eval(xe);
            if (fe > fr) {
                s[worst] = xe;
                v[worst] = fe;
            } else {
                s[worst] = xr;
                v[worst] = fr;
            }
        } else if (fr > v[second]) {
            s[worst] = xr;
            v[worst] = fr;
        } else {
            const auto xc = along(fr > v[worst] ? -0.5 : 0.5);
            const double fc = eval(xc);
            if (fc > std::max(fr, v[worst])) {
                s[worst] = xc;
                v[worst] = fc;
            } else {
                for (std::size_t i = 0; i <= d; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < d; ++j) s[i][j] = s[best][j] + 0.5 * (s[i][j] - s[best][j]);
                    v[i] = eval(s[i]);
                }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i <= d; ++i)
        if (v[i] > v[best]) best = i;
    return {s[best], v[best]};
}

// Realize a tuple whose polynomial has a root near `aim`, then steer that root
// exactly onto z.
inline std::optional<ConeWitness> realize_witness(const std::vector<double>& w, Complex aim, Complex z,
                                                  const SphereGrid& grid, const SearchSettings& s) {
    const int n = static_cast<int>(w.size()) - 1;
    Realization r;
    try {
        r = realize_pair(consecutive_tuple(n, w), n, &grid, s.synth);
    } catch (const RefusalError&) {
        return std::nullopt;
    }
    const auto p = build_poly(r.k, r.l, grid);
    Complex gamma;
    double best = INFINITY;
    for (const Complex& g : poly_roots(p.coeffs))
        if (g.imag() > 0.0 && std::abs(g - aim) < best) {
            best = std::abs(g - aim);
            gamma = g;
        }
    if (!std::isfinite(best)) return std::nullopt;
    auto k = steer_root(r.k, r.l, gamma, z);
    if (!k) return std::nullopt;
    ConeWitness out;
    const auto q = build_poly(*k, r.l, grid);
    out.tuple = q.w;
    out.residual = root_residual_at(q.coeffs, z);
    out.pair = std::make_pair(*k, r.l);
    if (!(out.residual <= s.residual_max)) return std::nullopt;
    return out;
}

}  // namespace detail

// z in the cone of dimension n? IN comes with a verified witness pair, OUT
// only with a certificate, UNKNOWN otherwise.
inline ConeQuery membership_search(Complex z, int n, const SphereGrid& grid, const SearchSettings& s = {}) {
    detail::check_query(z, n);
    require_same_dim(grid.dim(), n, "membership_search");
    ConeQuery q;
    q.n = n;
    q.z = z;
    q.certificate = out_certificate(z, n);
    if (!q.certificate.empty()) {
        q.status = Membership::Out;
        return q;
    }
    if (z.imag() == 0.0) {
        q.witness = dilate_witness(z, StarBody::ball(n), grid);
        q.status = q.witness->residual <= s.residual_max ? Membership::In : Membership::Unknown;
        return q;
    }
    if (n == 2) {
        // The exact law decides; a realized pair is attached when synthesis
        // resolves it on the grid.
        q = membership_exact_n2(z);
        const double eps = std::min(s.rotate, 0.5 * (std::arg(z) - 0.5 * kPi));
        const Complex aim = std::polar(std::abs(z), std::arg(z) - eps);
        std::vector<double> w = {std::norm(aim), -aim.real(), 1.0};
        const double sc = ball_volume(2) / w[0];
        for (double& x : w) x *= sc;
        q.margin = detail::stieltjes_margin(w);
        if (!s.pair_for_n2) return q;
        if (auto pw = detail::realize_witness(w, aim, z, grid, s)) q.witness = std::move(pw);
        return q;
    }
    const double lower = n == 3 ? kPi / 3 : 0.0;
    const double arg = std::arg(z);
    auto rng = make_rng(s.seed, 17);
    for (double rot = s.rotate; rot <= 1e-2 * (1 + 1e-12); rot *= 10.0) {
        const double eps = std::min(rot, 0.5 * (arg - lower));
        const Complex aim = std::polar(std::abs(z), arg - eps);
        std::vector<double> best_w;
        {
            const int d = detail::gamma_param_count(n);
            auto objective = [&](const std::vector<double>& x) {
                auto roots = detail::gamma_from_params(x, n);
                roots.push_back(aim);
                roots.push_back(std::conj(aim));
                return detail::stieltjes_margin(detail::tuple_from_roots(roots));
            };
            std::uniform_real_distribution<double> lr(-1.5, 1.5), ang(-3.0, 3.0);
            double best = -INFINITY;
            std::vector<double> bx;
            for (int start = 0; start < s.multistarts; ++start) {
                std::vector<double> x0(d);
                for (int j = 0; j < d; ++j) x0[j] = (j % 2 == 0 || (n % 2 == 1 && j == d - 1)) ? std::log(std::abs(z)) + lr(rng) : ang(rng);
                auto [x, v] = detail::nelder_mead_max(objective, x0, 0.5, s.evals_per_start);
                if (v > best) {
                    best = v;
                    bx = x;
                }
            }
            q.margin = best;
            if (!(best > s.margin_min)) continue;
            auto roots = detail::gamma_from_params(bx, n);
            roots.push_back(aim);
            roots.push_back(std::conj(aim));
            best_w = detail::tuple_from_roots(roots);
        }
        if (!(q.margin > s.margin_min)) continue;
        // normalize to W_0 = |B^n| before synthesis
        const double sc = ball_volume(n) / best_w[0];
        for (double& x : best_w) x *= sc;
        if (auto w = detail::realize_witness(best_w, aim, z, grid, s)) {
            q.witness = std::move(w);
            q.status = Membership::In;
            return q;
        }
    }
    q.status = Membership::Unknown;
    return q;
}

// ---------------------------------------------------------------------------
// Convexity: from verified witnesses for g1 and g2, a witness for
// rho g1 + (1 - rho) g2 sharing the second body of the witness with the
// smaller argument.

struct CombinationWitness {
    Complex z;
    StarBody m, l;
    double residual = 0.0;
};

inline CombinationWitness convex_combination_witness(Complex g1, const std::pair<StarBody, StarBody>& w1, Complex g2,
                                                     const std::pair<StarBody, StarBody>& w2, double rho,
                                                     const SphereGrid& grid, double verify_tol = 1e-8) {
    require_same_dim(w1.first.dim(), w2.first.dim(), "convex_combination_witness");
    require_same_dim(w1.first.dim(), grid.dim(), "convex_combination_witness");
    if (!(rho > 0.0 && rho < 1.0)) fail_input("convex_combination_witness: rho must lie in (0,1)");
    for (auto [g, w] : {std::pair{g1, &w1}, std::pair{g2, &w2}}) {
        if (g.imag() < 0.0) g = std::conj(g);
        if (g.imag() == 0.0 && !(g.real() < 0.0)) fail_input("convex_combination_witness: root on the nonnegative axis");
        if (witness_residual(w->first, w->second, g, grid) > verify_tol)
            fail_input("convex_combination_witness: witness does not verify");
    }
    g1 = Complex(g1.real(), std::abs(g1.imag()));
    g2 = Complex(g2.real(), std::abs(g2.imag()));
    CombinationWitness out;
    out.z = rho * g1 + (1.0 - rho) * g2;
    if (g1.imag() == 0.0 && g2.imag() == 0.0) {
        const double c = rho * std::abs(g1.real()) + (1.0 - rho) * std::abs(g2.real());
        out.l = w1.second;
        out.m = StarBody::dilate(out.l, c);
    } else {
        // the reference has the largest a/b among roots with b > 0
        bool first_ref = g1.imag() > 0.0;
        if (g1.imag() > 0.0 && g2.imag() > 0.0) first_ref = g1.real() / g1.imag() >= g2.real() / g2.imag();
        const Complex ga = first_ref ? g1 : g2, gb = first_ref ? g2 : g1;
        const auto& ref = first_ref ? w1 : w2;
        const double r = first_ref ? rho : 1.0 - rho;
        const double a1 = ga.real(), b1 = ga.imag(), a2 = gb.real(), b2 = gb.imag();
        const double mu = b1 / (r * b1 + (1.0 - r) * b2);
        const double nu = mu * (r * a1 + (1.0 - r) * a2);
        const double shift = std::max(0.0, a1 - nu);
        out.l = ref.second;
        out.m = shift > 0.0 ? radial_sum(ref.first, out.l, 1.0 / mu, shift / mu) : StarBody::dilate(ref.first, 1.0 / mu);
    }
    out.residual = witness_residual(out.m, out.l, out.z, grid);
    return out;
}

// ---------------------------------------------------------------------------
// Dimension monotonicity: gamma lies in the convex hull of the roots of the
// lifted polynomial.

struct EmbedReport {
    bool contained = false;
    std::vector<Complex> lifted_roots;
    DimensionShift lift;
};

inline EmbedReport monotone_embed(Complex gamma, const StarBody& k, const StarBody& l, const GridSet& grids,
                                  const SynthSettings& s = {}, double verify_tol = 1e-8) {
    require_same_dim(k.dim(), l.dim(), "monotone_embed");
    const int n = k.dim();
    if (witness_residual(k, l, gamma, *grids.get(n)) > verify_tol) fail_input("monotone_embed: witness does not verify");
    EmbedReport r;
    r.lift = antiderivative_lift(k, l, grids, s);
    r.lifted_roots = poly_roots(build_poly(r.lift.realization.k, r.lift.realization.l, *grids.get(n + 1)).coeffs);
    r.contained = in_convex_hull(gamma, r.lifted_roots, 1e-9);
    return r;
}

// ---------------------------------------------------------------------------
// Directional map of the cone at radius 1.

struct ConeMapEntry {
    double theta = 0.0;
    ConeQuery query;
};

// theta_k = k pi / samples, k = 1..samples. For n = 2 the exact law decides
// with tuple witnesses. Otherwise angles are scanned upwards; once a pair
// witness exists, every larger angle is reached from it by scaling and
// shifting, so only smaller angles are searched.
inline std::vector<ConeMapEntry> cone_boundary_map(int n, int samples, const SphereGrid& grid,
                                                   const SearchSettings& s = {}) {
    if (n < 2) fail_input("cone_boundary_map: dimension must be >= 2");
    if (samples < 1) fail_input("cone_boundary_map: need at least one sample");
    require_same_dim(grid.dim(), n, "cone_boundary_map");
    std::vector<ConeMapEntry> out;
    std::optional<std::pair<Complex, std::pair<StarBody, StarBody>>> ref;
    for (int k = 1; k <= samples; ++k) {
        ConeMapEntry e;
        e.theta = kPi * k / samples;
        const Complex z = k == samples ? Complex(-1.0, 0.0) : std::polar(1.0, e.theta);
        ConeQuery& q = e.query;
        q.n = n;
        q.z = z;
        // the n=3 bound in angle form, robust to rounding of cos/sin at pi/3
        q.certificate = out_certificate(z, n);
        if (q.certificate.empty() && n == 3 && e.theta <= kPi / 3 * (1.0 + 1e-14))
            q.certificate = "n=3 bound: Im z <= sqrt(3) Re z";
        if (n == 2 && q.certificate.empty() && e.theta <= 0.5 * kPi * (1.0 + 1e-14))
            q.certificate = "exact law for n=2: Re z >= 0";
        if (!q.certificate.empty()) {
            q.status = Membership::Out;
            out.push_back(std::move(e));
            continue;
        }
        if (n == 2) {
            q = membership_exact_n2(z);
        } else if (z.imag() == 0.0) {
            q.witness = dilate_witness(z, StarBody::ball(n), grid);
            q.status = Membership::In;
        } else if (ref) {
            auto m = steer_root(ref->second.first, ref->second.second, ref->first, z);
            if (m) {
                const auto p = build_poly(*m, ref->second.second, grid);
                ConeWitness w;
                w.tuple = p.w;
                w.residual = root_residual_at(p.coeffs, z);
                w.pair = std::make_pair(*m, ref->second.second);
                if (w.residual <= s.residual_max) {
                    q.witness = std::move(w);
                    q.status = Membership::In;
                }
            }
        }
        if (q.status != Membership::In) {
            SearchSettings sk = s;
            sk.seed = splitmix64(s.seed + static_cast<std::uint64_t>(k));
            q = membership_search(z, n, grid, sk);
            if (q.status == Membership::In && q.witness->pair) ref = std::make_pair(z, *q.witness->pair);
        }
        out.push_back(std::move(e));
    }
    return out;
}

}  // namespace dualq
