#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace dualq {

using Complex = std::complex<double>;

// Polynomials are coefficient vectors in ascending degree.

inline Complex poly_eval(const std::vector<double>& c, Complex z) {
    Complex r = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) r = r * z + c[k];
    return r;
}

inline double poly_eval(const std::vector<double>& c, double x) {
    double r = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) r = r * x + c[k];
    return r;
}

// sum |c_k| |z|^k, the natural scale for a rounding-level residual at z
inline double poly_abs_eval(const std::vector<double>& c, double r) {
    double s = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) s = s * r + std::abs(c[k]);
    return s;
}

inline std::vector<double> poly_derivative(const std::vector<double>& c) {
    std::vector<double> d;
    for (std::size_t k = 1; k < c.size(); ++k) d.push_back(static_cast<double>(k) * c[k]);
    return d;
}

inline double max_abs_coeff(const std::vector<double>& c) {
    double m = 0.0;
    for (double x : c) m = std::max(m, std::abs(x));
    return m;
}

// Monic polynomial prod (z - r_k), real coefficients (imaginary parts of a
// conjugate-closed multiset cancel).
inline std::vector<double> poly_from_roots(const std::vector<Complex>& roots) {
    std::vector<Complex> c = {1.0};
    for (const Complex& r : roots) {
        std::vector<Complex> next(c.size() + 1, 0.0);
        for (std::size_t k = 0; k < c.size(); ++k) {
            next[k + 1] += c[k];
            next[k] -= r * c[k];
        }
        c = std::move(next);
    }
    std::vector<double> out(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k].real();
    return out;
}

// e_0..e_n of the multiset.
inline std::vector<Complex> elementary_symmetric(const std::vector<Complex>& z) {
    std::vector<Complex> e(z.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t k = 0; k < z.size(); ++k)
        for (std::size_t j = k + 1; j-- > 0;) e[j + 1] += e[j] * z[k];
    return e;
}

struct RootOptions {
    int max_iter = 2000;
    double merge_radius = 1e-7;  // relative to max(1, |z|)
    double cluster_probe = 1e-2; // candidate radius for multiplicity tests
};

namespace detail {

inline std::vector<std::vector<std::size_t>> components(const std::vector<Complex>& z, double radius) {
    const std::size_t n = z.size();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (std::abs(z[i] - z[j]) <= radius * std::max({1.0, std::abs(z[i]), std::abs(z[j])}))
                parent[find(i)] = find(j);
    std::vector<std::vector<std::size_t>> groups;
    std::vector<long> slot(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (slot[r] < 0) {
            slot[r] = static_cast<long>(groups.size());
            groups.emplace_back();
        }
        groups[static_cast<std::size_t>(slot[r])].push_back(i);
    }
    return groups;
}

// Does c look like a root of multiplicity m? p^(j)(c) must vanish to
// rounding level for j < m.
inline bool multiple_root_at(const std::vector<double>& p, Complex c, std::size_t m) {
    std::vector<double> d = p;
    for (std::size_t j = 0; j < m; ++j) {
        if (d.empty()) return false;
        const double scale = poly_abs_eval(d, std::abs(c));
        if (std::abs(poly_eval(d, c)) > 1e-11 * scale) return false;
        d = poly_derivative(d);
    }
    return true;
}

}  // namespace detail

// All complex roots by Aberth-Ehrlich iteration with Newton polishing.
// Clusters that behave like a multiple root are replaced by their centroid;
// conjugate pairs are symmetrized.
inline std::vector<Complex> poly_roots(const std::vector<double>& coeffs, const RootOptions& opt = {}) {
    std::vector<double> c = coeffs;
    while (!c.empty() && c.back() == 0.0) c.pop_back();
    if (c.size() < 2) fail_input("poly_roots: degree must be >= 1");
    std::vector<Complex> zero_roots;
    // factor out z^k
    std::size_t lead_zeros = 0;
    while (c[lead_zeros] == 0.0) ++lead_zeros;
    c.erase(c.begin(), c.begin() + static_cast<long>(lead_zeros));
    zero_roots.assign(lead_zeros, 0.0);
    const std::size_t deg = c.size() - 1;
    std::vector<Complex> z(deg);
    if (deg > 0) {
        const double lead = c.back();
        for (double& x : c) x /= lead;
        const std::vector<double> dc = poly_derivative(c);
        // start on a circle of the geometric-mean radius, capped by the Cauchy bound
        double cauchy = 0.0;
        for (std::size_t k = 0; k < deg; ++k) cauchy = std::max(cauchy, std::abs(c[k]));
        cauchy += 1.0;
        const double r = std::min(cauchy, std::pow(std::abs(c[0]), 1.0 / static_cast<double>(deg)));
        for (std::size_t k = 0; k < deg; ++k) {
            const double ang = 2.0 * kPi * (static_cast<double>(k) + 0.25) / static_cast<double>(deg) + 0.4;
            z[k] = std::polar(r, ang);
        }
        for (int it = 0; it < opt.max_iter; ++it) {
            double worst = 0.0;
            for (std::size_t k = 0; k < deg; ++k) {
                const Complex pv = poly_eval(c, z[k]), dv = poly_eval(dc, z[k]);
                if (pv == 0.0) continue;
                const Complex w = pv / dv;
                Complex s = 0.0;
                for (std::size_t j = 0; j < deg; ++j)
                    if (j != k) s += 1.0 / (z[k] - z[j]);
                Complex corr = w / (1.0 - w * s);
                if (!std::isfinite(corr.real()) || !std::isfinite(corr.imag())) corr = w;
                z[k] -= corr;
                worst = std::max(worst, std::abs(corr) / std::max(1.0, std::abs(z[k])));
            }
            if (worst < 1e-15) break;
        }
        // Newton polish for simple roots
        for (auto& zk : z)
            for (int it = 0; it < 3; ++it) {
                const Complex dv = poly_eval(dc, zk);
                if (std::abs(dv) == 0.0) break;
                const Complex step = poly_eval(c, zk) / dv;
                const Complex cand = zk - step;
                if (std::abs(poly_eval(c, cand)) < std::abs(poly_eval(c, zk)))
                    zk = cand;
                else
                    break;
            }
        // conjugate symmetrization, before clustering so that centroids are real
        // for clusters straddling the axis
        std::vector<bool> used(z.size(), false);
        for (std::size_t k = 0; k < z.size(); ++k) {
            if (used[k]) continue;
            const double tol = 1e-9 * std::max(1.0, std::abs(z[k]));
            if (std::abs(z[k].imag()) <= tol * 1e-3) {
                z[k] = z[k].real();
                used[k] = true;
                continue;
            }
            std::size_t best = z.size();
            double bd = 0.0;
            for (std::size_t j = 0; j < z.size(); ++j) {
                if (j == k || used[j]) continue;
                const double d = std::abs(z[j] - std::conj(z[k]));
                if (best == z.size() || d < bd) {
                    best = j;
                    bd = d;
                }
            }
            if (best < z.size() && bd <= 1e-6 * std::max(1.0, std::abs(z[k]))) {
                const Complex m(0.5 * (z[k].real() + z[best].real()), 0.5 * (std::abs(z[k].imag()) + std::abs(z[best].imag())));
                z[k] = m;
                z[best] = std::conj(m);
                used[best] = true;
            } else {
                z[k] = z[k].real();  // unpaired: must be real for a real polynomial
            }
            used[k] = true;
        }
        // clusters
        std::vector<Complex> merged;
        for (const auto& g : detail::components(z, opt.cluster_probe)) {
            Complex cen = 0.0;
            for (std::size_t i : g) cen += z[i];
            cen /= static_cast<double>(g.size());
            if (g.size() > 1) {
                // an m-fold root is a simple root of p^(m-1)
                std::vector<double> d = c;
                for (std::size_t j = 0; j + 1 < g.size(); ++j) d = poly_derivative(d);
                const std::vector<double> dd = poly_derivative(d);
                for (int it = 0; it < 8; ++it) {
                    const Complex den = poly_eval(dd, cen);
                    if (std::abs(den) == 0.0) break;
                    cen -= poly_eval(d, cen) / den;
                }
            }
            bool whole = g.size() == 1 || detail::multiple_root_at(c, cen, g.size());
            if (!whole) {
                // fall back to the tight merge radius
                std::vector<Complex> sub;
                for (std::size_t i : g) sub.push_back(z[i]);
                for (const auto& h : detail::components(sub, opt.merge_radius)) {
                    Complex m = 0.0;
                    for (std::size_t i : h) m += sub[i];
                    m /= static_cast<double>(h.size());
                    for (std::size_t i = 0; i < h.size(); ++i) merged.push_back(h.size() > 1 ? m : sub[h[i]]);
                }
                continue;
            }
            for (std::size_t i = 0; i < g.size(); ++i) merged.push_back(cen);
        }
        z = std::move(merged);
        for (Complex& zk : z)
            if (std::abs(zk.imag()) <= 1e-12 * std::max(1.0, std::abs(zk))) zk = zk.real();
    }
    z.insert(z.end(), zero_roots.begin(), zero_roots.end());
    std::sort(z.begin(), z.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return z;
}

// max |p(z_k)| / max |c_i|
inline double root_residual(const std::vector<double>& c, const std::vector<Complex>& z) {
    double r = 0.0;
    for (const Complex& zk : z) r = std::max(r, std::abs(poly_eval(c, zk)));
    return r / max_abs_coeff(c);
}

// ---------------------------------------------------------------------------
// Routh-Hurwitz for real coefficients (ascending degree).

enum class Stability { Stable, Nonstable, Marginal };

inline const char* to_string(Stability s) {
    switch (s) {
        case Stability::Stable: return "stable";
        case Stability::Nonstable: return "nonstable";
        case Stability::Marginal: return "marginal";
    }
    return "marginal";
}

inline Stability routh_stability(const std::vector<double>& coeffs, double rel_zero = 1e-12) {
    std::vector<double> a(coeffs.rbegin(), coeffs.rend());  // descending
    while (!a.empty() && a.front() == 0.0) a.erase(a.begin());
    if (a.size() < 2) fail_input("routh_stability: degree must be >= 1");
    const double scale = max_abs_coeff(a);
    if (a.front() < 0.0)
        for (double& x : a) x = -x;
    const std::size_t n = a.size() - 1;
    std::vector<double> r0, r1;
    for (std::size_t k = 0; k <= n; k += 2) r0.push_back(a[k]);
    for (std::size_t k = 1; k <= n; k += 2) r1.push_back(a[k]);
    std::vector<double> first = {r0[0]};
    bool marginal = false;
    for (std::size_t row = 1; row <= n; ++row) {
        if (r1.empty()) r1.push_back(0.0);
        const double lead = r1[0];
        if (std::abs(lead) <= rel_zero * scale) {
            marginal = true;
            break;
        }
        first.push_back(lead);
        std::vector<double> next;
        for (std::size_t k = 0; k + 1 < r0.size(); ++k) {
            const double b = k + 1 < r1.size() ? r1[k + 1] : 0.0;
            next.push_back((lead * r0[k + 1] - r0[0] * b) / lead);
        }
        r0 = std::move(r1);
        r1 = std::move(next);
    }
    int changes = 0;
    for (std::size_t k = 1; k < first.size(); ++k)
        if ((first[k] > 0) != (first[k - 1] > 0)) ++changes;
    if (changes > 0) return Stability::Nonstable;
    return marginal ? Stability::Marginal : Stability::Stable;
}

// ---------------------------------------------------------------------------
// Planar convex hull (monotone chain), counter-clockwise, collinear points
// dropped.

inline std::vector<Complex> convex_hull(std::vector<Complex> p) {
    auto less = [](Complex a, Complex b) { return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag(); };
    std::sort(p.begin(), p.end(), less);
    p.erase(std::unique(p.begin(), p.end()), p.end());
    if (p.size() < 3) return p;
    auto cross = [](Complex o, Complex a, Complex b) {
        return (a.real() - o.real()) * (b.imag() - o.imag()) - (a.imag() - o.imag()) * (b.real() - o.real());
    };
    std::vector<Complex> h(2 * p.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        while (k >= 2 && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross(h[k - 2], h[k - 1], p[i]) <= 0) --k;
        h[k++] = p[i];
    }
    h.resize(k - 1);
    return h;
}

inline double segment_distance(Complex q, Complex a, Complex b) {
    const Complex d = b - a;
    const double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(q - a);
    const double t = std::clamp(((q - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(q - (a + t * d));
}

// q in conv(points), allowing a distance slack (scaled by the point set).
inline bool in_convex_hull(Complex q, const std::vector<Complex>& points, double slack = 1e-9) {
    if (points.empty()) return false;
    double scale = 1.0;
    for (const Complex& p : points) scale = std::max(scale, std::abs(p));
    const double tol = slack * scale;
    const auto h = convex_hull(points);
    if (h.size() == 1) return std::abs(q - h[0]) <= tol;
    if (h.size() == 2) return segment_distance(q, h[0], h[1]) <= tol;
    bool inside = true;
    for (std::size_t i = 0; i < h.size(); ++i) {
        const Complex a = h[i], b = h[(i + 1) % h.size()];
        const double cr = (b.real() - a.real()) * (q.imag() - a.imag()) - (b.imag() - a.imag()) * (q.real() - a.real());
        if (cr < 0.0) inside = false;
    }
    if (inside) return true;
    for (std::size_t i = 0; i < h.size(); ++i)
        if (segment_distance(q, h[i], h[(i + 1) % h.size()]) <= tol) return true;
    return false;
}

}  // namespace dualq
