#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace dualq {

struct Interval {
    double a = 0.0, b = 0.0;
};

inline Interval make_interval(double a, double b) {
    if (!(a > 0.0) || !(b > a) || !std::isfinite(b)) fail_input("interval: need 0 < a < b");
    return {a, b};
}

// Clamped cubic B-spline in s = log t with uniform breakpoints over
// [log a, log b]; the density with respect to dt is sum_k c_k B_k(log t).
struct LogSpline {
    int pieces = 0;                 // number of knot intervals
    double s0 = 0.0, s1 = 0.0;      // log a, log b
    std::vector<double> coeffs;     // pieces + 3 entries, non-negative

    std::size_t basis_count() const { return static_cast<std::size_t>(pieces) + 3; }
    double h() const { return (s1 - s0) / pieces; }

    // Knot vector with multiplicity 4 at both ends.
    double knot(int idx) const {
        const int k = std::clamp(idx - 3, 0, pieces);
        return k == pieces ? s1 : s0 + k * h();
    }

    // All cubic basis values at s (de Boor / Cox recursion on one span).
    // Returns the first basis index; vals holds 4 values.
    int basis_at(double s, double vals[4]) const {
        int span = static_cast<int>(std::floor((s - s0) / h()));
        span = std::clamp(span, 0, pieces - 1);
        const int mu = span + 3;  // knot index of the left end of the span
        double left[4], right[4];
        vals[0] = 1.0;
        for (int j = 1; j <= 3; ++j) {
            left[j] = s - knot(mu + 1 - j);
            right[j] = knot(mu + j) - s;
            double saved = 0.0;
            for (int r = 0; r < j; ++r) {
                const double den = right[r + 1] + left[j - r];
                const double tmp = den != 0.0 ? vals[r] / den : 0.0;
                vals[r] = saved + right[r + 1] * tmp;
                saved = left[j - r] * tmp;
            }
            vals[j] = saved;
        }
        return mu - 3;
    }

    // Density with respect to dt at t.
    double density(double t) const {
        const double s = std::log(t);
        if (s < s0 - 1e-14 || s > s1 + 1e-14) return 0.0;
        double v[4];
        const int first = basis_at(std::clamp(s, s0, s1), v);
        double r = 0.0;
        for (int j = 0; j < 4; ++j) r += coeffs[first + j] * v[j];
        return r;
    }
};

namespace detail {

// Gauss-Legendre panels over [lo, hi] in s for int e^{(p+1)s} g(s) ds, with
// panel width such that |p+1| h <= 2.
inline std::vector<std::pair<double, double>> log_panels(double lo, double hi, double p) {
    const double q = std::abs(p + 1.0);
    const int panels = std::max(1, static_cast<int>(std::ceil(q * (hi - lo) / 2.0)));
    static const QuadratureRule gl = gauss_legendre(10);
    std::vector<std::pair<double, double>> out;
    const double w = (hi - lo) / panels;
    for (int k = 0; k < panels; ++k) {
        const double a = lo + k * w;
        for (std::size_t j = 0; j < gl.nodes.size(); ++j)
            out.emplace_back(a + 0.5 * w * (1.0 + gl.nodes[j]), 0.5 * w * gl.weights[j]);
    }
    return out;
}

}  // namespace detail

// Integral of t^p B_k(log t) dt over [a,b] for every basis function k.
inline std::vector<double> spline_basis_moments(const LogSpline& sp, double p) {
    std::vector<double> out(sp.basis_count(), 0.0);
    for (int span = 0; span < sp.pieces; ++span) {
        const double lo = sp.s0 + span * sp.h();
        const double hi = span == sp.pieces - 1 ? sp.s1 : lo + sp.h();
        for (const auto& [s, w] : detail::log_panels(lo, hi, p)) {
            double v[4];
            const int first = sp.basis_at(s, v);
            const double e = std::exp((p + 1.0) * s) * w;  // t^p dt = e^{(p+1)s} ds
            for (int j = 0; j < 4; ++j) out[first + j] += e * v[j];
        }
    }
    return out;
}

// Positive measure on [a,b]: atoms, a uniform floor density, and an optional
// smooth log-spline density.
struct IntervalMeasure {
    Interval interval;
    std::vector<std::pair<double, double>> atoms;  // (t, mass), ascending t
    double floor = 0.0;                           // density per unit length
    std::optional<LogSpline> spline;

    double moment(double p) const {
        double s = 0.0;
        for (const auto& [t, w] : atoms) s += w * pos_pow(t, p);
        if (floor > 0.0) s += floor * power_integral(interval.a, interval.b, p);
        if (spline) {
            const auto bm = spline_basis_moments(*spline, p);
            for (std::size_t k = 0; k < bm.size(); ++k) s += spline->coeffs[k] * bm[k];
        }
        return s;
    }
    double mass() const { return moment(0.0); }
};

// Tail-mass fraction F(t) = mu([t,b]) / mu([a,b]) and its generalized inverse
// G(s) = sup{t : F(t) >= s}.
class TailProfile {
public:
    explicit TailProfile(const IntervalMeasure& mu) : mu_(mu) {
        a_ = mu.interval.a;
        b_ = mu.interval.b;
        std::sort(mu_.atoms.begin(), mu_.atoms.end());
        // suffix sums of atoms
        suffix_.assign(mu_.atoms.size() + 1, 0.0);
        for (std::size_t k = mu_.atoms.size(); k-- > 0;) suffix_[k] = suffix_[k + 1] + mu_.atoms[k].second;
        if (mu_.spline) {
            const auto& sp = *mu_.spline;
            // tail integral of the spline density from each knot to b
            span_tail_.assign(sp.pieces + 1, 0.0);
            for (int span = sp.pieces - 1; span >= 0; --span) {
                const double lo = sp.s0 + span * sp.h();
                const double hi = span == sp.pieces - 1 ? sp.s1 : lo + sp.h();
                span_tail_[span] = span_tail_[span + 1] + spline_integral(lo, hi);
            }
        }
        total_ = tail_mass(a_);
        if (!(total_ > 0.0)) fail_input("tail profile: measure has zero mass");
    }

    double a() const { return a_; }
    double b() const { return b_; }
    double total() const { return total_; }

    // mu([t, b])
    double tail_mass(double t) const {
        if (t <= a_) t = a_;
        if (t > b_) return 0.0;
        auto it = std::lower_bound(mu_.atoms.begin(), mu_.atoms.end(), std::make_pair(t, -std::numeric_limits<double>::infinity()));
        double m = suffix_[static_cast<std::size_t>(it - mu_.atoms.begin())];
        m += mu_.floor * (b_ - t);
        if (mu_.spline) {
            const auto& sp = *mu_.spline;
            const double s = std::log(t);
            int span = std::clamp(static_cast<int>(std::floor((s - sp.s0) / sp.h())), 0, sp.pieces - 1);
            const double hi = span == sp.pieces - 1 ? sp.s1 : sp.s0 + (span + 1) * sp.h();
            m += span_tail_[span + 1] + spline_integral(std::max(s, sp.s0), hi);
        }
        return m;
    }

    double F(double t) const { return tail_mass(t) / total_; }

    double G(double s) const {
        if (s <= 0.0) return b_;
        if (F(b_) >= s) return b_;
        double lo = a_, hi = b_;  // F(lo) >= s > F(hi)
        for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (F(mid) >= s)
                lo = mid;
            else
                hi = mid;
        }
        return lo;
    }

private:
    // int_{lo}^{hi} density(e^s) e^s ds over a sub-span
    double spline_integral(double lo, double hi) const {
        if (hi <= lo) return 0.0;
        static const QuadratureRule gl = gauss_legendre(8);
        const auto& sp = *mu_.spline;
        double r = 0.0;
        const double w = hi - lo;
        const int panels = std::max(1, static_cast<int>(std::ceil(w / 1.0)));
        for (int k = 0; k < panels; ++k) {
            const double pl = lo + k * w / panels, ph = lo + (k + 1) * w / panels;
            for (std::size_t j = 0; j < gl.nodes.size(); ++j) {
                const double s = 0.5 * (pl + ph) + 0.5 * (ph - pl) * gl.nodes[j];
                double v[4];
                const int first = sp.basis_at(s, v);
                double d = 0.0;
                for (int q = 0; q < 4; ++q) d += sp.coeffs[first + q] * v[q];
                r += 0.5 * (ph - pl) * gl.weights[j] * d * std::exp(s);
            }
        }
        return r;
    }

    IntervalMeasure mu_;
    double a_ = 0.0, b_ = 0.0, total_ = 0.0;
    std::vector<double> suffix_;
    std::vector<double> span_tail_;
};

}  // namespace dualq
