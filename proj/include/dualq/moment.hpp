#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hankel.hpp"
#include "lp.hpp"
#include "measure.hpp"
#include "numerics.hpp"
#include "quermass.hpp"

namespace dualq {

enum class ConeStatus { Interior, GeometricRay, Outside, Unknown };

inline const char* to_string(ConeStatus s) {
    switch (s) {
        case ConeStatus::Interior: return "INTERIOR";
        case ConeStatus::GeometricRay: return "GEOMETRIC_RAY";
        case ConeStatus::Outside: return "OUTSIDE";
        case ConeStatus::Unknown: return "UNKNOWN";
    }
    return "UNKNOWN";
}

struct ConeVerdict {
    ConeStatus status = ConeStatus::Unknown;
    std::optional<Interval> interval;
    std::optional<IntervalMeasure> density;
    std::optional<double> lambda;
    std::string certificate;  // which necessary condition failed, for OUTSIDE
    double margin = 0.0;      // floor mass fraction of the LP witness
};

// Thrown when a decision procedure declines; carries the verdict.
class RefusalError : public Error {
public:
    RefusalError(const std::string& what, ConeVerdict v) : Error(ErrorKind::Refusal, what), verdict_(std::move(v)) {}
    const ConeVerdict& verdict() const { return verdict_; }

private:
    ConeVerdict verdict_;
};

struct MomentSettings {
    int nodes = 2001;            // LP discretization of [a,b]
    double margin_tol = 1e-9;    // minimal floor mass fraction for INTERIOR
    double residual_tol = 1e-9;  // relative moment reproduction
    double ray_tol = 1e-9;       // relative deviation from lambda^i
    int kmax = 20;               // interval scan depth
};

// ---------------------------------------------------------------------------
// Parity-split Hankel matrices for moments omega_0..omega_m on [a,b].
//   m = 2r:    A = (w_{j+k})_{0..r},              B = ((a+b)w_{j+k+1} - ab w_{j+k} - w_{j+k+2})_{0..r-1}
//   m = 2r+1:  A = (w_{j+k+1} - a w_{j+k})_{0..r}, B = (b w_{j+k} - w_{j+k+1})_{0..r}
inline std::pair<Matrix, Matrix> hankel_split(const std::vector<double>& w, Interval iv) {
    make_interval(iv.a, iv.b);
    const int m = static_cast<int>(w.size()) - 1;
    if (m < 1) fail_input("hankel_split: need at least omega_0, omega_1");
    const double a = iv.a, b = iv.b;
    const int r = m / 2;
    if (m % 2 == 0) {
        Matrix am(r + 1, r + 1), bm(r, r);
        for (int j = 0; j <= r; ++j)
            for (int k = 0; k <= r; ++k) am(j, k) = w[j + k];
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                bm(j, k) = (a + b) * w[j + k + 1] - a * b * w[j + k] - w[j + k + 2];
        return {am, bm};
    }
    Matrix am(r + 1, r + 1), bm(r + 1, r + 1);
    for (int j = 0; j <= r; ++j)
        for (int k = 0; k <= r; ++k) {
            am(j, k) = w[j + k + 1] - a * w[j + k];
            bm(j, k) = b * w[j + k] - w[j + k + 1];
        }
    return {am, bm};
}

enum class Feasibility { StrictlyFeasible, Boundary, Infeasible };

inline const char* to_string(Feasibility f) {
    switch (f) {
        case Feasibility::StrictlyFeasible: return "strictly_feasible";
        case Feasibility::Boundary: return "boundary";
        case Feasibility::Infeasible: return "infeasible";
    }
    return "infeasible";
}

// Truncated Hausdorff moment problem on [a,b].
inline Feasibility hausdorff_feasible(const std::vector<double>& w, Interval iv) {
    const auto [am, bm] = hankel_split(w, iv);
    bool strict = true;
    for (const Matrix* mat : {&am, &bm}) {
        if (mat->rows() == 0) continue;
        const double e = min_eigenvalue(*mat), tol = pd_threshold(*mat);
        if (e < -tol) return Feasibility::Infeasible;
        if (e <= tol) strict = false;
    }
    return strict ? Feasibility::StrictlyFeasible : Feasibility::Boundary;
}

// ---------------------------------------------------------------------------
// omega_i = lambda^i omega_0 for every i, lambda fitted in log space.
inline std::optional<double> geometric_ray(const QuermassTuple& t, double tol = 1e-9) {
    const double w0 = t.omega0();
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double i = t.indices[k];
        if (i == 0.0) continue;
        num += i * std::log(t.values[k] / w0);
        den += i * i;
    }
    if (den == 0.0) return std::nullopt;
    const double lam = std::exp(num / den);
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double pred = w0 * pos_pow(lam, t.indices[k]);
        if (rel_diff(pred, t.values[k]) > tol) return std::nullopt;
    }
    return lam;
}

namespace detail {

// LP over atoms at the given nodes plus a uniform floor on [a,b]:
// maximize the floor density subject to exact moments. Returns the measure
// and the floor mass fraction, or nullopt when the LP fails.
inline std::optional<std::pair<IntervalMeasure, double>> floored_atoms_lp(const QuermassTuple& t, Interval iv,
                                                                         const std::vector<double>& nodes,
                                                                         double residual_tol) {
    const int m = static_cast<int>(t.size());
    const int n = static_cast<int>(nodes.size());
    Eigen::MatrixXd a(m, n + 1);
    Eigen::VectorXd b(m), c = Eigen::VectorXd::Zero(n + 1);
    for (int r = 0; r < m; ++r) {
        const double p = t.indices[r];
        for (int j = 0; j < n; ++j) a(r, j) = pos_pow(nodes[j], p);
        a(r, n) = power_integral(iv.a, iv.b, p);
        b(r) = t.values[r];
    }
    c(n) = -1.0;
    LpResult res = lp_minimize(a, b, c);
    if (res.status != LpStatus::Optimal) return std::nullopt;
    IntervalMeasure mu;
    mu.interval = iv;
    mu.floor = std::max(0.0, res.x(n));
    for (int j = 0; j < n; ++j)
        if (res.x(j) > 0.0) mu.atoms.emplace_back(nodes[j], res.x(j));
    for (int r = 0; r < m; ++r)
        if (rel_diff(mu.moment(t.indices[r]), t.values[r]) > residual_tol) return std::nullopt;
    const double frac = mu.floor * (iv.b - iv.a) / t.omega0();
    return std::make_pair(std::move(mu), frac);
}

inline std::vector<double> log_chebyshev_nodes(Interval iv, int n) {
    auto s = chebyshev_lobatto(n, std::log(iv.a), std::log(iv.b));
    std::vector<double> t(s.size());
    for (std::size_t k = 0; k < s.size(); ++k) t[k] = std::exp(s[k]);
    t.front() = iv.a;
    t.back() = iv.b;
    return t;
}

}  // namespace detail

// Floored discrete density certifying interior membership, without the ray
// test. With two indices a ray point (w0, lambda w0), a < lambda < b, is
// itself interior.
inline ConeVerdict interior_witness(const QuermassTuple& t, Interval iv, const MomentSettings& s = {}) {
    make_interval(iv.a, iv.b);
    ConeVerdict v;
    auto r = detail::floored_atoms_lp(t, iv, detail::log_chebyshev_nodes(iv, s.nodes), s.residual_tol);
    if (r && r->second > s.margin_tol) {
        v.status = ConeStatus::Interior;
        v.interval = iv;
        v.margin = r->second;
        v.density = std::move(r->first);
        return v;
    }
    v.status = ConeStatus::Unknown;
    if (r) v.margin = r->second;
    return v;
}

// Interior membership of the tuple in C^I_{a,b} by a floored discrete density.
inline ConeVerdict cone_interior_check(const QuermassTuple& t, Interval iv, const MomentSettings& s = {}) {
    if (t.size() < 2) fail_input("cone_interior_check: need at least two indices");
    make_interval(iv.a, iv.b);
    if (auto lam = geometric_ray(t, s.ray_tol)) {
        ConeVerdict v;
        v.status = ConeStatus::GeometricRay;
        v.lambda = *lam;
        return v;
    }
    return interior_witness(t, iv, s);
}

// Necessary conditions for realizability that do not depend on an interval.
// Returns the name of the violated condition, or an empty string.
inline std::string outside_certificate(const QuermassTuple& t) {
    const std::size_t m = t.size();
    auto fmt = [](double x) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%g", x);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            for (std::size_t k = j + 1; k < m; ++k) {
                if (dual_af_verify(t, t.indices[i], t.indices[j], t.indices[k]).slack < -1e-10)
                    return "log-convexity violated at indices (" + fmt(t.indices[i]) + ", " + fmt(t.indices[j]) +
                           ", " + fmt(t.indices[k]) + ")";
            }
    if (t.consecutive() && m >= 3) {
        const int deg = static_cast<int>(m) - 1;
        const Matrix am = hankel(t.values, deg / 2 + 1, 0);
        const Matrix bm = hankel(t.values, (deg - 1) / 2 + 1, 1);
        if (!is_psd(am)) return "moment Hankel matrix not positive semidefinite";
        if (!is_psd(bm)) return "shifted moment Hankel matrix not positive semidefinite";
    }
    return {};
}

// Geometric-ray test, certificates, then nested intervals [2^-k, 2^k].
inline ConeVerdict interval_search(const QuermassTuple& t, const MomentSettings& s = {}) {
    if (t.size() < 2) fail_input("interval_search: need at least two indices");
    ConeVerdict v;
    if (auto lam = geometric_ray(t, s.ray_tol)) {
        v.status = ConeStatus::GeometricRay;
        v.lambda = *lam;
        return v;
    }
    const std::string cert = outside_certificate(t);
    if (!cert.empty()) {
        v.status = ConeStatus::Outside;
        v.certificate = cert;
        return v;
    }
    double best = 0.0;
    for (int k = 1; k <= s.kmax; ++k) {
        const double e = std::ldexp(1.0, k);
        ConeVerdict c = cone_interior_check(t, {1.0 / e, e}, s);
        if (c.status == ConeStatus::Interior) return c;
        best = std::max(best, c.margin);
    }
    v.status = ConeStatus::Unknown;
    v.margin = best;
    return v;
}

// ---------------------------------------------------------------------------
// Randomized consistency check: sum c_i omega_i > 0 for polynomials
// sum c_i t^i that are positive on [a,b], drawn from the Markov-Lukacs forms
//   m = 2r:    q1^2 + (t-a)(b-t) q2^2,   deg q1 <= r, deg q2 <= r-1
//   m = 2r+1:  (t-a) q1^2 + (b-t) q2^2,  deg q1, q2 <= r
// plus a few fixed probes.
struct PositivityReport {
    bool pass = true;
    bool boundary_contact = false;
    double min_value = INFINITY;        // min over trials of sum c_i w_i / sum |c_i| w_i
    std::vector<double> witness;        // coefficients attaining min_value
};

namespace detail {

using Poly = std::vector<double>;  // ascending coefficients

inline Poly poly_mul(const Poly& p, const Poly& q) {
    Poly r(p.size() + q.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) r[i + j] += p[i] * q[j];
    return r;
}

inline Poly poly_add(Poly p, const Poly& q) {
    if (q.size() > p.size()) p.resize(q.size(), 0.0);
    for (std::size_t i = 0; i < q.size(); ++i) p[i] += q[i];
    return p;
}

}  // namespace detail

inline PositivityReport positivity_cross_check(const std::vector<double>& w, Interval iv, int trials,
                                               std::uint64_t seed) {
    make_interval(iv.a, iv.b);
    using detail::Poly;
    const int m = static_cast<int>(w.size()) - 1;
    if (m < 1) fail_input("positivity_cross_check: need omega_0, omega_1");
    const double a = iv.a, b = iv.b;
    PositivityReport rep;
    auto score = [&](Poly p) {
        p.resize(m + 1, 0.0);
        double s = 0.0, scale = 0.0;
        for (int i = 0; i <= m; ++i) {
            s += p[i] * w[i];
            scale += std::abs(p[i]) * w[i];
        }
        const double v = scale > 0 ? s / scale : 0.0;
        if (v < rep.min_value) {
            rep.min_value = v;
            rep.witness = p;
        }
    };

    const double mean = w[1] / w[0];
    if (m >= 2) {
        score({mean * mean, -2 * mean, 1.0});
        score({-a * b, a + b, -1.0});
    }
    score({-a, 1.0});
    score({b, -1.0});

    std::mt19937_64 rng = make_rng(seed, 1);
    std::normal_distribution<double> nd(0.0, 1.0);
    const int r = m / 2;
    auto rand_poly = [&](int deg) {
        Poly q(deg + 1);
        for (double& c : q) c = nd(rng);
        return q;
    };
    for (int k = 0; k < trials; ++k) {
        Poly p;
        if (m % 2 == 0) {
            Poly q1 = rand_poly(r);
            p = detail::poly_mul(q1, q1);
            if (r >= 1) {
                Poly q2 = rand_poly(r - 1);
                p = detail::poly_add(p, detail::poly_mul({-a * b, a + b, -1.0}, detail::poly_mul(q2, q2)));
            }
        } else {
            Poly q1 = rand_poly(r), q2 = rand_poly(r);
            p = detail::poly_add(detail::poly_mul({-a, 1.0}, detail::poly_mul(q1, q1)),
                                 detail::poly_mul({b, -1.0}, detail::poly_mul(q2, q2)));
        }
        p[0] += 1e-6;
        score(p);
    }
    const double tol = 1e-12;
    rep.boundary_contact = std::abs(rep.min_value) <= tol;
    rep.pass = rep.min_value > tol;
    return rep;
}

}  // namespace dualq
