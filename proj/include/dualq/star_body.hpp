#pragma once

#include <algorithm>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"
#include "sphere_grid.hpp"

namespace dualq {

// Radial profile of a body that depends on u only through |u_1|.
//
// The table is given over t = |u_1| in [0,1]; interpolation is a monotone
// cubic Hermite (Fritsch-Butland slopes) in the polar angle phi = arccos(t),
// which keeps the profile monotone and positive and stays smooth at the pole.
class ZonalProfile {
public:
    ZonalProfile(std::vector<double> t, std::vector<double> rho) : t_(std::move(t)), rho_(std::move(rho)) {
        if (t_.size() != rho_.size() || t_.size() < 2)
            fail_input("zonal profile: need at least two (t, rho) pairs");
        for (std::size_t k = 0; k < t_.size(); ++k) {
            if (!(rho_[k] > 0.0) || !std::isfinite(rho_[k]))
                fail_input("zonal profile: radial values must be positive");
            if (k > 0 && !(t_[k] > t_[k - 1]))
                fail_input("zonal profile: t must be strictly increasing");
        }
        if (t_.front() != 0.0 || t_.back() != 1.0)
            fail_input("zonal profile: table must cover |u1| in [0,1]");
        bool inc = true, dec = true;
        for (std::size_t k = 1; k < rho_.size(); ++k) {
            if (rho_[k] < rho_[k - 1]) inc = false;
            if (rho_[k] > rho_[k - 1]) dec = false;
        }
        if (!inc && !dec) fail_input("zonal profile: radial values must be monotone in |u1|");

        const std::size_t m = t_.size();
        phi_.resize(m);
        val_.resize(m);
        for (std::size_t k = 0; k < m; ++k) {
            phi_[k] = std::acos(t_[m - 1 - k]);
            val_[k] = rho_[m - 1 - k];
        }
        phi_.front() = 0.0;
        slope_ = pchip_slopes(phi_, val_);
    }

    const std::vector<double>& t() const { return t_; }
    const std::vector<double>& rho() const { return rho_; }

    double operator()(double abs_u1) const {
        const double phi = std::acos(std::clamp(abs_u1, 0.0, 1.0));
        auto it = std::upper_bound(phi_.begin(), phi_.end(), phi);
        std::size_t k = it == phi_.begin() ? 0 : static_cast<std::size_t>(it - phi_.begin()) - 1;
        if (k >= phi_.size() - 1) k = phi_.size() - 2;
        const double h = phi_[k + 1] - phi_[k];
        const double s = (phi - phi_[k]) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        return h00 * val_[k] + h10 * h * slope_[k] + h01 * val_[k + 1] + h11 * h * slope_[k + 1];
    }

    double min_value() const { return *std::min_element(rho_.begin(), rho_.end()); }

private:
    static std::vector<double> pchip_slopes(const std::vector<double>& x, const std::vector<double>& y) {
        const std::size_t m = x.size();
        std::vector<double> d(m, 0.0), h(m - 1), del(m - 1);
        for (std::size_t k = 0; k + 1 < m; ++k) {
            h[k] = x[k + 1] - x[k];
            del[k] = (y[k + 1] - y[k]) / h[k];
        }
        if (m == 2) {
            d[0] = d[1] = del[0];
            return d;
        }
        for (std::size_t k = 1; k + 1 < m; ++k) {
            if (del[k - 1] * del[k] <= 0.0) continue;
            const double w1 = 2 * h[k] + h[k - 1], w2 = h[k] + 2 * h[k - 1];
            d[k] = (w1 + w2) / (w1 / del[k - 1] + w2 / del[k]);
        }
        auto edge = [](double h0, double h1, double d0, double d1) {
            double s = ((2 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
            if (s * d0 <= 0.0) return 0.0;
            if (d0 * d1 <= 0.0 && std::abs(s) > 3 * std::abs(d0)) return 3 * d0;
            return s;
        };
        d[0] = edge(h[0], h[1], del[0], del[1]);
        d[m - 1] = edge(h[m - 2], h[m - 3], del[m - 2], del[m - 3]);
        return d;
    }

    std::vector<double> t_, rho_;
    std::vector<double> phi_, val_, slope_;
};

enum class TableInterp { Nearest, Zonal };

class StarBody;

namespace body {

struct Ball {
    double radius;
};
struct Dilate;
struct Zonal {
    std::shared_ptr<const ZonalProfile> profile;
};
// rho(theta) = c0 + sum_k cos_k cos(k theta) + sin_k sin(k theta), planar only
struct Trig {
    double c0;
    std::vector<double> cos_coef;
    std::vector<double> sin_coef;
};
struct GridTable {
    std::shared_ptr<const SphereGrid> grid;
    std::vector<double> values;
    TableInterp interp;
    std::shared_ptr<const ZonalProfile> zonal;  // set when interp == Zonal
};
struct RadialSum;

}  // namespace body

// A star body given by its radial function on S^{n-1}. Immutable; copies share
// the underlying representation.
class StarBody {
public:
    using Node = std::variant<body::Ball, std::shared_ptr<const body::Dilate>, body::Zonal, body::Trig,
                              body::GridTable, std::shared_ptr<const body::RadialSum>>;

    StarBody() = default;

    static StarBody ball(int n, double radius = 1.0);
    static StarBody dilate(const StarBody& base, double factor);
    static StarBody zonal(int n, std::vector<double> t, std::vector<double> rho);
    static StarBody zonal(int n, std::shared_ptr<const ZonalProfile> profile);
    static StarBody trig(double c0, std::vector<double> cos_coef, std::vector<double> sin_coef = {});
    static StarBody grid_table(std::shared_ptr<const SphereGrid> grid, std::vector<double> values,
                               TableInterp interp = TableInterp::Nearest);
    static StarBody radial_sum(const StarBody& left, const StarBody& right, double mu_left, double mu_right);

    int dim() const { return dim_; }
    bool valid() const { return node_ != nullptr; }
    const Node& node() const { return *node_; }

    // rho(u) for a unit vector u; no argument checks.
    double eval(std::span<const double> u) const;

private:
    StarBody(int n, Node node) : dim_(n), node_(std::make_shared<const Node>(std::move(node))) {}

    int dim_ = 0;
    std::shared_ptr<const Node> node_;
};

namespace body {
struct Dilate {
    StarBody base;
    double factor;
};
struct RadialSum {
    StarBody left, right;
    double mu_left, mu_right;
};
}  // namespace body

namespace detail {

inline double trig_eval(const body::Trig& b, double theta) {
    double r = b.c0;
    for (std::size_t k = 0; k < b.cos_coef.size(); ++k) r += b.cos_coef[k] * std::cos((k + 1.0) * theta);
    for (std::size_t k = 0; k < b.sin_coef.size(); ++k) r += b.sin_coef[k] * std::sin((k + 1.0) * theta);
    return r;
}

// Averages of grid samples over bands of equal |u_1|, as a zonal profile.
inline std::shared_ptr<const ZonalProfile> band_profile(const SphereGrid& g, const std::vector<double>& values) {
    std::vector<std::pair<double, double>> acc;  // (|u1|, value * weight), weight
    std::vector<std::pair<double, std::pair<double, double>>> bands;
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double t = std::abs(g.node(i)[0]);
        bands.push_back({t, {values[i] * g.weight(i), g.weight(i)}});
    }
    std::sort(bands.begin(), bands.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<double> ts, rs;
    for (std::size_t i = 0; i < bands.size();) {
        std::size_t j = i;
        double vw = 0.0, w = 0.0;
        while (j < bands.size() && bands[j].first - bands[i].first <= 1e-12) {
            vw += bands[j].second.first;
            w += bands[j].second.second;
            ++j;
        }
        ts.push_back(bands[i].first);
        rs.push_back(vw / w);
        i = j;
    }
    if (ts.front() > 0.0) {
        ts.insert(ts.begin(), 0.0);
        rs.insert(rs.begin(), rs.front());
    } else {
        ts.front() = 0.0;
    }
    if (ts.back() < 1.0) {
        ts.push_back(1.0);
        rs.push_back(rs.back());
    } else {
        ts.back() = 1.0;
    }
    // Band averages of arbitrary data need not be monotone; enforce by a
    // running maximum when mostly increasing, running minimum otherwise.
    const bool inc = rs.back() >= rs.front();
    for (std::size_t k = 1; k < rs.size(); ++k) rs[k] = inc ? std::max(rs[k], rs[k - 1]) : std::min(rs[k], rs[k - 1]);
    return std::make_shared<const ZonalProfile>(std::move(ts), std::move(rs));
}

}  // namespace detail

inline StarBody StarBody::ball(int n, double radius) {
    if (n < 1) fail_input("ball: dimension must be >= 1");
    if (!(radius > 0.0) || !std::isfinite(radius)) fail_input("ball: radius must be positive");
    return StarBody(n, body::Ball{radius});
}

inline StarBody StarBody::dilate(const StarBody& base, double factor) {
    if (!base.valid()) fail_input("dilate: empty base body");
    if (!(factor > 0.0) || !std::isfinite(factor)) fail_input("dilate: factor must be positive");
    return StarBody(base.dim(), std::make_shared<const body::Dilate>(body::Dilate{base, factor}));
}

inline StarBody StarBody::zonal(int n, std::vector<double> t, std::vector<double> rho) {
    return zonal(n, std::make_shared<const ZonalProfile>(std::move(t), std::move(rho)));
}

inline StarBody StarBody::zonal(int n, std::shared_ptr<const ZonalProfile> profile) {
    if (n < 1) fail_input("zonal: dimension must be >= 1");
    if (!profile) fail_input("zonal: missing profile");
    return StarBody(n, body::Zonal{std::move(profile)});
}

inline StarBody StarBody::trig(double c0, std::vector<double> cos_coef, std::vector<double> sin_coef) {
    body::Trig t{c0, std::move(cos_coef), std::move(sin_coef)};
    // Positivity on a fine circle sample.
    constexpr int kCheck = 8192;
    double mn = INFINITY;
    for (int k = 0; k < kCheck; ++k) mn = std::min(mn, detail::trig_eval(t, 2.0 * kPi * k / kCheck));
    if (!(mn > 0.0)) fail_input("trig: radial function is not positive");
    return StarBody(2, std::move(t));
}

inline StarBody StarBody::grid_table(std::shared_ptr<const SphereGrid> grid, std::vector<double> values,
                                     TableInterp interp) {
    if (!grid) fail_input("grid_table: missing grid");
    if (values.size() != grid->size()) fail_input("grid_table: value count does not match the grid");
    for (double v : values)
        if (!(v > 0.0) || !std::isfinite(v)) fail_input("grid_table: radial values must be positive");
    body::GridTable gt{grid, std::move(values), interp, nullptr};
    if (interp == TableInterp::Zonal) {
        if (grid->dim() < 2) fail_input("grid_table: zonal interpolation needs n >= 2");
        gt.zonal = detail::band_profile(*grid, gt.values);
    }
    const int n = grid->dim();
    return StarBody(n, std::move(gt));
}

inline StarBody StarBody::radial_sum(const StarBody& left, const StarBody& right, double mu_left,
                                     double mu_right) {
    if (!left.valid() || !right.valid()) fail_input("radial_sum: empty body");
    require_same_dim(left.dim(), right.dim(), "radial_sum");
    if (mu_left < 0.0 || mu_right < 0.0 || !std::isfinite(mu_left) || !std::isfinite(mu_right))
        fail_input("radial_sum: coefficients must be non-negative");
    if (mu_left == 0.0 && mu_right == 0.0) fail_input("radial_sum: both coefficients are zero");
    return StarBody(left.dim(),
                    std::make_shared<const body::RadialSum>(body::RadialSum{left, right, mu_left, mu_right}));
}

inline double StarBody::eval(std::span<const double> u) const {
    struct Visitor {
        std::span<const double> u;
        double operator()(const body::Ball& b) const { return b.radius; }
        double operator()(const std::shared_ptr<const body::Dilate>& d) const {
            return d->factor * d->base.eval(u);
        }
        double operator()(const body::Zonal& z) const { return (*z.profile)(std::abs(u[0])); }
        double operator()(const body::Trig& t) const { return detail::trig_eval(t, std::atan2(u[1], u[0])); }
        double operator()(const body::GridTable& g) const {
            if (g.interp == TableInterp::Zonal) return (*g.zonal)(std::abs(u[0]));
            return g.values[g.grid->nearest_index(u)];
        }
        double operator()(const std::shared_ptr<const body::RadialSum>& s) const {
            double r = 0.0;
            if (s->mu_left != 0.0) r += s->mu_left * s->left.eval(u);
            if (s->mu_right != 0.0) r += s->mu_right * s->right.eval(u);
            return r;
        }
    };
    return std::visit(Visitor{u}, *node_);
}

// rho_K(u); u must be a unit vector of matching dimension.
inline double radial_eval(const StarBody& k, std::span<const double> u) {
    if (!k.valid()) fail_input("radial_eval: empty body");
    if (static_cast<int>(u.size()) != k.dim()) fail_dimension("radial_eval: dimension mismatch");
    double nrm = 0.0;
    for (double x : u) nrm += x * x;
    if (std::abs(std::sqrt(nrm) - 1.0) > 1e-10) fail_input("radial_eval: argument is not a unit vector");
    const double r = k.eval(u);
    if (!(r > 0.0) || !std::isfinite(r)) fail_invariant("radial_eval: non-positive radial value");
    return r;
}

inline double radial_eval(const StarBody& k, std::initializer_list<double> u) {
    std::vector<double> v(u);
    return radial_eval(k, std::span<const double>(v));
}

inline StarBody radial_sum(const StarBody& k, const StarBody& l, double mu, double lambda) {
    return StarBody::radial_sum(k, l, mu, lambda);
}

// Radial function at every grid node.
inline std::vector<double> sample(const StarBody& k, const SphereGrid& grid) {
    if (!k.valid()) fail_input("sample: empty body");
    require_same_dim(k.dim(), grid.dim(), "sample");
    std::vector<double> out(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = k.eval(grid.node(i));
        if (!(r > 0.0) || !std::isfinite(r)) fail_invariant("sample: non-positive radial value");
        out[i] = r;
    }
    return out;
}

struct RatioRange {
    double a = 0.0;
    double b = 0.0;
    bool dilate = false;  // rho_L / rho_K constant to the detection tolerance
};

inline constexpr double kDilateTol = 1e-8;

inline RatioRange ratio_range(const std::vector<double>& rho_k, const std::vector<double>& rho_l) {
    RatioRange r{INFINITY, 0.0, false};
    for (std::size_t i = 0; i < rho_k.size(); ++i) {
        const double f = rho_l[i] / rho_k[i];
        r.a = std::min(r.a, f);
        r.b = std::max(r.b, f);
    }
    r.dilate = (r.b - r.a) <= kDilateTol * r.b;
    return r;
}

// Extremes of rho_L / rho_K over the grid nodes.
inline RatioRange ratio_range(const StarBody& k, const StarBody& l, const SphereGrid& grid) {
    require_same_dim(k.dim(), l.dim(), "ratio_range");
    return ratio_range(sample(k, grid), sample(l, grid));
}

}  // namespace dualq
