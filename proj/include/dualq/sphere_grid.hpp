#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <mutex>
#include <map>
#include <span>
#include <vector>

#include "errors.hpp"
#include "numerics.hpp"

namespace dualq {

// Quadrature on S^{n-1}.
//
//   n = 1   the two points +1, -1 with unit weights (counting measure on S^0)
//   n = 2   equi-angular trapezoid rule with 2*res nodes
//   n >= 3  recursive product rule: u = (t, sqrt(1-t^2) v), v in S^{n-2}, with
//           dsigma = (1-t^2)^{(n-3)/2} dt dsigma_{n-2}. The t-rule is Gauss-Jacobi
//           on each half [-1,0], [0,1] separately (res nodes per half), so
//           functions of |u_1| with a kink at the equator are integrated at
//           full order.
//
// Node count is 2*res for n = 2 and (2*res)^{n-1} for n >= 3.
class SphereGrid {
public:
    SphereGrid() = default;

    int dim() const { return dim_; }
    int resolution() const { return res_; }
    std::size_t size() const { return weights_.size(); }

    std::span<const double> node(std::size_t i) const {
        return {coords_.data() + i * static_cast<std::size_t>(dim_),
                static_cast<std::size_t>(dim_)};
    }
    double weight(std::size_t i) const { return weights_[i]; }
    const std::vector<double>& weights() const { return weights_; }

    double total_weight() const {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }

    // Index of the node closest to u in the grid's spherical coordinates.
    std::size_t nearest_index(std::span<const double> u) const {
        if (static_cast<int>(u.size()) != dim_) fail_dimension("nearest_index: dimension mismatch");
        if (dim_ == 1) return u[0] >= 0.0 ? 0 : 1;
        std::vector<double> w(u.begin(), u.end());
        std::size_t index = 0;
        for (std::size_t level = 0; level < polar_.size(); ++level) {
            const auto& ts = polar_[level];
            const double t = std::clamp(w[0], -1.0, 1.0);
            auto it = std::lower_bound(ts.begin(), ts.end(), t);
            std::size_t k = static_cast<std::size_t>(it - ts.begin());
            if (k == ts.size()) k = ts.size() - 1;
            if (k > 0 && std::abs(ts[k - 1] - t) < std::abs(ts[k] - t)) --k;
            index = index * ts.size() + k;
            std::vector<double> rest(w.begin() + 1, w.end());
            double nr = 0.0;
            for (double x : rest) nr += x * x;
            nr = std::sqrt(nr);
            if (nr > 0.0) {
                for (double& x : rest) x /= nr;
            } else {
                std::fill(rest.begin(), rest.end(), 0.0);
                rest[0] = 1.0;
            }
            w = std::move(rest);
        }
        const std::size_t nc = static_cast<std::size_t>(circle_);
        double th = std::atan2(w[1], w[0]);
        if (th < 0) th += 2.0 * kPi;
        std::size_t k = static_cast<std::size_t>(std::llround(th * nc / (2.0 * kPi))) % nc;
        return index * nc + k;
    }

    friend SphereGrid build_grid(int n, int resolution);

private:
    int dim_ = 0;
    int res_ = 0;
    int circle_ = 0;
    std::vector<std::vector<double>> polar_;  // t-nodes per recursion level, ascending
    std::vector<double> coords_;
    std::vector<double> weights_;
};

namespace detail {

// Rule for int_{-1}^{1} f(t) (1-t^2)^alpha dt split at t = 0.
inline QuadratureRule split_polar_rule(int res, double alpha) {
    const QuadratureRule gj = gauss_jacobi(res, alpha, 0.0);
    QuadratureRule out;
    out.nodes.reserve(2 * res);
    out.weights.reserve(2 * res);
    // t = (1+x)/2 on [0,1]; (1-t)^alpha dt = 2^{-alpha-1} (1-x)^alpha dx
    const double scale = std::pow(2.0, -alpha - 1.0);
    std::vector<double> t(res), w(res);
    for (int k = 0; k < res; ++k) {
        t[k] = 0.5 * (1.0 + gj.nodes[k]);
        w[k] = gj.weights[k] * scale * std::pow(1.0 + t[k], alpha);
    }
    for (int k = res - 1; k >= 0; --k) {
        out.nodes.push_back(-t[k]);
        out.weights.push_back(w[k]);
    }
    for (int k = 0; k < res; ++k) {
        out.nodes.push_back(t[k]);
        out.weights.push_back(w[k]);
    }
    return out;
}

}  // namespace detail

inline SphereGrid build_grid(int n, int resolution) {
    if (n < 1) fail_input("build_grid: dimension must be >= 1");
    if (resolution < 1) fail_input("build_grid: resolution must be >= 1");
    SphereGrid g;
    g.dim_ = n;
    g.res_ = resolution;
    if (n == 1) {
        g.coords_ = {1.0, -1.0};
        g.weights_ = {1.0, 1.0};
        return g;
    }
    const int nc = 2 * resolution;
    g.circle_ = nc;
    // Start from the circle and lift one dimension at a time.
    std::vector<double> coords(2 * static_cast<std::size_t>(nc));
    std::vector<double> weights(nc, 2.0 * kPi / nc);
    for (int k = 0; k < nc; ++k) {
        const double th = 2.0 * kPi * k / nc;
        coords[2 * k] = std::cos(th);
        coords[2 * k + 1] = std::sin(th);
    }
    // Exact values on the axes keep zonal symmetry of the node set.
    if (nc % 4 == 0) {
        for (int q = 0; q < 4; ++q) {
            const int k = q * nc / 4;
            const double c[4] = {1.0, 0.0, -1.0, 0.0};
            const double s[4] = {0.0, 1.0, 0.0, -1.0};
            coords[2 * k] = c[q];
            coords[2 * k + 1] = s[q];
        }
    }
    std::vector<std::vector<double>> levels;
    for (int d = 3; d <= n; ++d) {
        const QuadratureRule polar = detail::split_polar_rule(resolution, 0.5 * (d - 3));
        const std::size_t m = weights.size();
        const int sub = d - 1;
        std::vector<double> nc_coords;
        std::vector<double> nw;
        nc_coords.reserve(polar.nodes.size() * m * d);
        nw.reserve(polar.nodes.size() * m);
        for (std::size_t i = 0; i < polar.nodes.size(); ++i) {
            const double t = polar.nodes[i];
            const double s = std::sqrt(std::max(0.0, 1.0 - t * t));
            for (std::size_t j = 0; j < m; ++j) {
                nc_coords.push_back(t);
                for (int c = 0; c < sub; ++c) nc_coords.push_back(s * coords[j * sub + c]);
                nw.push_back(polar.weights[i] * weights[j]);
            }
        }
        coords = std::move(nc_coords);
        weights = std::move(nw);
        levels.push_back(polar.nodes);
    }
    // Outermost coordinate was added last.
    std::reverse(levels.begin(), levels.end());
    g.polar_ = std::move(levels);
    g.coords_ = std::move(coords);
    g.weights_ = std::move(weights);
    return g;
}

// Default resolution per dimension: 4096 nodes on S^1, 256 x 256 on S^2 and
// at most 2e6 nodes above that.
inline int default_resolution(int n) {
    if (n <= 1) return 1;
    if (n == 2) return 2048;
    if (n == 3) return 128;
    int r = 1;
    while (std::pow(2.0 * (r + 1), n - 1) <= 2.0e6) ++r;
    return r;
}

// Lazily built grids per dimension with configurable resolutions. Shared
// read-only once built.
class GridSet {
public:
    GridSet() = default;
    explicit GridSet(std::map<int, int> resolutions) : res_(std::move(resolutions)) {}

    int resolution(int n) const {
        auto it = res_.find(n);
        return it != res_.end() ? it->second : default_resolution(n);
    }

    void set_resolution(int n, int r) {
        std::lock_guard lock(mu_);
        res_[n] = r;
        cache_.erase(n);
    }

    std::shared_ptr<const SphereGrid> get(int n) const {
        std::lock_guard lock(mu_);
        auto it = cache_.find(n);
        if (it != cache_.end()) return it->second;
        auto g = std::make_shared<const SphereGrid>(build_grid(n, resolution(n)));
        cache_.emplace(n, g);
        return g;
    }

    GridSet(const GridSet& o) : res_(o.res_) {}
    GridSet& operator=(const GridSet& o) {
        if (this != &o) {
            std::lock_guard lock(mu_);
            res_ = o.res_;
            cache_.clear();
        }
        return *this;
    }

private:
    std::map<int, int> res_;
    mutable std::mutex mu_;
    mutable std::map<int, std::shared_ptr<const SphereGrid>> cache_;
};

}  // namespace dualq
