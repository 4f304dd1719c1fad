#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "hankel.hpp"
#include "numerics.hpp"
#include "sphere_grid.hpp"
#include "star_body.hpp"

namespace dualq {

// Prescribed values omega_i on a real index set containing 0.
struct QuermassTuple {
    int dim = 0;
    std::vector<double> indices;  // sorted, distinct, contains 0
    std::vector<double> values;   // positive

    std::size_t size() const { return indices.size(); }

    // Position of index i, or -1.
    int find(double i) const {
        for (std::size_t k = 0; k < indices.size(); ++k)
            if (std::abs(indices[k] - i) <= 1e-12 * std::max(1.0, std::abs(i))) return static_cast<int>(k);
        return -1;
    }
    bool has(double i) const { return find(i) >= 0; }
    double at(double i) const {
        const int k = find(i);
        if (k < 0) fail_input("tuple: index " + std::to_string(i) + " not present");
        return values[k];
    }
    double omega0() const { return at(0.0); }

    // Indices are exactly 0, 1, ..., m.
    bool consecutive() const {
        for (std::size_t k = 0; k < indices.size(); ++k)
            if (indices[k] != static_cast<double>(k)) return false;
        return true;
    }
};

// Validating constructor; sorts by index.
inline QuermassTuple make_tuple(int dim, std::vector<double> indices, std::vector<double> values) {
    if (indices.size() != values.size()) fail_input("tuple: index and value counts differ");
    if (indices.empty()) fail_input("tuple: empty");
    std::vector<std::pair<double, double>> p;
    for (std::size_t k = 0; k < indices.size(); ++k) {
        if (!std::isfinite(indices[k])) fail_input("tuple: non-finite index");
        if (!(values[k] > 0.0) || !std::isfinite(values[k])) fail_input("tuple: values must be positive");
        p.emplace_back(indices[k], values[k]);
    }
    std::sort(p.begin(), p.end());
    QuermassTuple t;
    t.dim = dim;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k > 0 && p[k].first == p[k - 1].first) fail_input("tuple: repeated index");
        t.indices.push_back(p[k].first);
        t.values.push_back(p[k].second);
    }
    if (!t.has(0.0)) fail_input("tuple: index set must contain 0");
    return t;
}

inline QuermassTuple consecutive_tuple(int dim, const std::vector<double>& values) {
    std::vector<double> idx(values.size());
    for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = static_cast<double>(k);
    return make_tuple(dim, idx, values);
}

namespace detail {

// Neumaier compensated sum.
class Accumulator {
public:
    void add(double x) {
        const double t = s_ + x;
        if (std::abs(s_) >= std::abs(x))
            c_ += (s_ - t) + x;
        else
            c_ += (x - t) + s_;
        s_ = t;
    }
    double value() const { return s_ + c_; }

private:
    double s_ = 0.0, c_ = 0.0;
};

}  // namespace detail

// Log radial samples of a pair on one grid; evaluates W_i for any real i.
class PairQuadrature {
public:
    PairQuadrature(const StarBody& k, const StarBody& l, const SphereGrid& grid)
        : n_(grid.dim()), weights_(grid.weights()) {
        require_same_dim(k.dim(), l.dim(), "dual_quermass");
        require_same_dim(k.dim(), grid.dim(), "dual_quermass");
        const auto rk = sample(k, grid), rl = sample(l, grid);
        range_ = ratio_range(rk, rl);
        log_k_.resize(rk.size());
        log_l_.resize(rk.size());
        for (std::size_t i = 0; i < rk.size(); ++i) {
            log_k_[i] = std::log(rk[i]);
            log_l_[i] = std::log(rl[i]);
        }
    }

    int dim() const { return n_; }
    const RatioRange& range() const { return range_; }

    // (1/n) sum rho_K^{n-i} rho_L^i w
    double operator()(double i) const {
        detail::Accumulator acc;
        const double p = n_ - i;
        for (std::size_t j = 0; j < weights_.size(); ++j) acc.add(weights_[j] * std::exp(p * log_k_[j] + i * log_l_[j]));
        return acc.value() / n_;
    }

    // Atoms (f(u), rho_K^n w / n), merged at equal ratio, ascending in t.
    std::vector<std::pair<double, double>> pushforward() const {
        std::vector<std::pair<double, double>> atoms(weights_.size());
        for (std::size_t j = 0; j < weights_.size(); ++j)
            atoms[j] = {std::exp(log_l_[j] - log_k_[j]), weights_[j] * std::exp(n_ * log_k_[j]) / n_};
        std::sort(atoms.begin(), atoms.end());
        std::vector<std::pair<double, double>> out;
        for (const auto& a : atoms) {
            if (!out.empty() && a.first - out.back().first <= 1e-14 * a.first)
                out.back().second += a.second;
            else
                out.push_back(a);
        }
        return out;
    }

private:
    int n_;
    std::vector<double> weights_;
    std::vector<double> log_k_, log_l_;
    RatioRange range_;
};

inline double dual_quermass(const StarBody& k, const StarBody& l, double i, const SphereGrid& grid) {
    return PairQuadrature(k, l, grid)(i);
}

inline QuermassTuple quermass_tuple(const StarBody& k, const StarBody& l, const std::vector<double>& indices,
                                    const SphereGrid& grid) {
    PairQuadrature q(k, l, grid);
    std::vector<double> v;
    for (double i : indices) v.push_back(q(i));
    return make_tuple(grid.dim(), indices, v);
}

// Push-forward of (1/n) rho_K^n dsigma under u -> rho_L(u)/rho_K(u).
struct PushforwardMeasure {
    double a = 0.0, b = 0.0;
    std::vector<std::pair<double, double>> atoms;  // (t, mass), ascending t

    double mass() const {
        detail::Accumulator acc;
        for (const auto& x : atoms) acc.add(x.second);
        return acc.value();
    }
    double moment(double i) const {
        detail::Accumulator acc;
        for (const auto& x : atoms) acc.add(x.second * pos_pow(x.first, i));
        return acc.value();
    }
};

struct PushforwardResult {
    PushforwardMeasure measure;
    std::vector<double> moments;
};

inline PushforwardResult pushforward_moments(const StarBody& k, const StarBody& l, const SphereGrid& grid,
                                             const std::vector<double>& indices) {
    PairQuadrature q(k, l, grid);
    PushforwardResult r;
    r.measure.a = q.range().a;
    r.measure.b = q.range().b;
    r.measure.atoms = q.pushforward();
    for (double i : indices) r.moments.push_back(r.measure.moment(i));
    return r;
}

struct DualAFReport {
    bool holds = false;
    double slack = 0.0;
    bool equality = false;
};

// Log-convexity of i -> omega_i at i < j < k:
// slack = (k-j) log w_i + (j-i) log w_k - (k-i) log w_j.
inline DualAFReport dual_af_verify(const QuermassTuple& t, double i, double j, double k) {
    if (!(i < j && j < k)) fail_input("dual_af_verify: need i < j < k");
    const double wi = t.at(i), wj = t.at(j), wk = t.at(k);
    DualAFReport r;
    r.slack = (k - j) * std::log(wi) + (j - i) * std::log(wk) - (k - i) * std::log(wj);
    r.holds = r.slack >= -1e-10;
    r.equality = std::abs(r.slack) <= 1e-8;
    return r;
}

struct HankelReport {
    int m = 0;
    double a_min_eig = 0.0, b_min_eig = 0.0;
    double a_tol = 0.0, b_tol = 0.0;
    double a_det = 0.0, b_det = 0.0;  // det of A_m and B_m
    bool dilate = false;
    // PD for non-dilate pairs, PSD for dilates.
    bool pass = false;
};

// A_m = (W_{i+j})_{0..m}, B_m = (W_{i+j+1})_{0..m-1}.
inline HankelReport hankel_report(const std::vector<double>& w, int m, bool dilate, double pd_rel = 1e-10) {
    if (m < 1) fail_input("hankel_pd_verify: m must be >= 1");
    if (w.size() < static_cast<std::size_t>(2 * m + 1)) fail_input("hankel_pd_verify: need W_0..W_2m");
    HankelReport r;
    r.m = m;
    r.dilate = dilate;
    const Matrix a = hankel(w, m + 1, 0), b = hankel(w, m, 1);
    r.a_min_eig = min_eigenvalue(a);
    r.b_min_eig = min_eigenvalue(b);
    r.a_tol = pd_threshold(a, pd_rel);
    r.b_tol = pd_threshold(b, pd_rel);
    r.a_det = determinant(a);
    r.b_det = determinant(b);
    if (dilate)
        r.pass = r.a_min_eig >= -r.a_tol && r.b_min_eig >= -r.b_tol;
    else
        r.pass = r.a_min_eig > r.a_tol && r.b_min_eig > r.b_tol;
    return r;
}

inline HankelReport hankel_pd_verify(const StarBody& k, const StarBody& l, const SphereGrid& grid, int m) {
    PairQuadrature q(k, l, grid);
    std::vector<double> w;
    for (int i = 0; i <= 2 * m; ++i) w.push_back(q(i));
    return hankel_report(w, m, q.range().dilate);
}

class ContainmentError : public Error {
public:
    explicit ContainmentError(const std::string& what) : Error(ErrorKind::Input, what) {}
};

// With L inside K, W_i >= W_j for i < j.
inline bool monotonicity_verify(const StarBody& k, const StarBody& l, const SphereGrid& grid, double i, double j) {
    if (!(i < j)) fail_input("monotonicity_verify: need i < j");
    const auto rk = sample(k, grid), rl = sample(l, grid);
    for (std::size_t u = 0; u < rk.size(); ++u)
        if (rl[u] > rk[u] * (1.0 + 1e-14)) throw ContainmentError("monotonicity_verify: L is not contained in K");
    PairQuadrature q(k, l, grid);
    const double wi = q(i), wj = q(j);
    return wi >= wj - 1e-10 * std::max({1.0, wi, wj});
}

}  // namespace dualq
