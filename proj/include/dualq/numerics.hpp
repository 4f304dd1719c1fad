#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "errors.hpp"

namespace dualq {

inline constexpr double kPi = std::numbers::pi;

// |B^n_2| = pi^{n/2} / Gamma(n/2 + 1)
inline double ball_volume(int n) {
    if (n < 1) fail_input("ball_volume: dimension must be >= 1");
    return std::exp(0.5 * n * std::log(kPi) - std::lgamma(0.5 * n + 1.0));
}

// sigma(S^{n-1}) = n |B^n_2|
inline double sphere_area(int n) { return n * ball_volume(n); }

inline double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return r;
}

inline double rel_diff(double a, double b) {
    const double s = std::max(std::abs(a), std::abs(b));
    return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// x^p for x > 0, evaluated in log space.
inline double pos_pow(double x, double p) {
    if (p == 0.0) return 1.0;
    if (p == 1.0) return x;
    return std::exp(p * std::log(x));
}

// Integral of t^p over [a,b], 0 < a <= b, stable near p = -1.
inline double power_integral(double a, double b, double p) {
    const double q = p + 1.0;
    const double lr = std::log(b / a);
    if (lr == 0.0) return 0.0;
    const double x = q * lr;
    if (std::abs(x) < 1e-8) return pos_pow(a, q) * lr * (1.0 + 0.5 * x);
    return pos_pow(a, q) * lr * (std::expm1(x) / x);
}

struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta.
// Golub-Welsch for the initial nodes, then Newton polishing on the
// orthonormal recurrence and Christoffel weights.
inline QuadratureRule gauss_jacobi(int npts, double alpha, double beta) {
    if (npts < 1) fail_input("gauss_jacobi: need at least one node");
    if (alpha <= -1.0 || beta <= -1.0) fail_input("gauss_jacobi: alpha, beta > -1");
    const double ab = alpha + beta;
    std::vector<double> diag(npts), off(npts, 0.0);
    for (int k = 0; k < npts; ++k) {
        const double s = 2.0 * k + ab;
        if (k == 0) {
            diag[k] = (beta - alpha) / (ab + 2.0);
        } else {
            diag[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
        }
        if (k >= 1) {
            const double num = 4.0 * k * (k + alpha) * (k + beta) * (k + ab);
            const double den = s * s * (s + 1.0) * (s - 1.0);
            off[k] = std::sqrt(num / den);
        }
    }
    const double mu0 = std::exp((ab + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                                std::lgamma(beta + 1.0) - std::lgamma(ab + 2.0));

    Eigen::VectorXd d(npts), e(std::max(npts - 1, 1));
    for (int k = 0; k < npts; ++k) d[k] = diag[k];
    for (int k = 1; k < npts; ++k) e[k - 1] = off[k];
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(d, e.head(std::max(npts - 1, 0)), Eigen::EigenvaluesOnly);

    // p_k orthonormal: off[k+1] p_{k+1} = (x - diag[k]) p_k - off[k] p_{k-1}
    auto eval = [&](double x, double& pn, double& dpn, double& sumsq) {
        double p_prev = 0.0, p = 1.0 / std::sqrt(mu0);
        double dp_prev = 0.0, dp = 0.0;
        sumsq = p * p;
        for (int k = 0; k < npts; ++k) {
            const double bnext = (k + 1 < npts) ? off[k + 1] : 1.0;
            const double pk1 = ((x - diag[k]) * p - off[k] * p_prev) / bnext;
            const double dk1 = (p + (x - diag[k]) * dp - off[k] * dp_prev) / bnext;
            p_prev = p;
            p = pk1;
            dp_prev = dp;
            dp = dk1;
            if (k + 1 < npts) sumsq += p * p;
        }
        pn = p;
        dpn = dp;
    };

    QuadratureRule rule;
    rule.nodes.resize(npts);
    rule.weights.resize(npts);
    for (int k = 0; k < npts; ++k) {
        double x = es.eigenvalues()[k];
        double pn, dpn, sumsq;
        for (int it = 0; it < 3; ++it) {
            eval(x, pn, dpn, sumsq);
            if (dpn == 0.0) break;
            const double step = pn / dpn;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        eval(x, pn, dpn, sumsq);
        rule.nodes[k] = x;
        rule.weights[k] = 1.0 / sumsq;
    }
    return rule;
}

inline QuadratureRule gauss_legendre(int npts) { return gauss_jacobi(npts, 0.0, 0.0); }

// Gauss-Legendre nodes mapped onto [lo, hi].
inline QuadratureRule gauss_legendre(int npts, double lo, double hi) {
    QuadratureRule r = gauss_legendre(npts);
    const double h = 0.5 * (hi - lo), c = 0.5 * (hi + lo);
    for (std::size_t k = 0; k < r.nodes.size(); ++k) {
        r.nodes[k] = c + h * r.nodes[k];
        r.weights[k] *= h;
    }
    return r;
}

// Chebyshev-Lobatto points on [lo, hi], ascending, endpoints included.
inline std::vector<double> chebyshev_lobatto(int npts, double lo, double hi) {
    std::vector<double> x(npts);
    if (npts == 1) {
        x[0] = 0.5 * (lo + hi);
        return x;
    }
    for (int j = 0; j < npts; ++j) {
        const double c = -std::cos(kPi * j / (npts - 1));
        x[j] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * c;
    }
    x.front() = lo;
    x.back() = hi;
    return x;
}

// Independent RNG streams from one seed.
inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream = 0) {
    return std::mt19937_64(splitmix64(seed ^ splitmix64(stream + 0x51ed27ULL)));
}

}  // namespace dualq
