#pragma once

// Seeded generators for property tests.

#include <cmath>
#include <random>
#include <vector>

#include <dualq/star_body.hpp>

namespace testgen {

using dualq::StarBody;

// rho = c0 + sum of a few harmonics with U(-0.6, 0.6) coefficients, c0 = 2.
inline StarBody random_trig(std::mt19937_64& rng, int harmonics = 3) {
    std::uniform_real_distribution<double> c(-0.6, 0.6);
    std::vector<double> cs, ss;
    for (int k = 0; k < harmonics; ++k) {
        cs.push_back(c(rng));
        ss.push_back(c(rng));
    }
    return StarBody::trig(2.0, cs, ss);
}

// Monotone zonal profile on a handful of knots in |u1|.
inline StarBody random_zonal(std::mt19937_64& rng, int n, int knots = 9) {
    std::uniform_real_distribution<double> step(0.0, 1.0), base(0.5, 1.5);
    std::vector<double> t(knots), r(knots);
    double v = base(rng);
    const bool inc = step(rng) < 0.5;
    for (int k = 0; k < knots; ++k) {
        t[k] = static_cast<double>(k) / (knots - 1);
        r[k] = v;
        v += 0.25 * step(rng);
    }
    if (!inc) std::reverse(r.begin(), r.end());
    return StarBody::zonal(n, t, r);
}

inline StarBody random_body(std::mt19937_64& rng, int n) {
    return n == 2 ? random_trig(rng) : random_zonal(rng, n);
}

// Exact integral (1/2) int_0^{2pi} (c + cos t)^i dt for integer i >= 0.
inline double trig_power_integral(double c, int i) {
    double s = 0.0;
    for (int k = 0; k <= i; k += 2) {
        // int cos^k = 2 pi C(k, k/2) / 2^k
        double ck = 1.0;
        for (int j = 1; j <= k / 2; ++j) ck = ck * (k / 2 + j) / j;
        const double cosk = 2.0 * dualq::kPi * ck / std::pow(2.0, k);
        double binom = 1.0;
        for (int j = 1; j <= k; ++j) binom = binom * (i - k + j) / j;
        s += binom * std::pow(c, i - k) * cosk;
    }
    return 0.5 * s;
}

}  // namespace testgen
