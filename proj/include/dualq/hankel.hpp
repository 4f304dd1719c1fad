#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <vector>

#include "errors.hpp"

namespace dualq {

using Matrix = Eigen::MatrixXd;

// H(j,k) = seq[j + k + offset], 0 <= j,k < order
inline Matrix hankel(const std::vector<double>& seq, int order, int offset = 0) {
    if (order < 0) fail_input("hankel: negative order");
    if (order > 0 && static_cast<std::size_t>(2 * (order - 1) + offset) >= seq.size())
        fail_input("hankel: sequence too short");
    Matrix h(order, order);
    for (int j = 0; j < order; ++j)
        for (int k = 0; k < order; ++k) h(j, k) = seq[j + k + offset];
    return h;
}

inline double inf_norm(const Matrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().rowwise().sum().maxCoeff();
}

// Positive-definiteness threshold 1e-10 * max(1, ||M||_inf).
inline double pd_threshold(const Matrix& m, double rel = 1e-10) { return rel * std::max(1.0, inf_norm(m)); }

inline double min_eigenvalue(const Matrix& m) {
    if (m.rows() == 0) return INFINITY;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

// Smallest eigenvalue of D^{-1/2} M D^{-1/2}, D = diag(M). Same sign
// pattern as M but insensitive to the scale spread of moment sequences.
// Non-positive diagonals fall back to the raw eigenvalue.
inline double scaled_min_eigenvalue(const Matrix& m) {
    if (m.rows() == 0) return INFINITY;
    Eigen::VectorXd d = m.diagonal();
    if ((d.array() <= 0.0).any()) return min_eigenvalue(m);
    Eigen::VectorXd s = d.array().rsqrt();
    Matrix c = s.asDiagonal() * m * s.asDiagonal();
    return min_eigenvalue(c);
}

inline double determinant(const Matrix& m) {
    if (m.rows() == 0) return 1.0;
    return m.determinant();
}

inline bool is_pd(const Matrix& m) { return m.rows() == 0 || min_eigenvalue(m) > pd_threshold(m); }
inline bool is_psd(const Matrix& m) { return m.rows() == 0 || min_eigenvalue(m) >= -pd_threshold(m); }

}  // namespace dualq
