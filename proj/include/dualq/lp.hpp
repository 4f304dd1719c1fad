#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace dualq {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpResult {
    LpStatus status = LpStatus::Infeasible;
    Eigen::VectorXd x;
    double objective = 0.0;
    int iterations = 0;
};

// Dense revised simplex for   min c'x  s.t.  A x = b, x >= 0.
//
// Meant for few rows and many columns (moment constraints over a fine node
// set): the basis is refactorized every iteration, pricing is Dantzig with a
// switch to Bland's rule after a run of degenerate pivots. Rows and columns
// are equilibrated internally; results are in the caller's units.
class DenseSimplex {
public:
    DenseSimplex(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::VectorXd c)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {}

    LpResult solve(int max_iter = 0) {
        const int m = static_cast<int>(a_.rows()), n = static_cast<int>(a_.cols());
        if (max_iter <= 0) max_iter = 50 * (m + n) + 1000;

        // Equilibrate: rows by max entry, then columns by max entry.
        row_scale_ = Eigen::VectorXd::Ones(m);
        col_scale_ = Eigen::VectorXd::Ones(n);
        for (int i = 0; i < m; ++i) {
            const double r = a_.row(i).cwiseAbs().maxCoeff();
            if (r > 0) row_scale_(i) = 1.0 / r;
        }
        Eigen::MatrixXd as = row_scale_.asDiagonal() * a_;
        for (int j = 0; j < n; ++j) {
            const double s = as.col(j).cwiseAbs().maxCoeff();
            if (s > 0) col_scale_(j) = 1.0 / s;
        }
        as = as * col_scale_.asDiagonal();
        Eigen::VectorXd bs = row_scale_.asDiagonal() * b_;
        Eigen::VectorXd cs = col_scale_.asDiagonal() * c_;
        for (int i = 0; i < m; ++i) {
            if (bs(i) < 0) {
                bs(i) = -bs(i);
                as.row(i) *= -1.0;
            }
        }

        // Phase 1 with artificials appended as columns n..n+m-1.
        Eigen::MatrixXd a1(m, n + m);
        a1 << as, Eigen::MatrixXd::Identity(m, m);
        Eigen::VectorXd c1 = Eigen::VectorXd::Zero(n + m);
        c1.tail(m).setOnes();
        std::vector<int> basis(m);
        for (int i = 0; i < m; ++i) basis[i] = n + i;

        LpResult res;
        int it = 0;
        LpStatus st = iterate(a1, bs, c1, basis, n + m, max_iter, it);
        res.iterations = it;
        if (st == LpStatus::IterationLimit) {
            res.status = st;
            return res;
        }
        Eigen::VectorXd xb = basic_solution(a1, bs, basis);
        double infeas = 0.0;
        for (int i = 0; i < m; ++i)
            if (basis[i] >= n) infeas += std::abs(xb(i));
        if (infeas > 1e-9 * std::max(1.0, bs.cwiseAbs().maxCoeff())) {
            res.status = LpStatus::Infeasible;
            return res;
        }

        // Drive remaining artificials out of the basis; drop redundant rows.
        std::vector<int> keep_rows;
        for (int i = 0; i < m; ++i) {
            if (basis[i] < n) continue;
            Eigen::MatrixXd bm = basis_matrix(a1, basis);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
            int enter = -1;
            double best = 1e-9;
            for (int j = 0; j < n; ++j) {
                if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
                Eigen::VectorXd alpha = lu.solve(a1.col(j));
                if (std::abs(alpha(i)) > best) {
                    best = std::abs(alpha(i));
                    enter = j;
                }
            }
            if (enter >= 0) basis[i] = enter;
        }
        std::vector<int> rows, basis2;
        for (int i = 0; i < m; ++i)
            if (basis[i] < n) {
                rows.push_back(i);
                basis2.push_back(basis[i]);
            }
        Eigen::MatrixXd a2(rows.size(), n);
        Eigen::VectorXd b2(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) {
            a2.row(r) = as.row(rows[r]);
            b2(r) = bs(rows[r]);
        }

        st = iterate(a2, b2, cs, basis2, n, max_iter, it);
        res.iterations = it;
        res.status = st;
        if (st != LpStatus::Optimal) return res;

        Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
        Eigen::VectorXd xb2 = basic_solution(a2, b2, basis2);
        for (std::size_t i = 0; i < basis2.size(); ++i) x(basis2[i]) = std::max(0.0, xb2(i));
        res.x = col_scale_.asDiagonal() * x;
        res.objective = c_.dot(res.x);
        return res;
    }

private:
    static Eigen::MatrixXd basis_matrix(const Eigen::MatrixXd& a, const std::vector<int>& basis) {
        Eigen::MatrixXd bm(a.rows(), basis.size());
        for (std::size_t i = 0; i < basis.size(); ++i) bm.col(i) = a.col(basis[i]);
        return bm;
    }

    // B x_B = b with one step of iterative refinement.
    static Eigen::VectorXd basic_solution(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                                          const std::vector<int>& basis) {
        Eigen::MatrixXd bm = basis_matrix(a, basis);
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
        Eigen::VectorXd x = lu.solve(b);
        x += lu.solve(b - bm * x);
        return x;
    }

    static LpStatus iterate(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                            std::vector<int>& basis, int ncols, int max_iter, int& it) {
        const int m = static_cast<int>(a.rows());
        if (m == 0) return LpStatus::Optimal;
        std::vector<char> in_basis(ncols, 0);
        for (int j : basis) in_basis[j] = 1;
        int degenerate_run = 0;
        for (; it < max_iter; ++it) {
            Eigen::MatrixXd bm = basis_matrix(a, basis);
            Eigen::PartialPivLU<Eigen::MatrixXd> lu(bm);
            Eigen::VectorXd xb = lu.solve(b);
            Eigen::VectorXd cb(m);
            for (int i = 0; i < m; ++i) cb(i) = c(basis[i]);
            Eigen::VectorXd y = lu.transpose().solve(cb);
            Eigen::RowVectorXd d = c.head(ncols).transpose() - y.transpose() * a.leftCols(ncols);

            const bool bland = degenerate_run > 50;
            const double dtol = 1e-11 * std::max(1.0, c.head(ncols).cwiseAbs().maxCoeff());
            int enter = -1;
            double best = -dtol;
            for (int j = 0; j < ncols; ++j) {
                if (in_basis[j]) continue;
                if (d(j) < best) {
                    enter = j;
                    if (bland) break;
                    best = d(j);
                }
            }
            if (enter < 0) return LpStatus::Optimal;

            Eigen::VectorXd alpha = lu.solve(a.col(enter));
            int leave = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m; ++i) {
                if (alpha(i) <= 1e-12) continue;
                const double r = std::max(0.0, xb(i)) / alpha(i);
                if (r < ratio - 1e-14 || (std::abs(r - ratio) <= 1e-14 && leave >= 0 && basis[i] < basis[leave])) {
                    ratio = r;
                    leave = i;
                }
            }
            if (leave < 0) return LpStatus::Unbounded;
            degenerate_run = ratio <= 1e-14 ? degenerate_run + 1 : 0;
            in_basis[basis[leave]] = 0;
            basis[leave] = enter;
            in_basis[enter] = 1;
        }
        return LpStatus::IterationLimit;
    }

    Eigen::MatrixXd a_;
    Eigen::VectorXd b_, c_;
    Eigen::VectorXd row_scale_, col_scale_;
};

inline LpResult lp_minimize(Eigen::MatrixXd a, Eigen::VectorXd b, Eigen::VectorXd c, int max_iter = 0) {
    return DenseSimplex(std::move(a), std::move(b), std::move(c)).solve(max_iter);
}

}  // namespace dualq
