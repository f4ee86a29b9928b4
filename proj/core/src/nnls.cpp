#include <algorithm>
#include <cmath>
#include <vector>

#include "lkpolar/error.hpp"
#include "lkpolar/numkit.hpp"

namespace lkpolar {

NnlsResult nnls(const Matrix& A, const Vector& b, double tol, int max_iter) {
    if (!(tol > 0)) throw Error(ErrorCode::DomainError, "nnls: tol must be positive");
    if (A.cols() > 0 && A.rows() != b.size())
        throw Error(ErrorCode::DimensionMismatch, "nnls: column length differs from target");
    const auto ncols = A.cols();
    NnlsResult result;
    result.coefficients = Vector::Zero(ncols);
    if (ncols == 0) {
        result.residual = b.norm();
        return result;
    }
    if (max_iter <= 0) max_iter = static_cast<int>(3 * ncols + 30);

    // The KKT test is relative to the size of the problem and of the iterate:
    // rounding in w = A^T (b - A x) grows with |A| |x|.
    const double norm_a = A.norm();

    Vector& x = result.coefficients;
    std::vector<char> passive(static_cast<std::size_t>(ncols), 0);
    Vector w = A.transpose() * b;
    int iterations = 0;

    auto solve_passive = [&](Vector& z) {
        std::vector<Eigen::Index> idx;
        for (Eigen::Index j = 0; j < ncols; ++j)
            if (passive[static_cast<std::size_t>(j)]) idx.push_back(j);
        Matrix sub(A.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t k = 0; k < idx.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(idx[k]);
        Vector sol = sub.colPivHouseholderQr().solve(b);
        z = Vector::Zero(ncols);
        for (std::size_t k = 0; k < idx.size(); ++k) z[idx[k]] = sol[static_cast<Eigen::Index>(k)];
    };

    for (;;) {
        Eigen::Index t = -1;
        double best = tol * std::max(1.0, norm_a * (b.norm() + norm_a * x.norm()));
        for (Eigen::Index j = 0; j < ncols; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w[j] > best) {
                best = w[j];
                t = j;
            }
        }
        if (t < 0) break;
        if (++iterations > max_iter)
            throw Error(ErrorCode::NoConvergence, "nnls: iteration cap reached");
        passive[static_cast<std::size_t>(t)] = 1;

        Vector z;
        for (int inner = 0;; ++inner) {
            solve_passive(z);
            bool all_positive = true;
            for (Eigen::Index j = 0; j < ncols; ++j)
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0) all_positive = false;
            if (all_positive) {
                x = z;
                break;
            }
            if (inner > 3 * ncols + 30)
                throw Error(ErrorCode::NoConvergence, "nnls: inner loop did not terminate");
            double step = 1.0;
            for (Eigen::Index j = 0; j < ncols; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z[j] <= 0) {
                    double denom = x[j] - z[j];
                    if (denom > 0) step = std::min(step, x[j] / denom);
                }
            }
            x += step * (z - x);
            for (Eigen::Index j = 0; j < ncols; ++j) {
                if (passive[static_cast<std::size_t>(j)] && x[j] <= 1e-15) {
                    passive[static_cast<std::size_t>(j)] = 0;
                    x[j] = 0.0;
                }
            }
        }
        w = A.transpose() * (b - A * x);
        // The newly added column can stall when the least-squares fit gives it
        // a zero coefficient; exclude it from re-selection this round.
        if (!passive[static_cast<std::size_t>(t)]) w[t] = 0.0;
    }
    result.residual = (A * x - b).norm();
    return result;
}

NnlsResult nnls(std::span<const Vector> columns, const Vector& target, double tol, int max_iter) {
    Matrix A(target.size(), static_cast<Eigen::Index>(columns.size()));
    for (std::size_t k = 0; k < columns.size(); ++k) {
        if (columns[k].size() != target.size())
            throw Error(ErrorCode::DimensionMismatch, "nnls: column length differs from target");
        A.col(static_cast<Eigen::Index>(k)) = columns[k];
    }
    return nnls(A, target, tol, max_iter);
}

bool least_distance(const Matrix& G, const Vector& h, Vector& z, double tol) {
    const auto p = G.cols();
    const auto m = G.rows();
    if (m == 0) {
        z = Vector::Zero(p);
        return true;
    }
    // Lawson-Hanson: with E = [-G^T; -h^T] and f = e_{p+1}, the NNLS residual
    // r = E u - f vanishes iff G z <= h is infeasible; otherwise
    // z = -r_{1..p} / r_{p+1}.
    Matrix E(p + 1, m);
    E.topRows(p) = -G.transpose();
    E.row(p) = -h.transpose();
    Vector f = Vector::Zero(p + 1);
    f[p] = 1.0;
    NnlsResult sol = nnls(E, f, 1e-14);
    Vector r = E * sol.coefficients - f;
    if (r.norm() <= tol || r[p] >= 0.0) return false;
    z = -r.head(p) / r[p];
    return true;
}

}  // namespace lkpolar
