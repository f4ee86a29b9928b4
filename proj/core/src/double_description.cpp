#include <algorithm>
#include <cmath>
#include <vector>

#include "lkpolar/error.hpp"
#include "lkpolar/polycone.hpp"

namespace lkpolar {

namespace {

int row_rank(const Matrix& rows) {
    if (rows.rows() == 0) return 0;
    return orthonormalize(Matrix(rows.transpose()), kRankTol).rank();
}

void push_unique(std::vector<Vector>& out, const Vector& v, double tol) {
    for (const auto& w : out)
        if ((w - v).norm() <= 1e3 * tol) return;
    out.push_back(v);
}

}  // namespace

ConeGenerators halfspaces_to_generators(std::span<const Vector> normals, int n, double tol) {
    std::vector<Vector> rows;
    for (const auto& a : normals) {
        if (a.size() != n)
            throw Error(ErrorCode::DimensionMismatch, "double description: normal has wrong length");
        double norm = a.norm();
        if (norm > 0) rows.push_back(a / norm);
    }
    const auto m = static_cast<Eigen::Index>(rows.size());
    Matrix A(m, n);
    for (Eigen::Index k = 0; k < m; ++k) A.row(k) = rows[static_cast<std::size_t>(k)].transpose();

    ConeGenerators out;
    out.lineality = null_space(A, n, kRankTol);
    Basis W = out.lineality.complement(kRankTol);
    const int p = W.rank();
    if (p == 0) return out;

    // Work in coordinates of the lineality complement where the cone is pointed
    // and A' has full column rank p.
    Matrix Ap = A * W.matrix();
    for (Eigen::Index k = 0; k < m; ++k) {
        double norm = Ap.row(k).norm();
        if (norm > 0) Ap.row(k) /= norm;
    }

    // Greedy choice of p independent rows for the initial simplicial cone.
    std::vector<Eigen::Index> basis_rows;
    {
        Matrix ortho(p, p);
        int r = 0;
        for (Eigen::Index k = 0; k < m && r < p; ++k) {
            Vector v = Ap.row(k).transpose();
            for (int pass = 0; pass < 2; ++pass)
                for (int j = 0; j < r; ++j) v -= ortho.col(j).dot(v) * ortho.col(j);
            double norm = v.norm();
            if (norm >= kRankTol) {
                ortho.col(r++) = v / norm;
                basis_rows.push_back(k);
            }
        }
        if (r < p) throw Error(ErrorCode::InvalidArgument, "double description: rank deficiency");
    }

    Matrix B(p, p);
    for (int j = 0; j < p; ++j) B.row(j) = Ap.row(basis_rows[static_cast<std::size_t>(j)]);
    Matrix R = -B.fullPivLu().inverse();
    std::vector<Vector> rays;
    for (int j = 0; j < p; ++j) rays.push_back(R.col(j).normalized());

    std::vector<char> processed(static_cast<std::size_t>(m), 0);
    for (auto k : basis_rows) processed[static_cast<std::size_t>(k)] = 1;

    for (Eigen::Index k = 0; k < m; ++k) {
        if (processed[static_cast<std::size_t>(k)]) continue;
        const Vector a = Ap.row(k).transpose();
        std::vector<double> val(rays.size());
        for (std::size_t r = 0; r < rays.size(); ++r) val[r] = a.dot(rays[r]);

        std::vector<Vector> next;
        for (std::size_t r = 0; r < rays.size(); ++r)
            if (val[r] <= tol) next.push_back(rays[r]);

        for (std::size_t i = 0; i < rays.size(); ++i) {
            if (val[i] <= tol) continue;
            for (std::size_t j = 0; j < rays.size(); ++j) {
                if (val[j] >= -tol) continue;
                // Adjacent iff the processed rows tight on both rays have rank p - 2.
                std::vector<Eigen::Index> common;
                for (Eigen::Index q = 0; q < m; ++q) {
                    if (!processed[static_cast<std::size_t>(q)]) continue;
                    if (std::abs(Ap.row(q).dot(rays[i])) <= tol &&
                        std::abs(Ap.row(q).dot(rays[j])) <= tol)
                        common.push_back(q);
                }
                if (static_cast<int>(common.size()) < p - 2) continue;
                Matrix sub(static_cast<Eigen::Index>(common.size()), p);
                for (std::size_t c = 0; c < common.size(); ++c)
                    sub.row(static_cast<Eigen::Index>(c)) = Ap.row(common[c]);
                if (row_rank(sub) != p - 2) continue;
                Vector ray = val[i] * rays[j] - val[j] * rays[i];
                double norm = ray.norm();
                if (norm > tol) push_unique(next, ray / norm, tol);
            }
        }
        rays = std::move(next);
        processed[static_cast<std::size_t>(k)] = 1;
    }

    for (const auto& r : rays) push_unique(out.rays, (W.matrix() * r).normalized(), tol);
    return out;
}

std::vector<Vector> dd_convert(std::span<const Vector> generators, int n, double tol) {
    for (const auto& g : generators)
        if (g.size() != n)
            throw Error(ErrorCode::DimensionMismatch, "dd_convert: generator has wrong length");
    // Facets of cone(G) are the extreme rays of its polar {y : <g, y> <= 0};
    // the polar's lineality is span(G)^perp and its rays lie inside span(G).
    return halfspaces_to_generators(generators, n, tol).rays;
}

}  // namespace lkpolar
