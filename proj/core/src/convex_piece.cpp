#include "lkpolar/convex_piece.hpp"

#include <algorithm>
#include <cmath>

#include "lkpolar/error.hpp"

namespace lkpolar {

AffinePlane AffinePlane::make(const Vector& point, Basis directions) {
    AffinePlane plane;
    plane.point = point - directions.project(point);
    plane.directions = std::move(directions);
    return plane;
}

namespace {

Matrix rows_of(const std::vector<Vector>& vecs, int n) {
    Matrix m(static_cast<Eigen::Index>(vecs.size()), n);
    for (std::size_t r = 0; r < vecs.size(); ++r) m.row(static_cast<Eigen::Index>(r)) = vecs[r].transpose();
    return m;
}

Matrix span_projector(const Basis& b, int n) {
    const Matrix& s = b.matrix();
    return s.cols() == 0 ? Matrix(Matrix::Zero(n, n)) : Matrix(s * s.transpose());
}

}  // namespace

FaceProjector FaceProjector::for_cone(const ConvexCone& cone, double tol) {
    const int n = cone.ambient_dim();
    FaceProjector fp;
    fp.tol_ = tol;
    // Small faces first: most tube samples lie far outside a unit-ball cone.
    for (const auto& [k, list] : faces(cone).faces_by_dim)
        for (const auto& f : list) fp.candidates_.push_back({Vector::Zero(n), span_projector(f.span, n)});
    fp.ineq_ = rows_of(cone.ambient_normals(), n);
    fp.ineq_rhs_ = Vector::Zero(fp.ineq_.rows());
    fp.directions_ = rows_of(cone.generators(), n);
    fp.points_ = Matrix(0, n);
    return fp;
}

FaceProjector FaceProjector::for_polytope(const Polytope& polytope, double tol) {
    const int n = polytope.ambient_dim();
    FaceProjector fp;
    fp.tol_ = tol;
    for (const auto& [k, list] : faces(polytope.hom_cone).faces_by_dim) {
        if (k == 0) continue;
        for (const auto& f : list) {
            std::vector<Vector> verts, diffs;
            for (const auto& r : f.generators) verts.push_back(r.head(n) / r[n]);
            for (std::size_t v = 1; v < verts.size(); ++v) diffs.push_back(verts[v] - verts[0]);
            Basis dirs = diffs.empty() ? Basis(n) : orthonormalize(diffs);
            fp.candidates_.push_back({verts[0], span_projector(dirs, n)});
        }
    }
    std::vector<Vector> rows;
    std::vector<double> rhs;
    for (const auto& a : polytope.hom_cone.ambient_normals()) {
        double scale = a.head(n).norm();
        if (scale <= kRankTol) continue;
        rows.push_back(a.head(n) / scale);
        rhs.push_back(-a[n] / scale);
    }
    fp.ineq_ = rows_of(rows, n);
    fp.ineq_rhs_ = Eigen::Map<Vector>(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
    fp.directions_ = Matrix(0, n);
    fp.points_ = rows_of(polytope.vertices, n);
    return fp;
}

std::optional<Vector> FaceProjector::project(const Vector& x) const {
    const double tol = std::max(tol_, 1e-10) * std::max(1.0, x.norm());
    for (const auto& c : candidates_) {
        Vector p = c.origin + c.projector * (x - c.origin);
        if (ineq_.rows() > 0 && (ineq_ * p - ineq_rhs_).maxCoeff() > tol) continue;
        Vector q = x - p;
        if (directions_.rows() > 0 && (directions_ * q).maxCoeff() > tol) continue;
        if (points_.rows() > 0 && (points_ * q).maxCoeff() - q.dot(p) > tol * std::max(1.0, q.norm())) continue;
        return p;
    }
    return std::nullopt;
}

ConvexPiece ConvexPiece::from_cone(const ConvexCone& cone, double ball_radius) {
    const int n = cone.ambient_dim();
    ConvexPiece piece;
    const auto& normals = cone.facet_normals();
    piece.ineq_.resize(static_cast<Eigen::Index>(normals.size()), n);
    for (std::size_t r = 0; r < normals.size(); ++r)
        piece.ineq_.row(static_cast<Eigen::Index>(r)) = normals[r].transpose();
    piece.ineq_rhs_ = Vector::Zero(static_cast<Eigen::Index>(normals.size()));
    piece.hull_point_ = Vector::Zero(n);
    piece.hull_dirs_ = cone.span();
    piece.hull_normals_ = cone.span().complement();
    piece.ball_radius_ = ball_radius;
    piece.lower_ = Vector::Constant(n, -ball_radius);
    piece.upper_ = Vector::Constant(n, ball_radius);
    piece.projector_ = std::make_shared<const FaceProjector>(FaceProjector::for_cone(cone));
    return piece;
}

ConvexPiece ConvexPiece::from_polytope(const Polytope& polytope) {
    const int n = polytope.ambient_dim();
    if (polytope.vertices.empty()) throw Error(ErrorCode::EmptyCone, "polytope has no vertices");
    ConvexPiece piece;
    const auto& normals = polytope.hom_cone.facet_normals();
    std::vector<Vector> rows;
    std::vector<double> rhs;
    for (const auto& a : normals) {
        Vector b = a.head(n);
        double scale = b.norm();
        if (scale <= kRankTol) continue;  // the facet t >= 0 of a cone over a point
        rows.push_back(b / scale);
        rhs.push_back(-a[n] / scale);
    }
    piece.ineq_.resize(static_cast<Eigen::Index>(rows.size()), n);
    piece.ineq_rhs_.resize(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        piece.ineq_.row(static_cast<Eigen::Index>(r)) = rows[r].transpose();
        piece.ineq_rhs_[static_cast<Eigen::Index>(r)] = rhs[r];
    }
    const Vector& v0 = polytope.vertices.front();
    std::vector<Vector> diffs;
    for (std::size_t k = 1; k < polytope.vertices.size(); ++k) diffs.push_back(polytope.vertices[k] - v0);
    piece.hull_point_ = v0;
    piece.hull_dirs_ = diffs.empty() ? Basis(n) : orthonormalize(diffs);
    piece.hull_normals_ = piece.hull_dirs_.complement();
    piece.lower_ = v0;
    piece.upper_ = v0;
    for (const auto& v : polytope.vertices) {
        piece.lower_ = piece.lower_.cwiseMin(v);
        piece.upper_ = piece.upper_.cwiseMax(v);
    }
    piece.projector_ = std::make_shared<const FaceProjector>(FaceProjector::for_polytope(polytope));
    return piece;
}

std::optional<double> ConvexPiece::slice_min_norm(const AffinePlane& plane, double tol) const {
    const int n = ambient_dim();
    if (plane.point.size() != n || plane.directions.ambient_dim() != n)
        throw Error(ErrorCode::DimensionMismatch, "plane and piece live in different dimensions");
    const Matrix& N = plane.directions.matrix();
    const Vector& p = plane.point;
    const Eigen::Index d = N.cols();
    const double scale = std::max(1.0, p.norm());

    // Rows of G z <= h in plane coordinates.
    std::vector<Vector> grow;
    std::vector<double> hrow;
    auto add_row = [&](const Vector& a, double rhs) -> bool {
        Vector g = N.transpose() * a;
        double h = rhs - a.dot(p);
        double gn = g.norm();
        if (gn <= kRankTol) return h >= -tol * scale;  // parallel: all or nothing
        grow.push_back(g / gn);
        hrow.push_back(h / gn);
        return true;
    };
    for (Eigen::Index r = 0; r < ineq_.rows(); ++r)
        if (!add_row(ineq_.row(r).transpose(), ineq_rhs_[r])) return std::nullopt;
    for (int k = 0; k < hull_normals_.rank(); ++k) {
        Vector a = hull_normals_.vector(k);
        double c = a.dot(hull_point_);
        if (!add_row(a, c + tol * scale) || !add_row(-a, -c + tol * scale)) return std::nullopt;
    }

    if (d == 0 || grow.empty()) return p.norm();
    Matrix G(static_cast<Eigen::Index>(grow.size()), d);
    Vector h(static_cast<Eigen::Index>(grow.size()));
    for (std::size_t r = 0; r < grow.size(); ++r) {
        G.row(static_cast<Eigen::Index>(r)) = grow[r].transpose();
        h[static_cast<Eigen::Index>(r)] = hrow[r];
    }
    Vector z;
    if (!least_distance(G, h, z, tol)) return std::nullopt;
    return std::sqrt(p.squaredNorm() + z.squaredNorm());
}

bool ConvexPiece::slice_hits(const AffinePlane& plane, double tol) const {
    auto m = slice_min_norm(plane, tol);
    return m && *m <= ball_radius_ * (1.0 + tol);
}

std::vector<ConvexSet> ConvexPiece::dykstra_sets() const {
    std::vector<ConvexSet> sets;
    for (Eigen::Index r = 0; r < ineq_.rows(); ++r)
        sets.emplace_back(HalfSpace{ineq_.row(r).transpose(), ineq_rhs_[r]});
    if (hull_dirs_.rank() < ambient_dim()) sets.emplace_back(AffineSubspace{hull_point_, hull_dirs_});
    if (std::isfinite(ball_radius_)) sets.emplace_back(BallSet{Vector::Zero(ambient_dim()), ball_radius_});
    return sets;
}

double ConvexPiece::dykstra_distance_to(const Vector& x, double tol) const {
    auto sets = dykstra_sets();
    return dykstra_distance(x, sets, tol);
}

double ConvexPiece::distance(const Vector& x) const {
    if (projector_) {
        if (auto p = projector_->project(x)) {
            // For a cone K, the projection onto K ∩ B(0, R) is the radial
            // retraction of the projection onto K. Polytope pieces have no ball.
            double norm = p->norm();
            if (norm > ball_radius_) *p *= ball_radius_ / norm;
            return (x - *p).norm();
        }
    }
    return dykstra_distance_to(x);
}

}  // namespace lkpolar
