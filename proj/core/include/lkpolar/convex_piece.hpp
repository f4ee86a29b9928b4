#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "lkpolar/numkit.hpp"
#include "lkpolar/polycone.hpp"

namespace lkpolar {

/// Affine plane point + span(directions). The point is kept orthogonal to the
/// directions so |point| is the plane's distance to the origin.
struct AffinePlane {
    Vector point;
    Basis directions;

    static AffinePlane make(const Vector& point, Basis directions);
};

/// Exact Euclidean projection onto a polyhedral cone or polytope by a walk
/// over its faces: the first p = proj_{aff F}(x) that lies in the set and
/// satisfies <x - p, y - p> <= 0 for every generator y is the projection.
class FaceProjector {
public:
    static FaceProjector for_cone(const ConvexCone& cone, double tol = 1e-12);
    static FaceProjector for_polytope(const Polytope& polytope, double tol = 1e-12);

    /// Returns nullopt only if no face certifies (numerically degenerate x).
    std::optional<Vector> project(const Vector& x) const;

private:
    struct Candidate {
        Vector origin;     // a point of aff(F)
        Matrix projector;  // n x n orthogonal projection onto the direction space of F
    };
    std::vector<Candidate> candidates_;
    Matrix ineq_;        // rows a with <a, p> <= rhs on the set
    Vector ineq_rhs_;
    Matrix directions_;  // cone generators as rows: <x - p, g> <= 0
    Matrix points_;      // polytope vertices as rows: <x - p, v - p> <= 0
    double tol_ = 1e-12;
};

/// One convex set of the form
///   {x : A x <= b} ∩ hull ∩ B(0, ball_radius)
/// where hull is an affine subspace. Cone members restricted to the unit ball
/// and polytopes are both expressed this way.
class ConvexPiece {
public:
    static ConvexPiece from_cone(const ConvexCone& cone,
                                 double ball_radius = std::numeric_limits<double>::infinity());
    static ConvexPiece from_polytope(const Polytope& polytope);

    int ambient_dim() const { return static_cast<int>(lower_.size()); }
    double ball_radius() const { return ball_radius_; }
    const Vector& box_lower() const { return lower_; }
    const Vector& box_upper() const { return upper_; }

    /// Smallest |x| over plane ∩ piece (ignoring the ball), or nullopt when
    /// empty. Solved as a least-distance program in plane coordinates.
    std::optional<double> slice_min_norm(const AffinePlane& plane, double tol = 1e-10) const;

    /// plane ∩ piece (ball included) nonempty.
    bool slice_hits(const AffinePlane& plane, double tol = 1e-10) const;

    /// The piece as Dykstra set descriptors.
    std::vector<ConvexSet> dykstra_sets() const;

    /// Distance from x to the piece by the exact face-walk projection, with
    /// Dykstra as the fallback for numerically degenerate points.
    double distance(const Vector& x) const;
    double dykstra_distance_to(const Vector& x, double tol = 1e-10) const;

private:
    Matrix ineq_;  // rows
    Vector ineq_rhs_;
    Vector hull_point_;
    Basis hull_dirs_;
    Basis hull_normals_;  // complement of hull_dirs_
    double ball_radius_ = std::numeric_limits<double>::infinity();
    Vector lower_, upper_;
    std::shared_ptr<const FaceProjector> projector_;
};

}  // namespace lkpolar
