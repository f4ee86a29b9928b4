#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "lkpolar/convex_piece.hpp"
#include "lkpolar/invariants.hpp"
#include "lkpolar/polycone.hpp"

namespace lkpolar {

inline constexpr double kDefaultFiberRadius = 100.0;

struct McConfig {
    std::int64_t samples = 200000;
    std::uint64_t seed = 0;
    /// Fiber truncation radius for fiber_euler.
    double ball_radius_cap = kDefaultFiberRadius;
    /// Tube radii for the Steiner fit; empty selects default_tube_radii(n).
    std::vector<double> tube_radii;
    /// Unit directions drawn per sampled plane in sigma_mc.
    int inner_directions = 4;
    double feasibility_tol = 1e-10;

    /// Throws InvalidArgument unless samples >= 1000 and R >= 10.
    void validate() const;
};

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

/// {0.05, 0.10, ..., 1.50} for every n.
std::vector<double> default_tube_radii(int n);

/// A signed list of convex pieces whose indicator combination is the body
/// (inclusion-exclusion for unions, a single piece for a polytope).
struct SignedPiece {
    int sign = 1;
    ConvexPiece piece;
};

struct Body {
    int ambient_dim = 0;
    std::vector<SignedPiece> pieces;
    Vector center;          // bounding ball center
    double radius = 1.0;    // bounding ball radius
};

/// X ∩ B^n for a union of cones.
Body union_in_unit_ball(const PolyUnion& u);
Body polytope_body(const Polytope& p);
/// Germ fibers: cone intersections without any ball.
Body union_germ(const PolyUnion& u);

/// chi(X ∩ plane ∩ B(0, R)) by inclusion-exclusion over the members. Pass an
/// infinite R to evaluate the untruncated cone. Throws TruncationSuspect when
/// a feasible minimum-norm point lies within 1% of R.
int fiber_euler(const PolyUnion& u, const AffinePlane& plane, double R);
int fiber_euler(const Body& germ, const AffinePlane& plane, double R);

/// Crofton estimate of Lambda_i(X ∩ B^n).
McEstimate crofton_lambda_mc(const PolyUnion& u, int i, const McConfig& cfg);
McEstimate crofton_lambda_mc(const Polytope& p, int i, const McConfig& cfg);
McEstimate crofton_lambda_mc(const Body& body, int i, const McConfig& cfg);

/// Modified tube volume V_X(r), X = union ∩ B^n.
McEstimate tube_volume_mc(const PolyUnion& u, double r, const McConfig& cfg);
McEstimate tube_volume_mc(const Polytope& p, double r, const McConfig& cfg);
McEstimate tube_volume_mc(const Body& body, double r, const McConfig& cfg);

/// Lambda_0..Lambda_n of X ∩ B^n (or of the polytope) read off a Steiner fit
/// of tube volumes. All radii share one sample set, and the fit is weighted by
/// the covariance of those volumes as measured on an independent pilot run.
std::vector<McEstimate> steiner_fit_mc(const PolyUnion& u, const McConfig& cfg);
std::vector<McEstimate> steiner_fit_mc(const Polytope& p, const McConfig& cfg);
std::vector<McEstimate> steiner_fit_mc(const Body& body, const McConfig& cfg);

/// Polar invariant sigma_j from random j-planes and unit directions in them,
/// weighted by fiber Euler characteristics. Requires 1 <= j <= n.
McEstimate sigma_mc(const PolyUnion& u, int j, const McConfig& cfg);

/// sigma_0..sigma_n (sigma_0 = 1) by Monte Carlo; each j uses its own stream.
Sequence sigma_mc_all(const PolyUnion& u, const McConfig& cfg);

struct UnionLambda {
    Sequence closed;               // inclusion-exclusion of closed forms
    std::vector<McEstimate> mc;    // Steiner fit divided by alpha_i
};

/// Lambda^loc of a union. The Monte-Carlo path is skipped when with_mc is false.
UnionLambda lambda_loc_union(const PolyUnion& u, const McConfig& cfg,
                             const AngleConfig& angles = {}, bool with_mc = true);

/// Closed-form Lambda^loc of a union by inclusion-exclusion only.
Sequence lambda_loc_union_closed(const PolyUnion& u, const AngleConfig& angles = {});

}  // namespace lkpolar
