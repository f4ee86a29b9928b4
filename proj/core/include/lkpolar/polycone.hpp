#pragma once

#include <map>
#include <span>
#include <vector>

#include "lkpolar/numkit.hpp"

namespace lkpolar {

inline constexpr double kConeTol = 1e-9;

/// Closed convex polyhedral cone with apex at the origin, held in both
/// representations:
///   V: cone = lineality + cone(rays), rays unit and orthogonal to lineality;
///   H: cone = span ∩ {x : <a, x> <= 0 for every facet normal a}.
/// Facet normals are unit and lie inside span, so they are intrinsic to the
/// cone rather than to the ambient space.
class ConvexCone {
public:
    int ambient_dim() const { return ambient_dim_; }
    int dim() const { return span_.rank(); }
    int lineality_dim() const { return lineality_.rank(); }
    bool is_pointed() const { return lineality_.rank() == 0; }
    bool is_full_dim() const { return dim() == ambient_dim_; }

    const std::vector<Vector>& rays() const { return rays_; }
    const Basis& lineality() const { return lineality_; }
    const Basis& span() const { return span_; }
    const std::vector<Vector>& facet_normals() const { return facet_normals_; }

    /// V-representation: the rays followed by +/- each lineality vector.
    std::vector<Vector> generators() const;
    Matrix generator_matrix() const;

    /// H-representation in the ambient space: facet normals plus a +/- pair
    /// for each vector of the span's orthogonal complement.
    std::vector<Vector> ambient_normals() const;

    bool contains(const Vector& x, double tol = 1e-8) const;

    /// Throws Error(InvalidArgument) if any structural invariant fails.
    void validate(double tol = kConeTol) const;

private:
    friend ConvexCone make_cone(int, std::vector<Vector>, Basis, Basis, std::vector<Vector>);

    int ambient_dim_ = 0;
    std::vector<Vector> rays_;
    Basis lineality_;
    Basis span_;
    std::vector<Vector> facet_normals_;
};

/// Result of converting an H-description {x : A x <= 0} to generators.
struct ConeGenerators {
    Basis lineality;
    std::vector<Vector> rays;  // unit, orthogonal to lineality
};

/// Double description: generators of {x : <a, x> <= 0 for a in normals}.
/// Normals are processed one at a time with a rank-based adjacency test.
ConeGenerators halfspaces_to_generators(std::span<const Vector> normals, int ambient_dim,
                                        double tol = kConeTol);

/// Minimal facet normals of cone(generators): the extreme rays of the polar
/// cone inside span(generators). The full space yields an empty list.
std::vector<Vector> dd_convert(std::span<const Vector> generators, int ambient_dim,
                               double tol = kConeTol);

/// Build a cone from arbitrary nonzero generators; redundant generators are
/// dropped. An empty list gives the zero cone.
ConvexCone cone_from_generators(std::span<const Vector> generators, int ambient_dim,
                                double tol = kConeTol);

/// The cone {x : <a, x> <= 0} for the given ambient normals.
ConvexCone cone_from_halfspaces(std::span<const Vector> normals, int ambient_dim,
                                double tol = kConeTol);

//---------------------------------------------------------------------------//
// Faces
//---------------------------------------------------------------------------//

struct Face {
    int dim = 0;
    std::vector<int> tight_normals;  // indices into the cone's facet_normals, sorted
    std::vector<int> ray_indices;    // indices into the cone's rays lying on the face
    Basis span;
    std::vector<Vector> generators;  // face rays followed by +/- lineality vectors

    bool is_top() const { return tight_normals.empty(); }
};

struct FaceLattice {
    int ambient_dim = 0;
    int cone_dim = 0;
    std::map<int, std::vector<Face>> faces_by_dim;

    const Face& top() const { return faces_by_dim.at(cone_dim).front(); }
    const std::vector<Face>& faces(int k) const;
    std::size_t count(int k) const;
    std::size_t size() const;
};

/// Face lattice enumerated as the distinct tight-normal closures reachable
/// from the top face by adding one facet at a time.
FaceLattice faces(const ConvexCone& cone, double tol = kConeTol);

/// Cone generated by the facet normals tight on the face (zero cone on the
/// top face). Throws FaceNotInLattice if the face does not belong to cone.
ConvexCone conormal_cone(const Face& face, const ConvexCone& cone, double tol = kConeTol);

/// The face viewed as a cone in the ambient space.
ConvexCone face_cone(const Face& face, int ambient_dim, double tol = kConeTol);

/// Orthogonal projection onto a subspace, in the subspace's frame coordinates.
ConvexCone project_cone(const ConvexCone& cone, const Basis& subspace, double tol = kConeTol);

/// Intersection of cones sharing one ambient dimension.
ConvexCone intersect(std::span<const ConvexCone> cones, double tol = kConeTol);

//---------------------------------------------------------------------------//
// Unions and polytopes
//---------------------------------------------------------------------------//

inline constexpr int kMaxUnionMembers = 6;

/// A finite union of convex cones in one ambient space.
class PolyUnion {
public:
    explicit PolyUnion(std::vector<ConvexCone> members);

    int ambient_dim() const { return members_.front().ambient_dim(); }
    const std::vector<ConvexCone>& members() const { return members_; }
    std::size_t size() const { return members_.size(); }

private:
    std::vector<ConvexCone> members_;
};

/// One inclusion-exclusion term: the intersection of the members in `mask`.
struct SignedCone {
    unsigned mask = 0;
    int sign = 1;
    ConvexCone cone;
};

/// All nonempty-subset intersections with sign (-1)^{|S|+1}. Unions with more
/// than kMaxUnionMembers members are rejected.
std::vector<SignedCone> inclusion_exclusion_terms(const PolyUnion& u, double tol = kConeTol);

/// Convex hull of finitely many points, lifted to the cone over {(v, 1)}.
struct Polytope {
    std::vector<Vector> vertices;  // extreme points, input order
    ConvexCone hom_cone;           // ambient dimension n + 1

    int ambient_dim() const { return hom_cone.ambient_dim() - 1; }
    int dim() const { return hom_cone.dim() - 1; }
};

Polytope homogenize(std::span<const Vector> vertices, double tol = kConeTol);

}  // namespace lkpolar
