#include <gtest/gtest.h>

#include "test_support.hpp"

using namespace lkpolar;
using namespace lkpolar::testing;

namespace {

// x in cone(generators) iff the NNLS residual vanishes.
bool in_hull(const std::vector<Vector>& gens, const Vector& x) {
    return nnls(std::span<const Vector>(gens), x).residual <= 1e-9 * std::max(1.0, x.norm());
}

}  // namespace

TEST(Cone, QuadrantRepresentations) {
    ConvexCone q = quadrant();
    EXPECT_EQ(q.dim(), 2);
    EXPECT_TRUE(q.is_pointed());
    EXPECT_EQ(q.rays().size(), 2u);
    ASSERT_EQ(q.facet_normals().size(), 2u);
    EXPECT_TRUE(q.contains(vec({0.3, 2.0})));
    EXPECT_FALSE(q.contains(vec({-0.1, 1.0})));
    q.validate();
}

TEST(Cone, RedundantGeneratorsAreDropped) {
    ConvexCone c = cone_of({{1, 0}, {0, 1}, {1, 1}, {2, 0}});
    EXPECT_EQ(c.rays().size(), 2u);
}

TEST(Cone, HalfPlaneHasLineality) {
    ConvexCone h = half_plane();
    EXPECT_EQ(h.lineality_dim(), 1);
    EXPECT_EQ(h.rays().size(), 1u);
    EXPECT_EQ(h.facet_normals().size(), 1u);
    EXPECT_EQ(h.dim(), 2);
}

TEST(Cone, LowerDimensionalSpan) {
    ConvexCone c = cone_of({{1, 0, 0}, {0, 1, 0}});
    EXPECT_EQ(c.dim(), 2);
    EXPECT_FALSE(c.is_full_dim());
    EXPECT_FALSE(c.contains(vec({1, 1, 0.1})));
    EXPECT_TRUE(c.contains(vec({1, 1, 0})));
}

TEST(Cone, ZeroGeneratorAndDimensionErrors) {
    std::vector<Vector> zero{vec({0, 0})};
    try {
        cone_from_generators(zero, 2);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroGenerator);
    }
    std::vector<Vector> bad{vec({1, 0, 0})};
    EXPECT_THROW(cone_from_generators(bad, 2), Error);
}

TEST(Cone, FullSpaceFromHalfspacesOfNothing) {
    std::vector<Vector> none;
    ConvexCone full = cone_from_halfspaces(none, 3);
    EXPECT_EQ(full.lineality_dim(), 3);
    EXPECT_TRUE(full.facet_normals().empty());
}

TEST(Cone, HalfspacesToGeneratorsOctant) {
    std::vector<Vector> normals{vec({-1, 0, 0}), vec({0, -1, 0}), vec({0, 0, -1})};
    ConeGenerators g = halfspaces_to_generators(normals, 3);
    EXPECT_EQ(g.lineality.rank(), 0);
    EXPECT_EQ(g.rays.size(), 3u);
}

TEST(Cone, RandomConesRoundTripAgainstNnlsMembership) {
    RngStream rng(5, 0);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 3;
        std::vector<Vector> gens;
        for (int k = 0; k < n + 3; ++k) gens.push_back(rng.gaussian(n));
        ConvexCone c = cone_from_generators(gens, n);
        c.validate();
        for (int s = 0; s < 50; ++s) {
            Vector x = rng.gaussian(n);
            bool hull = in_hull(gens, x);
            // Skip points within rounding of the boundary.
            double margin = 1.0;
            for (const auto& a : c.facet_normals()) margin = std::min(margin, std::abs(a.dot(x)) / x.norm());
            if (margin < 1e-6) continue;
            EXPECT_EQ(c.contains(x), hull);
        }
        // Every facet is tight on at least dim - 1 independent rays.
        for (const auto& a : c.facet_normals()) {
            std::vector<Vector> tight;
            for (const auto& r : c.rays())
                if (std::abs(a.dot(r)) < 1e-9) tight.push_back(r);
            for (int k = 0; k < c.lineality_dim(); ++k) tight.push_back(c.lineality().vector(k));
            EXPECT_EQ(orthonormalize(tight).rank(), c.dim() - 1);
        }
    }
}

TEST(Cone, DdConvertGivesPolarRays) {
    std::vector<Vector> gens{vec({1, 0}), vec({1, 1})};
    auto normals = dd_convert(gens, 2);
    ASSERT_EQ(normals.size(), 2u);
    for (const auto& a : normals)
        for (const auto& g : gens) EXPECT_LE(a.dot(g), 1e-12);
}

TEST(Cone, IntersectionOfOppositeQuadrantsIsOrigin) {
    std::vector<ConvexCone> cs{quadrant(), cone_of({{-1, 0}, {0, -1}})};
    ConvexCone z = intersect(cs);
    EXPECT_EQ(z.dim(), 0);
}

TEST(Cone, ProjectionOfOctantOntoPlane) {
    Basis plane = orthonormalize(std::vector<Vector>{vec({1, 0, 0}), vec({0, 1, 0})});
    ConvexCone p = project_cone(octant(), plane);
    EXPECT_EQ(p.ambient_dim(), 2);
    EXPECT_EQ(p.rays().size(), 2u);
}

TEST(Faces, OctantFVector) {
    FaceLattice l = faces(octant());
    EXPECT_EQ(l.count(0), 1u);
    EXPECT_EQ(l.count(1), 3u);
    EXPECT_EQ(l.count(2), 3u);
    EXPECT_EQ(l.count(3), 1u);
    EXPECT_TRUE(l.top().is_top());
}

TEST(Faces, HalfPlaneFaces) {
    FaceLattice l = faces(half_plane());
    EXPECT_EQ(l.count(0), 0u);
    EXPECT_EQ(l.count(1), 1u);  // the boundary line
    EXPECT_EQ(l.count(2), 1u);
}

TEST(Faces, EulerRelationOnRandomCones) {
    // For a pointed full-dimensional cone in R^n the face numbers satisfy
    // sum_k (-1)^k f_k = 0 (the link is a sphere).
    RngStream rng(9, 0);
    for (int trial = 0; trial < 20; ++trial) {
        int n = 3 + trial % 2;
        ConvexCone c = random_pointed_cone(rng, n, n + 3);
        FaceLattice l = faces(c);
        long sum = 0;
        for (int k = 0; k <= n; ++k) sum += (k % 2 ? -1 : 1) * static_cast<long>(l.count(k));
        EXPECT_EQ(sum, 0) << "n=" << n;
    }
}

TEST(Faces, ConormalConeOfFace) {
    ConvexCone q = quadrant();
    FaceLattice l = faces(q);
    ConvexCone apex = conormal_cone(l.faces(0).front(), q);
    EXPECT_EQ(apex.rays().size(), 2u);
    ConvexCone top = conormal_cone(l.top(), q);
    EXPECT_EQ(top.dim(), 0);

    Face foreign = l.faces(1).front();
    foreign.tight_normals = {0, 1};
    try {
        conormal_cone(foreign, q);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::FaceNotInLattice);
    }
}

TEST(Union, InclusionExclusionTerms) {
    PolyUnion u({quadrant(), cone_of({{-1, 0}, {0, -1}}), half_plane()});
    auto terms = inclusion_exclusion_terms(u);
    EXPECT_EQ(terms.size(), 7u);
    int sum = 0;
    for (const auto& t : terms) sum += t.sign;
    EXPECT_EQ(sum, 1);  // 3 - 3 + 1
}

TEST(Union, RejectsTooManyMembers) {
    std::vector<ConvexCone> many(7, quadrant());
    PolyUnion u(many);
    EXPECT_THROW(inclusion_exclusion_terms(u), Error);
    EXPECT_THROW(PolyUnion({quadrant(), octant()}), Error);
}

TEST(Polytope, HomogenizeDropsInteriorAndDuplicatePoints) {
    std::vector<Vector> pts{vec({0, 0}), vec({1, 0}), vec({0.2, 0.2}), vec({0, 1}), vec({1, 0})};
    Polytope p = homogenize(pts);
    EXPECT_EQ(p.vertices.size(), 3u);
    EXPECT_EQ(p.ambient_dim(), 2);
    EXPECT_EQ(p.dim(), 2);
}

TEST(Polytope, SegmentInThePlane) {
    std::vector<Vector> pts{vec({0, 0}), vec({2, 1})};
    Polytope p = homogenize(pts);
    EXPECT_EQ(p.dim(), 1);
}
