#include "lkpolar/polycone.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "lkpolar/error.hpp"

namespace lkpolar {

ConvexCone make_cone(int n, std::vector<Vector> rays, Basis lineality, Basis span,
                     std::vector<Vector> facets) {
    ConvexCone c;
    c.ambient_dim_ = n;
    c.rays_ = std::move(rays);
    c.lineality_ = std::move(lineality);
    c.span_ = std::move(span);
    c.facet_normals_ = std::move(facets);
    return c;
}

std::vector<Vector> ConvexCone::generators() const {
    std::vector<Vector> out = rays_;
    for (int k = 0; k < lineality_.rank(); ++k) {
        out.push_back(lineality_.vector(k));
        out.push_back(-lineality_.vector(k));
    }
    return out;
}

Matrix ConvexCone::generator_matrix() const {
    auto gens = generators();
    Matrix m(ambient_dim_, static_cast<Eigen::Index>(gens.size()));
    for (std::size_t k = 0; k < gens.size(); ++k) m.col(static_cast<Eigen::Index>(k)) = gens[k];
    return m;
}

std::vector<Vector> ConvexCone::ambient_normals() const {
    std::vector<Vector> out = facet_normals_;
    Basis perp = span_.complement();
    for (int k = 0; k < perp.rank(); ++k) {
        out.push_back(perp.vector(k));
        out.push_back(-perp.vector(k));
    }
    return out;
}

bool ConvexCone::contains(const Vector& x, double tol) const {
    if (x.size() != ambient_dim_) throw Error(ErrorCode::DimensionMismatch, "contains: wrong length");
    const double scale = std::max(1.0, x.norm());
    if ((x - span_.project(x)).norm() > tol * scale) return false;
    for (const auto& a : facet_normals_)
        if (a.dot(x) > tol * scale) return false;
    return true;
}

void ConvexCone::validate(double tol) const {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    for (const auto& r : rays_) {
        if (std::abs(r.norm() - 1.0) > 1e-10) fail("ray is not unit");
        if (lineality_.coords(r).norm() > 1e-8) fail("ray not orthogonal to lineality");
        if (!contains(r, 1e-8)) fail("ray outside cone");
    }
    for (const auto& g : generators())
        for (const auto& a : facet_normals_)
            if (a.dot(g) > tol * 10) fail("generator violates a facet normal");
    for (const auto& a : facet_normals_) {
        if (std::abs(a.norm() - 1.0) > 1e-10) fail("facet normal is not unit");
        if ((a - span_.project(a)).norm() > 1e-8) fail("facet normal outside span");
    }
    if (lineality_.rank() + orthonormalize(rays_).rank() != span_.rank())
        fail("span rank disagrees with rays and lineality");
}

ConvexCone cone_from_generators(std::span<const Vector> generators, int n, double tol) {
    std::vector<Vector> gens;
    gens.reserve(generators.size());
    for (std::size_t k = 0; k < generators.size(); ++k) {
        const auto& g = generators[k];
        if (g.size() != n)
            throw Error(ErrorCode::DimensionMismatch,
                        "generator " + std::to_string(k) + " has length " + std::to_string(g.size()) +
                            ", expected " + std::to_string(n));
        double norm = g.norm();
        if (!(norm > 0) || !std::isfinite(norm))
            throw Error(ErrorCode::ZeroGenerator, "generator " + std::to_string(k) + " is zero or not finite");
        gens.push_back(g / norm);
    }
    if (gens.empty()) return make_cone(n, {}, Basis(n), Basis(n), {});

    Basis span = orthonormalize(gens, kRankTol);
    std::vector<Vector> facets = dd_convert(gens, n, tol);
    // Canonical V-representation regenerated from the H-representation.
    std::vector<Vector> hrep = facets;
    Basis perp = span.complement();
    for (int k = 0; k < perp.rank(); ++k) {
        hrep.push_back(perp.vector(k));
        hrep.push_back(-perp.vector(k));
    }
    ConeGenerators vrep = halfspaces_to_generators(hrep, n, tol);
    return make_cone(n, std::move(vrep.rays), std::move(vrep.lineality), std::move(span),
                     std::move(facets));
}

ConvexCone cone_from_halfspaces(std::span<const Vector> normals, int n, double tol) {
    ConeGenerators g = halfspaces_to_generators(normals, n, tol);
    std::vector<Vector> gens = g.rays;
    for (int k = 0; k < g.lineality.rank(); ++k) {
        gens.push_back(g.lineality.vector(k));
        gens.push_back(-g.lineality.vector(k));
    }
    return cone_from_generators(gens, n, tol);
}

ConvexCone project_cone(const ConvexCone& cone, const Basis& subspace, double tol) {
    if (subspace.ambient_dim() != cone.ambient_dim())
        throw Error(ErrorCode::DimensionMismatch, "project_cone: subspace ambient dimension differs");
    std::vector<Vector> gens;
    for (const auto& g : cone.generators()) {
        Vector c = subspace.coords(g);
        if (c.norm() > tol) gens.push_back(c);
    }
    return cone_from_generators(gens, subspace.rank(), tol);
}

ConvexCone intersect(std::span<const ConvexCone> cones, double tol) {
    if (cones.empty()) throw Error(ErrorCode::InvalidArgument, "intersect: no cones");
    const int n = cones.front().ambient_dim();
    std::vector<Vector> normals;
    for (const auto& c : cones) {
        if (c.ambient_dim() != n)
            throw Error(ErrorCode::DimensionMismatch, "intersect: ambient dimensions differ");
        auto hrep = c.ambient_normals();
        normals.insert(normals.end(), hrep.begin(), hrep.end());
    }
    return cone_from_halfspaces(normals, n, tol);
}

PolyUnion::PolyUnion(std::vector<ConvexCone> members) : members_(std::move(members)) {
    if (members_.empty()) throw Error(ErrorCode::InvalidArgument, "union needs at least one member");
    for (const auto& m : members_)
        if (m.ambient_dim() != members_.front().ambient_dim())
            throw Error(ErrorCode::DimensionMismatch, "union members differ in ambient dimension");
}

std::vector<SignedCone> inclusion_exclusion_terms(const PolyUnion& u, double tol) {
    const auto m = static_cast<unsigned>(u.size());
    if (m > kMaxUnionMembers)
        throw Error(ErrorCode::InvalidArgument,
                    "inclusion-exclusion supports at most " + std::to_string(kMaxUnionMembers) +
                        " members, got " + std::to_string(m));
    std::vector<SignedCone> terms;
    std::vector<int> slot(1u << m, -1);
    for (unsigned mask = 1; mask < (1u << m); ++mask) {
        unsigned low = static_cast<unsigned>(std::countr_zero(mask));
        unsigned rest = mask & (mask - 1);
        ConvexCone cone = rest == 0
                              ? u.members()[low]
                              : intersect(std::vector<ConvexCone>{terms[static_cast<std::size_t>(slot[rest])].cone,
                                                                  u.members()[low]},
                                          tol);
        int sign = (std::popcount(mask) % 2 == 1) ? 1 : -1;
        slot[mask] = static_cast<int>(terms.size());
        terms.push_back({mask, sign, std::move(cone)});
    }
    return terms;
}

Polytope homogenize(std::span<const Vector> vertices, double tol) {
    if (vertices.empty()) throw Error(ErrorCode::InvalidArgument, "homogenize: no vertices");
    const auto n = vertices.front().size();
    std::vector<Vector> lifted;
    for (std::size_t k = 0; k < vertices.size(); ++k) {
        if (vertices[k].size() != n)
            throw Error(ErrorCode::DimensionMismatch, "homogenize: vertex " + std::to_string(k) + " has wrong length");
        Vector l(n + 1);
        l.head(n) = vertices[k];
        l[n] = 1.0;
        lifted.push_back(l);
    }
    std::vector<char> keep(lifted.size(), 1);
    for (std::size_t k = 0; k < lifted.size(); ++k) {
        std::vector<Vector> others;
        for (std::size_t j = 0; j < lifted.size(); ++j)
            if (j != k && keep[j]) others.push_back(lifted[j]);
        if (others.empty()) continue;
        NnlsResult res = nnls(others, lifted[k], 1e-13);
        if (res.residual <= 1e-9 * lifted[k].norm()) keep[k] = 0;
    }
    Polytope p;
    std::vector<Vector> gens;
    for (std::size_t k = 0; k < lifted.size(); ++k) {
        if (!keep[k]) continue;
        p.vertices.push_back(vertices[k]);
        gens.push_back(lifted[k]);
    }
    p.hom_cone = cone_from_generators(gens, static_cast<int>(n + 1), tol);
    return p;
}

}  // namespace lkpolar
