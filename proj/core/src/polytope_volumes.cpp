#include <cmath>
#include <algorithm>
#include <map>

#include "lkpolar/error.hpp"
#include "lkpolar/invariants.hpp"

namespace lkpolar {

namespace {

struct PolytopeFace {
    const Face* hom = nullptr;
    int dim = 0;  // polytope dimension = hom dimension - 1
    std::vector<Vector> vertices;
};

class FaceVolumes {
public:
    explicit FaceVolumes(const Polytope& p) : lattice_(lkpolar::faces(p.hom_cone)) {
        const int n = p.ambient_dim();
        for (const auto& [k, list] : lattice_.faces_by_dim) {
            if (k == 0) continue;
            for (const auto& f : list) {
                PolytopeFace pf;
                pf.hom = &f;
                pf.dim = k - 1;
                for (const auto& r : f.generators) {
                    if (r[n] <= 0)
                        throw Error(ErrorCode::DegenerateFace, "polytope face has a generator at infinity");
                    pf.vertices.push_back(r.head(n) / r[n]);
                }
                int rank = affine_rank(pf.vertices);
                if (rank != pf.dim)
                    throw Error(ErrorCode::DegenerateFace,
                                "face of lattice dimension " + std::to_string(pf.dim) + " spans " +
                                    std::to_string(rank) + " dimensions");
                faces_.push_back(std::move(pf));
            }
        }
    }

    const std::vector<PolytopeFace>& faces() const { return faces_; }

    double volume(std::size_t idx) {
        if (auto it = memo_.find(idx); it != memo_.end()) return it->second;
        const PolytopeFace& f = faces_[idx];
        double vol = 1.0;
        if (f.dim > 0) {
            // Pyramid decomposition from the vertex barycenter over the facets.
            Vector center = Vector::Zero(f.vertices.front().size());
            for (const auto& v : f.vertices) center += v;
            center /= static_cast<double>(f.vertices.size());
            double sum = 0.0;
            for (std::size_t g = 0; g < faces_.size(); ++g) {
                if (faces_[g].dim != f.dim - 1 || !contains(*f.hom, *faces_[g].hom)) continue;
                sum += distance_to_affine_hull(center, faces_[g].vertices) * volume(g);
            }
            vol = sum / f.dim;
        }
        memo_[idx] = vol;
        return vol;
    }

private:
    static int affine_rank(const std::vector<Vector>& pts) {
        std::vector<Vector> diffs;
        for (std::size_t k = 1; k < pts.size(); ++k) diffs.push_back(pts[k] - pts[0]);
        return diffs.empty() ? 0 : orthonormalize(diffs).rank();
    }

    static double distance_to_affine_hull(const Vector& x, const std::vector<Vector>& pts) {
        std::vector<Vector> diffs;
        for (std::size_t k = 1; k < pts.size(); ++k) diffs.push_back(pts[k] - pts[0]);
        Vector d = x - pts[0];
        if (!diffs.empty()) d -= orthonormalize(diffs).project(d);
        return d.norm();
    }

    // Face g is a subface of f when its tight set contains f's.
    static bool contains(const Face& f, const Face& g) {
        return std::includes(g.tight_normals.begin(), g.tight_normals.end(), f.tight_normals.begin(),
                             f.tight_normals.end());
    }

    FaceLattice lattice_;
    std::vector<PolytopeFace> faces_;
    std::map<std::size_t, double> memo_;
};

}  // namespace

double polytope_volume(const Polytope& polytope) {
    FaceVolumes fv(polytope);
    for (std::size_t k = 0; k < fv.faces().size(); ++k)
        if (fv.faces()[k].hom->is_top()) return fv.volume(k);
    throw Error(ErrorCode::DegenerateFace, "polytope has no top face");
}

Sequence polytope_intrinsic_volumes(const Polytope& polytope, const AngleConfig& cfg) {
    const int n = polytope.ambient_dim();
    FaceVolumes fv(polytope);
    Sequence out(n + 1);
    std::vector<double> var(static_cast<std::size_t>(n + 1), 0.0);

    // Exterior angles are measured inside the direction space of aff(P).
    std::vector<Vector> diffs;
    for (std::size_t k = 1; k < polytope.vertices.size(); ++k)
        diffs.push_back(polytope.vertices[k] - polytope.vertices[0]);
    Basis dir = diffs.empty() ? Basis(n) : orthonormalize(diffs);
    const auto& normals = polytope.hom_cone.facet_normals();

    std::uint64_t stream = 0;
    for (std::size_t idx = 0; idx < fv.faces().size(); ++idx) {
        const PolytopeFace& f = fv.faces()[idx];
        AngleResult gamma{1.0, 0.0, AngleMethod::exact1d, 0};
        if (!f.hom->is_top()) {
            std::vector<Vector> outward;
            for (int a : f.hom->tight_normals) {
                Vector c = dir.coords(normals[static_cast<std::size_t>(a)].head(n));
                if (c.norm() <= kRankTol)
                    throw Error(ErrorCode::DegenerateFace, "facet normal has no component along the polytope");
                outward.push_back(c);
            }
            gamma = solid_angle(cone_from_generators(outward, dir.rank()),
                                cfg.with_stream(cfg.stream * 1000003 + stream));
        }
        ++stream;
        double vol = fv.volume(idx);
        out.value[static_cast<std::size_t>(f.dim)] += gamma.value * vol;
        var[static_cast<std::size_t>(f.dim)] += std::pow(gamma.std_error * vol, 2);
    }
    for (int k = 0; k <= n; ++k) out.std_error[static_cast<std::size_t>(k)] = std::sqrt(var[static_cast<std::size_t>(k)]);
    return out;
}

std::vector<double> steiner_polynomial(const Polytope& polytope, const AngleConfig& cfg) {
    return steiner_coefficients(polytope_intrinsic_volumes(polytope, cfg).value);
}

}  // namespace lkpolar
