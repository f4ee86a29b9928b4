#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "lkpolar/error.hpp"
#include "lkpolar/polycone.hpp"

namespace lkpolar {

namespace {

std::vector<int> tight_set(const ConvexCone& cone, const std::vector<int>& ray_idx, double tol) {
    std::vector<int> out;
    const auto& normals = cone.facet_normals();
    for (int a = 0; a < static_cast<int>(normals.size()); ++a) {
        bool tight = true;
        for (int r : ray_idx) {
            if (std::abs(normals[static_cast<std::size_t>(a)].dot(cone.rays()[static_cast<std::size_t>(r)])) > tol) {
                tight = false;
                break;
            }
        }
        if (tight) out.push_back(a);
    }
    return out;
}

Face make_face(const ConvexCone& cone, std::vector<int> ray_idx, std::vector<int> tight) {
    Face f;
    std::vector<Vector> span_vecs;
    for (int k = 0; k < cone.lineality_dim(); ++k) span_vecs.push_back(cone.lineality().vector(k));
    for (int r : ray_idx) {
        f.generators.push_back(cone.rays()[static_cast<std::size_t>(r)]);
        span_vecs.push_back(cone.rays()[static_cast<std::size_t>(r)]);
    }
    for (int k = 0; k < cone.lineality_dim(); ++k) {
        f.generators.push_back(cone.lineality().vector(k));
        f.generators.push_back(-cone.lineality().vector(k));
    }
    f.span = span_vecs.empty() ? Basis(cone.ambient_dim()) : orthonormalize(span_vecs);
    f.dim = f.span.rank();
    f.ray_indices = std::move(ray_idx);
    f.tight_normals = std::move(tight);
    return f;
}

}  // namespace

const std::vector<Face>& FaceLattice::faces(int k) const {
    static const std::vector<Face> kEmpty;
    auto it = faces_by_dim.find(k);
    return it == faces_by_dim.end() ? kEmpty : it->second;
}

std::size_t FaceLattice::count(int k) const { return faces(k).size(); }

std::size_t FaceLattice::size() const {
    std::size_t total = 0;
    for (const auto& [k, list] : faces_by_dim) total += list.size();
    return total;
}

FaceLattice faces(const ConvexCone& cone, double tol) {
    FaceLattice lattice;
    lattice.ambient_dim = cone.ambient_dim();
    lattice.cone_dim = cone.dim();

    const int nrays = static_cast<int>(cone.rays().size());
    const int nfacets = static_cast<int>(cone.facet_normals().size());
    std::vector<int> all(static_cast<std::size_t>(nrays));
    for (int r = 0; r < nrays; ++r) all[static_cast<std::size_t>(r)] = r;

    std::map<std::vector<int>, bool> seen;
    std::deque<Face> queue;
    Face top = make_face(cone, all, tight_set(cone, all, tol));
    seen[top.tight_normals] = true;
    queue.push_back(std::move(top));

    while (!queue.empty()) {
        Face f = std::move(queue.front());
        queue.pop_front();
        for (int a = 0; a < nfacets; ++a) {
            if (std::binary_search(f.tight_normals.begin(), f.tight_normals.end(), a)) continue;
            std::vector<int> sub;
            for (int r : f.ray_indices)
                if (std::abs(cone.facet_normals()[static_cast<std::size_t>(a)].dot(cone.rays()[static_cast<std::size_t>(r)])) <= tol)
                    sub.push_back(r);
            std::vector<int> closure = tight_set(cone, sub, tol);
            if (seen.count(closure)) continue;
            seen[closure] = true;
            queue.push_back(make_face(cone, std::move(sub), std::move(closure)));
        }
        lattice.faces_by_dim[f.dim].push_back(std::move(f));
    }
    return lattice;
}

ConvexCone conormal_cone(const Face& face, const ConvexCone& cone, double tol) {
    const auto& normals = cone.facet_normals();
    for (int a : face.tight_normals)
        if (a < 0 || a >= static_cast<int>(normals.size()))
            throw Error(ErrorCode::FaceNotInLattice, "conormal_cone: normal index out of range");
    for (int r : face.ray_indices)
        if (r < 0 || r >= static_cast<int>(cone.rays().size()))
            throw Error(ErrorCode::FaceNotInLattice, "conormal_cone: ray index out of range");
    if (tight_set(cone, face.ray_indices, tol) != face.tight_normals)
        throw Error(ErrorCode::FaceNotInLattice, "conormal_cone: tight set is not closed for this cone");
    std::vector<Vector> gens;
    for (int a : face.tight_normals) gens.push_back(normals[static_cast<std::size_t>(a)]);
    return cone_from_generators(gens, cone.ambient_dim(), tol);
}

ConvexCone face_cone(const Face& face, int ambient_dim, double tol) {
    return cone_from_generators(face.generators, ambient_dim, tol);
}

}  // namespace lkpolar
