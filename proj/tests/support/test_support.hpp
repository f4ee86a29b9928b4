#pragma once

#include <cmath>
#include <initializer_list>
#include <vector>

#include "lkpolar/lkpolar.hpp"

namespace lkpolar::testing {

inline Vector vec(std::initializer_list<double> xs) {
    Vector v(static_cast<Eigen::Index>(xs.size()));
    Eigen::Index k = 0;
    for (double x : xs) v[k++] = x;
    return v;
}

inline ConvexCone cone_of(std::initializer_list<std::initializer_list<double>> gens) {
    std::vector<Vector> g;
    for (auto xs : gens) g.push_back(vec(xs));
    return cone_from_generators(g, static_cast<int>(g.front().size()));
}

inline ConvexCone quadrant() { return cone_of({{1, 0}, {0, 1}}); }
inline ConvexCone half_plane() { return cone_of({{1, 0}, {-1, 0}, {0, 1}}); }
inline ConvexCone octant() { return cone_of({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}); }
inline ConvexCone wedge45() { return cone_of({{1, 0}, {1, 1}}); }

/// Full-dimensional pointed cone with Gaussian generators folded into the
/// half-space of a random axis. Redundant generators are allowed.
inline ConvexCone random_pointed_cone(RngStream& rng, int n, int generators) {
    for (;;) {
        Vector axis = rng.unit_vector(n);
        std::vector<Vector> g;
        for (int k = 0; k < generators; ++k) {
            Vector x = rng.gaussian(n);
            double t = x.dot(axis);
            g.push_back(t >= 0 ? x : Vector(x - 2.0 * t * axis));
        }
        ConvexCone c = cone_from_generators(g, n);
        // Avoid nearly flat cones, whose angles are numerically fragile.
        if (c.is_full_dim() && c.is_pointed()) {
            bool ok = true;
            for (const auto& a : c.facet_normals())
                for (const auto& b : c.facet_normals())
                    if (&a != &b && a.dot(b) < -0.999) ok = false;
            if (ok) return c;
        }
    }
}

/// Order-independent comparison helper: |a - b| / sqrt(sa^2 + sb^2).
inline double zscore(double a, double sa, double b, double sb) {
    double s = std::hypot(sa, sb);
    return s > 0 ? std::abs(a - b) / s : (a == b ? 0.0 : INFINITY);
}

}  // namespace lkpolar::testing
