#include <cmath>
#include <limits>
#include <type_traits>

#include "lkpolar/error.hpp"
#include "lkpolar/numkit.hpp"

namespace lkpolar {

Vector project_onto(const ConvexSet& set, const Vector& x) {
    return std::visit(
        [&](const auto& s) -> Vector {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HalfSpace>) {
                double nn = s.normal.squaredNorm();
                double excess = s.normal.dot(x) - s.offset;
                if (excess <= 0 || nn == 0) return x;
                return x - (excess / nn) * s.normal;
            } else if constexpr (std::is_same_v<T, BallSet>) {
                Vector d = x - s.center;
                double norm = d.norm();
                if (norm <= s.radius) return x;
                return s.center + d * (s.radius / norm);
            } else {
                return s.point + s.directions.project(x - s.point);
            }
        },
        set);
}

namespace {
double set_scale(const ConvexSet& set) {
    return std::visit(
        [](const auto& s) -> double {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, HalfSpace>) {
                double nn = s.normal.norm();
                return nn > 0 ? std::abs(s.offset) / nn : 0.0;
            } else if constexpr (std::is_same_v<T, BallSet>) {
                return s.center.norm() + s.radius;
            } else {
                return s.point.norm();
            }
        },
        set);
}
}  // namespace

double dykstra_distance(const Vector& point, std::span<const ConvexSet> sets, double tol,
                        int max_iter) {
    if (sets.empty()) throw Error(ErrorCode::InvalidArgument, "dykstra_distance: no sets");
    const auto n = point.size();
    double scale = std::max(1.0, point.norm());
    for (const auto& s : sets) scale = std::max(scale, set_scale(s));
    const double certificate = 1e6 * scale;

    Vector x = point;
    std::vector<Vector> corrections(sets.size(), Vector::Zero(n));
    for (int iter = 0; iter < max_iter; ++iter) {
        double change = 0.0;
        for (std::size_t k = 0; k < sets.size(); ++k) {
            Vector y = x + corrections[k];
            Vector p = project_onto(sets[k], y);
            corrections[k] = y - p;
            change += (p - x).squaredNorm();
            x = std::move(p);
            if (corrections[k].norm() > certificate) return std::numeric_limits<double>::infinity();
        }
        if (std::sqrt(change) <= tol * scale) return (x - point).norm();
    }
    throw Error(ErrorCode::NoConvergence, "dykstra_distance: iteration cap reached");
}

}  // namespace lkpolar
