#include "lkpolar/angle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "lkpolar/error.hpp"
#include "lkpolar/parallel.hpp"

namespace lkpolar {

const char* to_string(AngleMethod m) noexcept {
    switch (m) {
    case AngleMethod::exact1d: return "exact1d";
    case AngleMethod::exact2d: return "exact2d";
    case AngleMethod::exact3d: return "exact3d";
    case AngleMethod::montecarlo: return "montecarlo";
    }
    return "unknown";
}

Basis grassmann_sample(RngStream& rng, int i, int n) {
    if (i < 0 || i > n) throw Error(ErrorCode::DomainError, "grassmann_sample: need 0 <= i <= n");
    if (i == 0) return Basis(n);
    for (;;) {
        Matrix g(n, i);
        for (int c = 0; c < i; ++c) g.col(c) = rng.gaussian(n);
        Basis b = orthonormalize(g, 1e-12);
        if (b.rank() == i) return b;
    }
}

Matrix random_orthogonal(RngStream& rng, int n) { return grassmann_sample(rng, n, n).matrix(); }

namespace {

struct PointedPart {
    std::vector<Vector> rays;     // frame coordinates, unit
    std::vector<Vector> normals;  // frame coordinates, unit
    int dim = 0;
};

PointedPart pointed_part(const ConvexCone& cone) {
    PointedPart p;
    Basis frame = orthonormalize(cone.rays());
    p.dim = frame.rank();
    for (const auto& r : cone.rays()) p.rays.push_back(frame.coords(r).normalized());
    for (const auto& a : cone.facet_normals()) {
        Vector c = frame.coords(a);
        double norm = c.norm();
        if (norm > 1e-12) p.normals.push_back(c / norm);
    }
    return p;
}

AngleResult montecarlo(const PointedPart& part, const AngleConfig& cfg) {
    if (cfg.samples <= 0) throw Error(ErrorCode::InvalidArgument, "solid_angle: samples must be positive");
    const std::int64_t nblocks = (cfg.samples + kBlockSize - 1) / kBlockSize;
    std::vector<std::int64_t> hits(static_cast<std::size_t>(nblocks), 0);
    const RngStream root(cfg.seed, cfg.stream);
    Matrix normals(static_cast<Eigen::Index>(part.normals.size()), part.dim);
    for (std::size_t k = 0; k < part.normals.size(); ++k)
        normals.row(static_cast<Eigen::Index>(k)) = part.normals[k].transpose();

    for_each_block(nblocks, [&](std::int64_t b) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(b));
        const std::int64_t begin = b * kBlockSize;
        const std::int64_t end = std::min(cfg.samples, begin + kBlockSize);
        std::int64_t count = 0;
        Vector z(part.dim);
        for (std::int64_t s = begin; s < end; ++s) {
            for (int k = 0; k < part.dim; ++k) z[k] = rng.normal();
            if (normals.rows() == 0 || (normals * z).maxCoeff() <= 0.0) ++count;
        }
        hits[static_cast<std::size_t>(b)] = count;
    });

    std::int64_t total = 0;
    for (auto h : hits) total += h;
    const double n = static_cast<double>(cfg.samples);
    const double p = static_cast<double>(total) / n;
    return {p, std::sqrt(p * (1.0 - p) / n), AngleMethod::montecarlo, cfg.samples};
}

double planar_fraction(const Vector& a, const Vector& b) {
    double cross = a[0] * b[1] - a[1] * b[0];
    return std::atan2(std::abs(cross), a.dot(b)) / (2.0 * std::numbers::pi);
}

double spherical_polygon_fraction(const PointedPart& part) {
    // Interior axis: every extreme ray has a positive inner product with
    // minus the sum of the facet normals.
    Vector axis = Vector::Zero(3);
    for (const auto& a : part.normals) axis -= a;
    axis.normalize();
    Vector u = (std::abs(axis[0]) < 0.9 ? Vector::Unit(3, 0) : Vector::Unit(3, 1));
    u = (u - u.dot(axis) * axis).normalized();
    Eigen::Vector3d ax3 = axis, u3 = u;
    Eigen::Vector3d v3 = ax3.cross(u3);

    std::vector<std::pair<double, Eigen::Vector3d>> order;
    for (const auto& r : part.rays) {
        Eigen::Vector3d r3 = r;
        order.emplace_back(std::atan2(r3.dot(v3), r3.dot(u3)), r3);
    }
    std::sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.first < y.first; });

    double omega = 0.0;
    const Eigen::Vector3d& a = order.front().second;
    for (std::size_t k = 1; k + 1 < order.size(); ++k) {
        const Eigen::Vector3d& b = order[k].second;
        const Eigen::Vector3d& c = order[k + 1].second;
        // Spherical excess of the triangle (Van Oosterom-Strackee form).
        double num = std::abs(a.dot(b.cross(c)));
        double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
        omega += 2.0 * std::atan2(num, den);
    }
    return omega / (4.0 * std::numbers::pi);
}

}  // namespace

AngleResult solid_angle(const ConvexCone& cone, const AngleConfig& cfg) {
    // A cone with lineality L is L x (pointed part); the density of a product
    // is the product of densities and L has density 1.
    if (cone.dim() == 0 || cone.rays().empty()) return {1.0, 0.0, AngleMethod::exact1d, 0};
    PointedPart part = pointed_part(cone);
    if (cfg.force_mc || part.dim >= 4) return montecarlo(part, cfg);
    switch (part.dim) {
    case 1: return {0.5, 0.0, AngleMethod::exact1d, 0};
    case 2:
        if (part.rays.size() == 2) return {planar_fraction(part.rays[0], part.rays[1]), 0.0, AngleMethod::exact2d, 0};
        break;
    case 3:
        if (part.rays.size() >= 3) return {spherical_polygon_fraction(part), 0.0, AngleMethod::exact3d, 0};
        break;
    default: break;
    }
    return montecarlo(part, cfg);
}

AngleResult face_density(const Face& face, int ambient_dim, const AngleConfig& cfg) {
    return solid_angle(face_cone(face, ambient_dim), cfg);
}

AngleResult exterior_angle(const Face& face, const ConvexCone& cone, const AngleConfig& cfg) {
    if (face.is_top()) {
        if (face.dim != cone.dim())
            throw Error(ErrorCode::FaceNotInLattice, "exterior_angle: empty tight set on a proper face");
        return {1.0, 0.0, AngleMethod::exact1d, 0};
    }
    return solid_angle(conormal_cone(face, cone), cfg);
}

}  // namespace lkpolar
