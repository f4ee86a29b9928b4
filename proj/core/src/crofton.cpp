#include "lkpolar/crofton.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lkpolar/error.hpp"
#include "lkpolar/parallel.hpp"

namespace lkpolar {

namespace {

// Stream families keep the oracles' random numbers disjoint for one seed.
constexpr std::uint64_t kCroftonStream = 0x1000;
constexpr std::uint64_t kTubeStream = 0x2000;
constexpr std::uint64_t kSteinerStream = 0x3000;
constexpr std::uint64_t kSigmaStream = 0x4000;

constexpr double kInf = std::numeric_limits<double>::infinity();

std::int64_t block_count(std::int64_t samples) { return (samples + kBlockSize - 1) / kBlockSize; }

std::int64_t block_length(std::int64_t samples, std::int64_t b) {
    return std::min(kBlockSize, samples - b * kBlockSize);
}

McEstimate reduce(const std::vector<MeanVar>& blocks, double scale, std::uint64_t seed) {
    MeanVar total;
    for (const auto& b : blocks) total.merge(b);
    return {scale * total.mean, std::abs(scale) * total.std_error(), total.count, seed};
}

int body_euler(const Body& body, const AffinePlane& plane, double R, double tol) {
    int chi = 0;
    for (const auto& sp : body.pieces) {
        auto m = sp.piece.slice_min_norm(plane, tol);
        if (!m) continue;
        if (std::isfinite(R) && *m >= 0.99 * R && *m <= R)
            throw Error(ErrorCode::TruncationSuspect,
                        "fiber meets the set only near the truncation radius; increase R");
        double limit = std::min(R, sp.piece.ball_radius());
        if (*m <= limit * (1.0 + tol)) chi += sp.sign;
    }
    return chi;
}

Body body_from_terms(const PolyUnion& u, double ball_radius) {
    Body body;
    body.ambient_dim = u.ambient_dim();
    for (auto& term : inclusion_exclusion_terms(u))
        body.pieces.push_back({term.sign, ConvexPiece::from_cone(term.cone, ball_radius)});
    body.center = Vector::Zero(body.ambient_dim);
    body.radius = std::isfinite(ball_radius) ? ball_radius : 1.0;
    return body;
}

int tube_weight(const Body& body, const Vector& x, double r) {
    int w = 0;
    for (const auto& sp : body.pieces)
        if (sp.piece.distance(x) <= r) w += sp.sign;
    return w;
}

}  // namespace

void McConfig::validate() const {
    if (samples < 1000) throw Error(ErrorCode::InvalidArgument, "McConfig: samples must be at least 1000");
    if (!(ball_radius_cap >= 10.0))
        throw Error(ErrorCode::InvalidArgument, "McConfig: ball_radius_cap must be at least 10");
    if (inner_directions < 1) throw Error(ErrorCode::InvalidArgument, "McConfig: inner_directions must be positive");
    for (double r : tube_radii)
        if (!(r > 0.0) || !std::isfinite(r)) throw Error(ErrorCode::InvalidArgument, "McConfig: tube radii must be positive");
}

std::vector<double> default_tube_radii([[maybe_unused]] int n) {
    std::vector<double> radii;
    for (int k = 1; k <= 30; ++k) radii.push_back(0.05 * k);
    return radii;
}

Body union_in_unit_ball(const PolyUnion& u) { return body_from_terms(u, 1.0); }

Body union_germ(const PolyUnion& u) { return body_from_terms(u, kInf); }

Body polytope_body(const Polytope& p) {
    Body body;
    body.ambient_dim = p.ambient_dim();
    body.pieces.push_back({1, ConvexPiece::from_polytope(p)});
    Vector center = Vector::Zero(body.ambient_dim);
    for (const auto& v : p.vertices) center += v;
    center /= static_cast<double>(p.vertices.size());
    double radius = 0.0;
    for (const auto& v : p.vertices) radius = std::max(radius, (v - center).norm());
    body.center = center;
    body.radius = std::max(radius, 1e-12);
    return body;
}

int fiber_euler(const Body& germ, const AffinePlane& plane, double R) {
    if (plane.directions.rank() > germ.ambient_dim)
        throw Error(ErrorCode::DimensionMismatch, "fiber_euler: plane dimension exceeds ambient dimension");
    return body_euler(germ, plane, R, 1e-10);
}

int fiber_euler(const PolyUnion& u, const AffinePlane& plane, double R) {
    return fiber_euler(union_germ(u), plane, R);
}

McEstimate crofton_lambda_mc(const Body& body, int i, const McConfig& cfg) {
    cfg.validate();
    const int n = body.ambient_dim;
    if (i < 0 || i > n) throw Error(ErrorCode::DomainError, "crofton_lambda_mc: need 0 <= i <= n");
    const double rho = body.radius;
    const double scale = alpha(i) * std::pow(rho, i) / beta(n, i);
    const std::int64_t nblocks = block_count(cfg.samples);
    std::vector<MeanVar> acc(static_cast<std::size_t>(nblocks));
    const RngStream root(cfg.seed, kCroftonStream + static_cast<std::uint64_t>(i));

    for_each_block(nblocks, [&](std::int64_t b) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(b));
        MeanVar& m = acc[static_cast<std::size_t>(b)];
        for (std::int64_t s = 0; s < block_length(cfg.samples, b); ++s) {
            Matrix frame = random_orthogonal(rng, n);
            Vector y = rho * rng.ball_point(i);
            Vector point = body.center + frame.leftCols(i) * y;
            AffinePlane plane = AffinePlane::make(point, Basis(Matrix(frame.rightCols(n - i))));
            m.add(body_euler(body, plane, kInf, cfg.feasibility_tol));
        }
    });
    return reduce(acc, scale, cfg.seed);
}

McEstimate crofton_lambda_mc(const PolyUnion& u, int i, const McConfig& cfg) {
    return crofton_lambda_mc(union_in_unit_ball(u), i, cfg);
}

McEstimate crofton_lambda_mc(const Polytope& p, int i, const McConfig& cfg) {
    return crofton_lambda_mc(polytope_body(p), i, cfg);
}

McEstimate tube_volume_mc(const Body& body, double r, const McConfig& cfg) {
    cfg.validate();
    if (!(r > 0.0)) throw Error(ErrorCode::DomainError, "tube_volume_mc: radius must be positive");
    const int n = body.ambient_dim;
    const double rho = body.radius + r;
    const double domain_volume = alpha(n) * std::pow(rho, n);
    const std::int64_t nblocks = block_count(cfg.samples);
    std::vector<MeanVar> acc(static_cast<std::size_t>(nblocks));
    const RngStream root(cfg.seed, kTubeStream);

    for_each_block(nblocks, [&](std::int64_t b) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(b));
        MeanVar& m = acc[static_cast<std::size_t>(b)];
        for (std::int64_t s = 0; s < block_length(cfg.samples, b); ++s) {
            Vector x = body.center + rho * rng.ball_point(n);
            m.add(tube_weight(body, x, r));
        }
    });
    return reduce(acc, domain_volume, cfg.seed);
}

McEstimate tube_volume_mc(const PolyUnion& u, double r, const McConfig& cfg) {
    return tube_volume_mc(union_in_unit_ball(u), r, cfg);
}

McEstimate tube_volume_mc(const Polytope& p, double r, const McConfig& cfg) {
    return tube_volume_mc(polytope_body(p), r, cfg);
}

std::vector<McEstimate> steiner_fit_mc(const Body& body, const McConfig& cfg) {
    cfg.validate();
    const int n = body.ambient_dim;
    std::vector<double> radii = cfg.tube_radii.empty() ? default_tube_radii(n) : cfg.tube_radii;
    std::sort(radii.begin(), radii.end());
    if (std::adjacent_find(radii.begin(), radii.end()) != radii.end())
        throw Error(ErrorCode::InvalidArgument, "steiner_fit_mc: tube radii must be distinct");
    steiner_fit_operator(radii, n);  // conditioning check on the plain design
    const auto nr = static_cast<Eigen::Index>(radii.size());
    const double rho = body.radius + radii.back();
    const double domain_volume = alpha(n) * std::pow(rho, n);

    // Weight of a point at every radius, inclusion-exclusion over the pieces.
    auto weights = [&](const Vector& x, Vector& w) {
        w.setZero();
        for (const auto& sp : body.pieces) {
            double d = sp.piece.distance(x);
            auto k = std::lower_bound(radii.begin(), radii.end(), d) - radii.begin();
            w.tail(nr - k).array() += sp.sign;
        }
    };

    // Pilot run on its own stream: covariance of the volume estimates across
    // radii, used to weight the fit. Keeping it separate leaves the main
    // estimate unbiased.
    const std::int64_t pilot = std::max<std::int64_t>(16384, cfg.samples / 16);
    const std::int64_t pilot_blocks = block_count(pilot);
    std::vector<Vector> sum(static_cast<std::size_t>(pilot_blocks), Vector::Zero(nr));
    std::vector<Matrix> outer(static_cast<std::size_t>(pilot_blocks), Matrix::Zero(nr, nr));
    const RngStream pilot_root(cfg.seed, kSteinerStream + 1);
    for_each_block(pilot_blocks, [&](std::int64_t b) {
        RngStream rng = pilot_root.substream(static_cast<std::uint64_t>(b));
        Vector w(nr);
        for (std::int64_t s = 0; s < block_length(pilot, b); ++s) {
            weights(body.center + rho * rng.ball_point(n), w);
            sum[static_cast<std::size_t>(b)] += w;
            outer[static_cast<std::size_t>(b)].selfadjointView<Eigen::Lower>().rankUpdate(w);
        }
    });
    Vector mean = Vector::Zero(nr);
    Matrix cov = Matrix::Zero(nr, nr);
    for (std::int64_t b = 0; b < pilot_blocks; ++b) {
        mean += sum[static_cast<std::size_t>(b)];
        cov += outer[static_cast<std::size_t>(b)];
    }
    const auto np = static_cast<double>(pilot);
    mean /= np;
    cov = cov.selfadjointView<Eigen::Lower>();
    cov = (cov - np * mean * mean.transpose()) / (np - 1.0);
    const Matrix fit = steiner_fit_operator(radii, n, cov);

    const std::int64_t nblocks = block_count(cfg.samples);
    std::vector<std::vector<MeanVar>> acc(static_cast<std::size_t>(nblocks),
                                          std::vector<MeanVar>(static_cast<std::size_t>(n + 1)));
    const RngStream root(cfg.seed, kSteinerStream);
    for_each_block(nblocks, [&](std::int64_t b) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(b));
        auto& m = acc[static_cast<std::size_t>(b)];
        Vector w(nr), contrib(n + 1);
        for (std::int64_t s = 0; s < block_length(cfg.samples, b); ++s) {
            weights(body.center + rho * rng.ball_point(n), w);
            contrib.noalias() = fit * w;
            for (int i = 0; i <= n; ++i) m[static_cast<std::size_t>(i)].add(contrib[i]);
        }
    });

    std::vector<McEstimate> out;
    for (int i = 0; i <= n; ++i) {
        std::vector<MeanVar> column;
        for (const auto& blk : acc) column.push_back(blk[static_cast<std::size_t>(i)]);
        out.push_back(reduce(column, domain_volume, cfg.seed));
    }
    return out;
}

std::vector<McEstimate> steiner_fit_mc(const PolyUnion& u, const McConfig& cfg) {
    return steiner_fit_mc(union_in_unit_ball(u), cfg);
}

std::vector<McEstimate> steiner_fit_mc(const Polytope& p, const McConfig& cfg) {
    return steiner_fit_mc(polytope_body(p), cfg);
}

McEstimate sigma_mc(const PolyUnion& u, int j, const McConfig& cfg) {
    cfg.validate();
    const int n = u.ambient_dim();
    if (j < 1 || j > n) throw Error(ErrorCode::DomainError, "sigma_mc: need 1 <= j <= n");
    // Cones are scale invariant, so fibers are tested against the untruncated
    // germ; a finite R would only add a bias of order 1/R.
    const Body germ = union_germ(u);
    const int inner = cfg.inner_directions;
    const std::int64_t planes = (cfg.samples + inner - 1) / inner;
    const std::int64_t per_block = std::max<std::int64_t>(1, kBlockSize / inner);
    const std::int64_t nblocks = (planes + per_block - 1) / per_block;
    std::vector<MeanVar> acc(static_cast<std::size_t>(nblocks));
    const RngStream root(cfg.seed, kSigmaStream + static_cast<std::uint64_t>(j));

    for_each_block(nblocks, [&](std::int64_t b) {
        RngStream rng = root.substream(static_cast<std::uint64_t>(b));
        MeanVar& m = acc[static_cast<std::size_t>(b)];
        const std::int64_t count = std::min(per_block, planes - b * per_block);
        for (std::int64_t s = 0; s < count; ++s) {
            Matrix frame = random_orthogonal(rng, n);
            Basis fiber_dirs(Matrix(frame.rightCols(n - j)));
            double mean = 0.0;
            for (int k = 0; k < inner; ++k) {
                Vector u_dir = frame.leftCols(j) * rng.unit_vector(j);
                mean += body_euler(germ, AffinePlane{u_dir, fiber_dirs}, kInf, cfg.feasibility_tol);
            }
            m.add(mean / inner);
        }
    });
    McEstimate est = reduce(acc, 1.0, cfg.seed);
    est.samples *= inner;
    return est;
}

Sequence sigma_mc_all(const PolyUnion& u, const McConfig& cfg) {
    const int n = u.ambient_dim();
    Sequence out(n + 1);
    out.value[0] = 1.0;
    for (int j = 1; j <= n; ++j) {
        McEstimate e = sigma_mc(u, j, cfg);
        out.value[static_cast<std::size_t>(j)] = e.value;
        out.std_error[static_cast<std::size_t>(j)] = e.std_error;
    }
    return out;
}

Sequence lambda_loc_union_closed(const PolyUnion& u, const AngleConfig& angles) {
    const int n = u.ambient_dim();
    Sequence out(n + 1);
    std::vector<double> var(static_cast<std::size_t>(n + 1), 0.0);
    for (const auto& term : inclusion_exclusion_terms(u)) {
        Sequence l = lambda_loc_closed(term.cone, angles.with_stream(angles.stream * 64 + term.mask));
        for (int i = 0; i <= n; ++i) {
            out.value[static_cast<std::size_t>(i)] += term.sign * l.value[static_cast<std::size_t>(i)];
            var[static_cast<std::size_t>(i)] += std::pow(l.std_error[static_cast<std::size_t>(i)], 2);
        }
    }
    for (int i = 0; i <= n; ++i) out.std_error[static_cast<std::size_t>(i)] = std::sqrt(var[static_cast<std::size_t>(i)]);
    return out;
}

UnionLambda lambda_loc_union(const PolyUnion& u, const McConfig& cfg, const AngleConfig& angles, bool with_mc) {
    UnionLambda result;
    result.closed = lambda_loc_union_closed(u, angles);
    if (with_mc) {
        result.mc = steiner_fit_mc(u, cfg);
        for (int i = 0; i < static_cast<int>(result.mc.size()); ++i) {
            double a = alpha(i);
            result.mc[static_cast<std::size_t>(i)].value /= a;
            result.mc[static_cast<std::size_t>(i)].std_error /= a;
        }
    }
    return result;
}

}  // namespace lkpolar
