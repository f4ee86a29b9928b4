#include "lkpolar/invariants.hpp"

#include <cmath>

#include "lkpolar/error.hpp"

namespace lkpolar {

Sequence face_contributions(const ConvexCone& cone, const AngleConfig& cfg) {
    const int n = cone.ambient_dim();
    Sequence c(n + 1);
    std::vector<double> var(static_cast<std::size_t>(n + 1), 0.0);
    FaceLattice lattice = faces(cone);
    // Two independent streams per face, numbered in lattice order.
    std::uint64_t stream = 0;
    for (const auto& [k, list] : lattice.faces_by_dim) {
        for (const auto& face : list) {
            AngleResult gamma = exterior_angle(face, cone, cfg.with_stream(cfg.stream * 1000003 + stream++));
            AngleResult theta = face_density(face, n, cfg.with_stream(cfg.stream * 1000003 + stream++));
            c.value[static_cast<std::size_t>(k)] += gamma.value * theta.value;
            var[static_cast<std::size_t>(k)] += std::pow(theta.value * gamma.std_error, 2) +
                                                std::pow(gamma.value * theta.std_error, 2);
        }
    }
    for (int k = 0; k <= n; ++k) c.std_error[static_cast<std::size_t>(k)] = std::sqrt(var[static_cast<std::size_t>(k)]);
    return c;
}

Uncertain angle_sum_residual(const ConvexCone& cone, const AngleConfig& cfg) {
    Sequence c = face_contributions(cone, cfg);
    double sum = 0.0, var = 0.0;
    for (int k = 0; k < c.size(); ++k) {
        sum += c.value[static_cast<std::size_t>(k)];
        var += std::pow(c.std_error[static_cast<std::size_t>(k)], 2);
    }
    return {std::abs(sum - 1.0), std::sqrt(var)};
}

Sequence sigma_from_contributions(const Sequence& c) {
    const int n = c.size() - 1;
    Sequence s(n + 1);
    double tail = 0.0, var = 0.0;
    for (int j = n; j >= 1; --j) {
        tail += c.value[static_cast<std::size_t>(j)];
        var += std::pow(c.std_error[static_cast<std::size_t>(j)], 2);
        s.value[static_cast<std::size_t>(j)] = tail;
        s.std_error[static_cast<std::size_t>(j)] = std::sqrt(var);
    }
    s.value[0] = 1.0;
    return s;
}

Sequence sigma_closed(const ConvexCone& cone, const AngleConfig& cfg) {
    return sigma_from_contributions(face_contributions(cone, cfg));
}

double lambda_weight(int i, int k) {
    if (i < 0 || k < i) throw Error(ErrorCode::DomainError, "lambda_weight: need 0 <= i <= k");
    return alpha(k) / (alpha(k - i) * alpha(i)) * binomial(k, i);
}

Sequence lambda_loc_from_contributions(const Sequence& c) {
    const int n = c.size() - 1;
    Sequence l(n + 1);
    for (int i = 1; i <= n; ++i) {
        double sum = 0.0, var = 0.0;
        for (int k = i; k <= n; ++k) {
            double a = lambda_weight(i, k);
            sum += a * c.value[static_cast<std::size_t>(k)];
            var += std::pow(a * c.std_error[static_cast<std::size_t>(k)], 2);
        }
        l.value[static_cast<std::size_t>(i)] = sum;
        l.std_error[static_cast<std::size_t>(i)] = std::sqrt(var);
    }
    l.value[0] = 1.0;
    return l;
}

Sequence lambda_loc_closed(const ConvexCone& cone, const AngleConfig& cfg) {
    return lambda_loc_from_contributions(face_contributions(cone, cfg));
}

TransferMatrix::TransferMatrix(int n) : n_(n), m_(Matrix::Zero(n, n)) {
    if (n < 1) throw Error(ErrorCode::DomainError, "transfer_matrix: need n >= 1");
    for (int i = 1; i <= n; ++i) {
        m_(i - 1, i - 1) = 1.0;
        for (int j = i + 1; j <= n; ++j) m_(i - 1, j - 1) = lambda_weight(i, j) - lambda_weight(i, j - 1);
    }
}

Sequence TransferMatrix::apply(const Sequence& sigma) const {
    if (sigma.size() != n_ + 1)
        throw Error(ErrorCode::DimensionMismatch, "TransferMatrix::apply: sequence length differs");
    Sequence out(n_ + 1);
    out.value[0] = sigma.value[0];
    out.std_error[0] = sigma.std_error[0];
    for (int i = 1; i <= n_; ++i) {
        double sum = 0.0, var = 0.0;
        for (int j = i; j <= n_; ++j) {
            sum += (*this)(i, j) * sigma.value[static_cast<std::size_t>(j)];
            var += std::pow((*this)(i, j) * sigma.std_error[static_cast<std::size_t>(j)], 2);
        }
        out.value[static_cast<std::size_t>(i)] = sum;
        out.std_error[static_cast<std::size_t>(i)] = std::sqrt(var);
    }
    return out;
}

TransferMatrix transfer_matrix(int n) { return TransferMatrix(n); }

InvariantProfile compute_profile(const ConvexCone& cone, const AngleConfig& cfg) {
    InvariantProfile p;
    p.n = cone.ambient_dim();
    p.contributions = face_contributions(cone, cfg);
    p.sigma = sigma_from_contributions(p.contributions);
    p.lambda_loc = lambda_loc_from_contributions(p.contributions);
    double sum = 0.0, var = 0.0;
    for (int k = 0; k <= p.n; ++k) {
        sum += p.contributions.value[static_cast<std::size_t>(k)];
        var += std::pow(p.contributions.std_error[static_cast<std::size_t>(k)], 2);
    }
    p.angle_sum_residual = {std::abs(sum - 1.0), std::sqrt(var)};
    return p;
}

double transfer_identity_deviation(const InvariantProfile& profile) {
    if (profile.n == 0) return 0.0;
    Sequence m_sigma = transfer_matrix(profile.n).apply(profile.sigma);
    double dev = 0.0;
    for (int i = 0; i <= profile.n; ++i)
        dev = std::max(dev, std::abs(profile.lambda_loc.value[static_cast<std::size_t>(i)] -
                                     m_sigma.value[static_cast<std::size_t>(i)]));
    return dev;
}

double verify_transfer_identity(const ConvexCone& cone, const AngleConfig& cfg) {
    return transfer_identity_deviation(compute_profile(cone, cfg));
}

std::vector<double> steiner_coefficients(const std::vector<double>& lambdas) {
    const int n = static_cast<int>(lambdas.size()) - 1;
    std::vector<double> c(lambdas.size(), 0.0);
    for (int i = 0; i <= n; ++i) c[static_cast<std::size_t>(n - i)] = lambdas[static_cast<std::size_t>(i)] * alpha(n - i);
    return c;
}

std::vector<double> ball_intrinsic_volumes(int k) {
    if (k < 0) throw Error(ErrorCode::DomainError, "ball_intrinsic_volumes: negative dimension");
    std::vector<double> out(static_cast<std::size_t>(k + 1));
    for (int j = 0; j <= k; ++j) out[static_cast<std::size_t>(j)] = alpha(k) / alpha(k - j) * binomial(k, j);
    return out;
}

}  // namespace lkpolar
