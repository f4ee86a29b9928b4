#include "lkpolar/numkit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "lkpolar/error.hpp"

namespace lkpolar {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::IllConditioned: return "IllConditioned";
    case ErrorCode::ZeroGenerator: return "ZeroGenerator";
    case ErrorCode::FaceNotInLattice: return "FaceNotInLattice";
    case ErrorCode::EmptyCone: return "EmptyCone";
    case ErrorCode::DegenerateFace: return "DegenerateFace";
    case ErrorCode::TruncationSuspect: return "TruncationSuspect";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

//---------------------------------------------------------------------------//
// Frames
//---------------------------------------------------------------------------//

Basis orthonormalize(std::span<const Vector> vectors, double tol) {
    if (vectors.empty()) return Basis(0);
    const auto n = vectors.front().size();
    Matrix m(n, static_cast<Eigen::Index>(vectors.size()));
    for (std::size_t k = 0; k < vectors.size(); ++k) {
        if (vectors[k].size() != n)
            throw Error(ErrorCode::DimensionMismatch, "orthonormalize: vectors differ in length");
        m.col(static_cast<Eigen::Index>(k)) = vectors[k];
    }
    return orthonormalize(m, tol);
}

Basis orthonormalize(const Matrix& columns, double tol) {
    if (!(tol > 0)) throw Error(ErrorCode::DomainError, "orthonormalize: tol must be positive");
    const auto n = columns.rows();
    double scale = 0.0;
    for (Eigen::Index k = 0; k < columns.cols(); ++k) scale = std::max(scale, columns.col(k).norm());
    Matrix out(n, std::min<Eigen::Index>(n, columns.cols()));
    Eigen::Index rank = 0;
    if (scale == 0.0) return Basis(Matrix(n, 0));
    for (Eigen::Index k = 0; k < columns.cols() && rank < n; ++k) {
        Vector v = columns.col(k);
        for (int pass = 0; pass < 2; ++pass) {
            for (Eigen::Index j = 0; j < rank; ++j) v -= out.col(j).dot(v) * out.col(j);
        }
        double norm = v.norm();
        if (norm >= tol * scale) out.col(rank++) = v / norm;
    }
    return Basis(Matrix(out.leftCols(rank)));
}

Basis Basis::complement(double tol) const {
    const int n = ambient_dim();
    Matrix cols(n, rank() + n);
    cols.leftCols(rank()) = vectors_;
    cols.rightCols(n) = Matrix::Identity(n, n);
    Basis full = orthonormalize(cols, tol);
    return Basis(Matrix(full.matrix().rightCols(full.rank() - rank())));
}

Basis null_space(const Matrix& rows, int ambient_dim, double tol) {
    if (rows.rows() == 0) return Basis(Matrix(Matrix::Identity(ambient_dim, ambient_dim)));
    if (rows.cols() != ambient_dim)
        throw Error(ErrorCode::DimensionMismatch, "null_space: row length differs from dimension");
    Basis row_space = orthonormalize(Matrix(rows.transpose()), tol);
    return row_space.complement(tol);
}

//---------------------------------------------------------------------------//
// Special functions
//---------------------------------------------------------------------------//

double gamma_fn(double x) {
    static constexpr std::array<double, 9> kCoef = {
        0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
        771.32342877765313,   -176.61502916214059,   12.507343278686905,
        -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
    constexpr double kG = 7.0;
    if (x > 0.0 && x <= 64.0 && std::floor(2.0 * x) == 2.0 * x) {
        // Half-integers: recurrence from Gamma(1) or Gamma(1/2), accurate to a few ulps.
        double g = std::floor(x) == x ? 1.0 : std::sqrt(std::numbers::pi);
        for (double t = std::floor(x) == x ? 1.0 : 0.5; t < x; t += 1.0) g *= t;
        return g;
    }
    if (x < 0.5) {
        // Reflection formula.
        return std::numbers::pi / (std::sin(std::numbers::pi * x) * gamma_fn(1.0 - x));
    }
    x -= 1.0;
    double a = kCoef[0];
    const double t = x + kG + 0.5;
    for (int i = 1; i < 9; ++i) a += kCoef[i] / (x + i);
    return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, x + 0.5) * std::exp(-t) * a;
}

double alpha(int i) {
    if (i < 0) throw Error(ErrorCode::DomainError, "alpha: negative index");
    if (i == 0) return 1.0;
    return std::pow(std::numbers::pi, 0.5 * i) / gamma_fn(0.5 * i + 1.0);
}

double beta(int n, int i) {
    if (i < 0 || i > n) throw Error(ErrorCode::DomainError, "beta: need 0 <= i <= n");
    return gamma_fn(0.5 * (n - i + 1)) * gamma_fn(0.5 * (i + 1)) /
           (gamma_fn(0.5 * (n + 1)) * gamma_fn(0.5));
}

double binomial(int n, int k) {
    if (k < 0 || k > n) return 0.0;
    double r = 1.0;
    for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
    return std::round(r);
}

//---------------------------------------------------------------------------//
// Random streams
//---------------------------------------------------------------------------//

namespace {
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}
}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_index)
    : seed_(seed), stream_(stream_index) {
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(seed)),
                      static_cast<std::uint32_t>(splitmix64(seed) >> 32),
                      static_cast<std::uint32_t>(splitmix64(stream_index ^ 0xA5A5A5A5ULL)),
                      static_cast<std::uint32_t>(splitmix64(stream_index ^ 0xA5A5A5A5ULL) >> 32)};
    engine_.seed(seq);
}

RngStream RngStream::substream(std::uint64_t index) const {
    return RngStream(seed_, splitmix64(stream_ * 0x100000001B3ULL + index + 1));
}

double RngStream::uniform() {
    // 53 random bits; std::uniform_real_distribution is not portable across
    // standard libraries.
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double RngStream::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double RngStream::normal() { return normal_(engine_); }

Vector RngStream::gaussian(int n) {
    Vector v(n);
    for (int k = 0; k < n; ++k) v[k] = normal();
    return v;
}

Vector RngStream::unit_vector(int n) {
    for (;;) {
        Vector v = gaussian(n);
        double norm = v.norm();
        if (norm > 1e-300) return v / norm;
    }
}

Vector RngStream::ball_point(int n) {
    if (n == 0) return Vector(0);
    Vector u = unit_vector(n);
    return u * std::pow(uniform(), 1.0 / n);
}

//---------------------------------------------------------------------------//
// Steiner fit
//---------------------------------------------------------------------------//

namespace {

Matrix steiner_design(std::span<const double> radii, int n) {
    if (n < 0) throw Error(ErrorCode::DomainError, "fit_steiner: negative dimension");
    std::vector<double> sorted(radii.begin(), radii.end());
    std::sort(sorted.begin(), sorted.end());
    if (std::unique(sorted.begin(), sorted.end()) - sorted.begin() < n + 1)
        throw Error(ErrorCode::InvalidArgument, "fit_steiner: need at least n+1 distinct radii");
    for (double r : radii)
        if (!(r > 0)) throw Error(ErrorCode::DomainError, "fit_steiner: radii must be positive");

    const auto m = static_cast<Eigen::Index>(radii.size());
    Matrix design(m, n + 1);
    for (Eigen::Index k = 0; k < m; ++k)
        for (int i = 0; i <= n; ++i)
            design(k, i) = alpha(n - i) * std::pow(radii[static_cast<std::size_t>(k)], n - i);
    return design;
}

// Pseudo-inverse of the column-scaled design.
Matrix scaled_pinv(const Matrix& design, double condition_bound) {
    Vector scale = design.colwise().norm().transpose();
    Matrix scaled = design * scale.cwiseInverse().asDiagonal();
    Eigen::JacobiSVD<Matrix> svd(scaled, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    double cond = s(s.size() - 1) > 0 ? s(0) / s(s.size() - 1)
                                      : std::numeric_limits<double>::infinity();
    if (cond > condition_bound)
        throw Error(ErrorCode::IllConditioned,
                    "fit_steiner: condition estimate " + std::to_string(cond) + " exceeds bound");
    Matrix pinv = svd.matrixV() * s.cwiseInverse().asDiagonal() * svd.matrixU().transpose();
    return scale.cwiseInverse().asDiagonal() * pinv;
}

}  // namespace

Matrix steiner_fit_operator(std::span<const double> radii, int n, double condition_bound) {
    return scaled_pinv(steiner_design(radii, n), condition_bound);
}

Matrix steiner_fit_operator(std::span<const double> radii, int n, const Matrix& covariance,
                            double condition_bound) {
    Matrix design = steiner_design(radii, n);
    if (covariance.rows() != design.rows() || covariance.cols() != design.rows())
        throw Error(ErrorCode::DimensionMismatch, "fit_steiner: covariance size differs from radii");
    // Ridge keeps the whitening defined when adjacent radii are nearly collinear.
    const auto m = design.rows();
    Matrix cov = covariance + (1e-9 * covariance.trace() / static_cast<double>(m) + 1e-300) * Matrix::Identity(m, m);
    Eigen::LLT<Matrix> llt(cov);
    if (llt.info() != Eigen::Success)
        throw Error(ErrorCode::IllConditioned, "fit_steiner: covariance is not positive definite");
    Matrix whitened = llt.matrixL().solve(design);
    Matrix op = scaled_pinv(whitened, condition_bound);
    return llt.matrixL().transpose().solve(op.transpose()).transpose();
}

std::vector<double> fit_steiner(std::span<const double> radii, std::span<const double> volumes,
                                int n, double condition_bound) {
    if (radii.size() != volumes.size())
        throw Error(ErrorCode::DimensionMismatch, "fit_steiner: radii and volumes differ in length");
    Matrix op = steiner_fit_operator(radii, n, condition_bound);
    Vector v = Eigen::Map<const Vector>(volumes.data(), static_cast<Eigen::Index>(volumes.size()));
    Vector lam = op * v;
    return {lam.data(), lam.data() + lam.size()};
}

}  // namespace lkpolar
