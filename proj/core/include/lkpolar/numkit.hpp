#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace lkpolar {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Relative tolerance used for every rank decision in the library.
inline constexpr double kRankTol = 1e-9;

//---------------------------------------------------------------------------//
// Orthonormal frames
//---------------------------------------------------------------------------//

/// Orthonormal frame of a linear subspace, stored as the columns of an
/// ambient_dim x rank matrix.
class Basis {
public:
    Basis() = default;
    explicit Basis(int ambient_dim) : vectors_(ambient_dim, 0) {}
    /// Columns must already be orthonormal; use orthonormalize() otherwise.
    explicit Basis(Matrix columns) : vectors_(std::move(columns)) {}

    int ambient_dim() const { return static_cast<int>(vectors_.rows()); }
    int rank() const { return static_cast<int>(vectors_.cols()); }
    bool empty() const { return vectors_.cols() == 0; }

    const Matrix& matrix() const { return vectors_; }
    Vector vector(int k) const { return vectors_.col(k); }

    /// Coordinates of x in this frame.
    Vector coords(const Vector& x) const { return vectors_.transpose() * x; }
    /// Point of the subspace with the given frame coordinates.
    Vector embed(const Vector& c) const { return vectors_ * c; }
    /// Orthogonal projection of x onto the subspace.
    Vector project(const Vector& x) const { return vectors_ * (vectors_.transpose() * x); }

    /// Orthonormal frame of the orthogonal complement.
    Basis complement(double tol = kRankTol) const;

private:
    Matrix vectors_;
};

/// Modified Gram-Schmidt with one re-orthogonalization pass. A vector is kept
/// when its residual norm is at least tol times the largest input norm.
Basis orthonormalize(std::span<const Vector> vectors, double tol = kRankTol);
Basis orthonormalize(const Matrix& columns, double tol = kRankTol);

/// Orthonormal basis of {x : rows * x = 0}.
Basis null_space(const Matrix& rows, int ambient_dim, double tol = kRankTol);

//---------------------------------------------------------------------------//
// Special functions
//---------------------------------------------------------------------------//

/// Lanczos approximation (g = 7, nine coefficients).
double gamma_fn(double x);

/// Volume of the unit i-ball: pi^{i/2} / Gamma(i/2 + 1). alpha(0) == 1.
double alpha(int i);

/// Crofton normalization Gamma((n-i+1)/2) Gamma((i+1)/2) / (Gamma((n+1)/2) Gamma(1/2)).
double beta(int n, int i);

/// Binomial coefficient C(n, k) as a double; zero outside 0 <= k <= n.
double binomial(int n, int k);

//---------------------------------------------------------------------------//
// Deterministic random streams
//---------------------------------------------------------------------------//

/// A reproducible random stream identified by (seed, stream_index). Streams
/// with distinct indices are statistically independent; substream() derives
/// further independent indexed children so Monte-Carlo work can be split into
/// fixed blocks regardless of how many workers execute them.
class RngStream {
public:
    RngStream(std::uint64_t seed, std::uint64_t stream_index);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream_index() const { return stream_; }

    RngStream substream(std::uint64_t index) const;

    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);   // [lo, hi)
    double normal();
    Vector gaussian(int n);
    Vector unit_vector(int n);
    /// Uniform point of the closed unit n-ball.
    Vector ball_point(int n);

private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

//---------------------------------------------------------------------------//
// Convex solvers
//---------------------------------------------------------------------------//

struct NnlsResult {
    Vector coefficients;
    double residual = 0.0;
};

/// Lawson-Hanson active-set non-negative least squares:
/// minimize |columns * lambda - target| subject to lambda >= 0.
/// Throws Error(NoConvergence) when max_iter is reached first.
NnlsResult nnls(const Matrix& columns, const Vector& target, double tol = 1e-12,
                int max_iter = 0);
NnlsResult nnls(std::span<const Vector> columns, const Vector& target, double tol = 1e-12,
                int max_iter = 0);

/// Least-distance program: the minimum-norm z with G z <= h, solved through
/// its NNLS dual. Returns false (and leaves z untouched) when infeasible.
bool least_distance(const Matrix& G, const Vector& h, Vector& z, double tol = 1e-10);

struct HalfSpace {
    Vector normal;  // {x : <normal, x> <= offset}
    double offset = 0.0;
};

struct BallSet {
    Vector center;
    double radius = 1.0;
};

struct AffineSubspace {
    Vector point;
    Basis directions;
};

using ConvexSet = std::variant<HalfSpace, BallSet, AffineSubspace>;

Vector project_onto(const ConvexSet& set, const Vector& x);

inline constexpr int kDykstraMaxIter = 10000;

/// Distance from point to the intersection of the sets via Dykstra's
/// alternating projections. Returns +infinity when the correction vectors
/// grow past 1e6 times the input scale (the intersection is empty).
double dykstra_distance(const Vector& point, std::span<const ConvexSet> sets,
                        double tol = 1e-10, int max_iter = kDykstraMaxIter);

//---------------------------------------------------------------------------//
// Steiner fitting
//---------------------------------------------------------------------------//

inline constexpr double kDefaultConditionBound = 1e10;

/// Least-squares operator mapping tube volumes V(r_k) to (Lambda_0..Lambda_n)
/// under V(r) = sum_i Lambda_i alpha_{n-i} r^{n-i}. Rows index Lambda_i.
/// Throws IllConditioned when the column-scaled design exceeds the bound.
Matrix steiner_fit_operator(std::span<const double> radii, int n,
                            double condition_bound = kDefaultConditionBound);

/// Generalized least-squares variant: volumes with the given covariance are
/// whitened before the fit.
Matrix steiner_fit_operator(std::span<const double> radii, int n, const Matrix& covariance,
                            double condition_bound = kDefaultConditionBound);

std::vector<double> fit_steiner(std::span<const double> radii, std::span<const double> volumes,
                                int n, double condition_bound = kDefaultConditionBound);

}  // namespace lkpolar
