#pragma once

#include <vector>

#include "lkpolar/angle.hpp"
#include "lkpolar/polycone.hpp"

namespace lkpolar {

/// A value with a first-order standard error (zero when exact).
struct Uncertain {
    double value = 0.0;
    double std_error = 0.0;
};

/// Indexed sequence of uncertain values, index 0..n.
struct Sequence {
    std::vector<double> value;
    std::vector<double> std_error;

    explicit Sequence(int size = 0) : value(size, 0.0), std_error(size, 0.0) {}
    int size() const { return static_cast<int>(value.size()); }
    Uncertain operator[](int k) const { return {value[k], std_error[k]}; }
};

/// Per-dimension kernel: c_k = sum over k-faces F of gamma(F, V) * Theta_k(F).
Sequence face_contributions(const ConvexCone& cone, const AngleConfig& cfg = {});

/// |sum_k c_k - 1| with its propagated standard error.
Uncertain angle_sum_residual(const ConvexCone& cone, const AngleConfig& cfg = {});

/// Polar invariants as tail sums of the face kernel; sigma_0 = 1.
Sequence sigma_closed(const ConvexCone& cone, const AngleConfig& cfg = {});
Sequence sigma_from_contributions(const Sequence& c);

/// Weight a_i^k = alpha_k / (alpha_{k-i} alpha_i) * C(k, i).
double lambda_weight(int i, int k);

/// Local Lipschitz-Killing curvatures as weighted tail sums; Lambda^loc_0 = 1.
Sequence lambda_loc_closed(const ConvexCone& cone, const AngleConfig& cfg = {});
Sequence lambda_loc_from_contributions(const Sequence& c);

/// Upper triangular matrix with unit diagonal, 1-based entries m_i^j.
class TransferMatrix {
public:
    explicit TransferMatrix(int n);

    int n() const { return n_; }
    /// m_i^j for 1 <= i, j <= n (zero below the diagonal).
    double operator()(int i, int j) const { return m_(i - 1, j - 1); }
    const Matrix& matrix() const { return m_; }

    /// (M sigma)_i for i = 1..n, with index 0 carried through unchanged.
    Sequence apply(const Sequence& sigma) const;

private:
    int n_;
    Matrix m_;
};

TransferMatrix transfer_matrix(int n);

/// Every invariant attached to one convex germ.
struct InvariantProfile {
    int n = 0;
    Sequence sigma;
    Sequence lambda_loc;
    Sequence contributions;
    Uncertain angle_sum_residual;
};

InvariantProfile compute_profile(const ConvexCone& cone, const AngleConfig& cfg = {});

/// max_i |Lambda^loc_i - (M sigma)_i| from the closed forms.
double verify_transfer_identity(const ConvexCone& cone, const AngleConfig& cfg = {});
double transfer_identity_deviation(const InvariantProfile& profile);

/// Intrinsic volumes Lambda_0..Lambda_n of a polytope from exterior angles
/// and face volumes.
Sequence polytope_intrinsic_volumes(const Polytope& polytope, const AngleConfig& cfg = {});

/// Volume of the polytope in its own dimension, by pyramid recursion over
/// its face lattice.
double polytope_volume(const Polytope& polytope);

/// Coefficients c_p of r^p in V(r) = sum_i Lambda_i alpha_{n-i} r^{n-i}.
std::vector<double> steiner_coefficients(const std::vector<double>& lambdas);
std::vector<double> steiner_polynomial(const Polytope& polytope, const AngleConfig& cfg = {});

/// Lambda_0..Lambda_k of the unit k-ball: alpha_k / alpha_{k-j} * C(k, j).
std::vector<double> ball_intrinsic_volumes(int k);

}  // namespace lkpolar
