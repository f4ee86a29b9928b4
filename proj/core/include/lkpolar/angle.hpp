#pragma once

#include <cstdint>

#include "lkpolar/numkit.hpp"
#include "lkpolar/polycone.hpp"

namespace lkpolar {

enum class AngleMethod { exact1d, exact2d, exact3d, montecarlo };

const char* to_string(AngleMethod m) noexcept;

/// A solid-angle fraction in [0, 1]. std_error is zero for exact methods.
struct AngleResult {
    double value = 0.0;
    double std_error = 0.0;
    AngleMethod method = AngleMethod::exact1d;
    std::int64_t samples = 0;
};

inline constexpr std::int64_t kDefaultAngleSamples = 200000;

struct AngleConfig {
    std::int64_t samples = kDefaultAngleSamples;
    std::uint64_t seed = 0;
    std::uint64_t stream = 0;
    bool force_mc = false;

    AngleConfig with_stream(std::uint64_t s) const {
        AngleConfig c = *this;
        c.stream = s;
        return c;
    }
};

/// Orthonormal i-frame whose span is distributed by the rotation-invariant
/// measure on G(i, n).
Basis grassmann_sample(RngStream& rng, int i, int n);

/// Uniformly distributed orthogonal frame of R^n (the Q factor of a Gaussian
/// matrix with sign-fixed diagonal).
Matrix random_orthogonal(RngStream& rng, int n);

/// Fraction of the unit sphere of span(cone) lying in the cone. Exact when the
/// pointed part has dimension <= 3, Monte Carlo otherwise or when forced.
AngleResult solid_angle(const ConvexCone& cone, const AngleConfig& cfg = {});

/// Density of a face at the origin, measured inside the face's own span.
AngleResult face_density(const Face& face, int ambient_dim, const AngleConfig& cfg = {});

/// Exterior angle: density of the conormal cone along the face. Exactly 1 on
/// the top face.
AngleResult exterior_angle(const Face& face, const ConvexCone& cone, const AngleConfig& cfg = {});

}  // namespace lkpolar
