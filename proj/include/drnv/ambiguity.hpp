#pragma once

#include <string>

#include "drnv/deformation.hpp"
#include "drnv/dist.hpp"

namespace drnv {

/// Upper bound of the FSD band: pointwise double-power deformation towards H(0).
PredictiveCdf deform_upper(const PredictiveCdf& reference, double rho);
/// Lower bound of the FSD band: pointwise double-power deformation towards H(1).
PredictiveCdf deform_lower(const PredictiveCdf& reference, double rho);

/// FSD ambiguity set around a reference forecast: every CDF F with
/// lower(x) <= F(x) <= upper(x). rho = 1 stores the Heaviside limits.
struct FsdAmbiguitySet {
    PredictiveCdf reference;
    double rho;
    PredictiveCdf upper;
    PredictiveCdf lower;
};

FsdAmbiguitySet make_fsd_set(const PredictiveCdf& reference, double rho);

enum class BallKind { Uniform, LevelAdjusted };

BallKind parse_ball_kind(const std::string& text);
std::string to_string(BallKind kind);

/// Interval [tau_lo, tau_hi] of plausible chances of success around tau_hat.
struct BernoulliBall {
    double tau_hat;
    double epsilon;
    BallKind kind;
    double theta;  // LevelAdjusted only; 0 for Uniform
    double tau_lo;
    double tau_hi;

    /// Half-width before clipping to [0,1].
    double half_width() const;
};

/// Largest accepted radius; beyond it both bounds are clipped to [0,1] anyway.
inline constexpr double kMaxBallRadius = 10.0;

/// Uniform ball: tau_hat +- epsilon. LevelAdjusted ball: tau_hat +-
/// epsilon * (1 - 4 theta tau_hat (1 - tau_hat)). Both clipped to [0,1].
/// Passing a non-zero theta with a Uniform ball is rejected.
BernoulliBall make_bernoulli_ball(double tau_hat, double epsilon, BallKind kind, double theta = 0.0);

}  // namespace drnv
