#include "drnv/ambiguity.hpp"

#include <algorithm>

#include "drnv/errors.hpp"

namespace drnv {

PredictiveCdf deform_upper(const PredictiveCdf& reference, double rho) {
    return PredictiveCdf::deformed(reference, rho, Deformation::Upper);
}

PredictiveCdf deform_lower(const PredictiveCdf& reference, double rho) {
    return PredictiveCdf::deformed(reference, rho, Deformation::Lower);
}

FsdAmbiguitySet make_fsd_set(const PredictiveCdf& reference, double rho) {
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("FSD radius must lie in [0,1]");
    if (rho == 1.0)
        return {reference, rho, PredictiveCdf::heaviside(0.0), PredictiveCdf::heaviside(1.0)};
    return {reference, rho, deform_upper(reference, rho), deform_lower(reference, rho)};
}

BallKind parse_ball_kind(const std::string& text) {
    if (text == "uniform" || text == "u") return BallKind::Uniform;
    if (text == "level-adjusted" || text == "level_adjusted" || text == "la") return BallKind::LevelAdjusted;
    throw DomainError("unknown ball kind '" + text + "' (expected uniform or level-adjusted)");
}

std::string to_string(BallKind kind) {
    return kind == BallKind::Uniform ? "uniform" : "level-adjusted";
}

double BernoulliBall::half_width() const {
    if (kind == BallKind::Uniform) return epsilon;
    return epsilon * (1.0 - 4.0 * theta * tau_hat * (1.0 - tau_hat));
}

BernoulliBall make_bernoulli_ball(double tau_hat, double epsilon, BallKind kind, double theta) {
    if (!(tau_hat >= 0.0 && tau_hat <= 1.0)) throw DomainError("tau_hat must lie in [0,1]");
    if (!(epsilon >= 0.0 && epsilon <= kMaxBallRadius))
        throw DomainError("ball radius must lie in [0," + std::to_string(kMaxBallRadius) + "]");
    if (!(theta >= 0.0 && theta < 1.0)) throw DomainError("shape theta must lie in [0,1)");
    if (kind == BallKind::Uniform && theta != 0.0)
        throw DomainError("shape theta only applies to level-adjusted balls");

    BernoulliBall ball{tau_hat, epsilon, kind, theta, tau_hat, tau_hat};
    const double h = ball.half_width();
    ball.tau_lo = std::max(tau_hat - h, 0.0);
    ball.tau_hi = std::min(tau_hat + h, 1.0);
    return ball;
}

}  // namespace drnv
