#include "drnv/solvers.hpp"

#include <algorithm>

#include "drnv/errors.hpp"

namespace drnv {

namespace {
void check_tau(double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("chance of success must lie in [0,1]");
}
}  // namespace

std::string to_string(Method method) {
    switch (method) {
        case Method::Direct: return "direct";
        case Method::DrOmega: return "dr-omega";
        case Method::DrS: return "dr-s";
        case Method::RobustOmega: return "robust-omega";
        case Method::RobustS: return "robust-s";
    }
    return "unknown";
}

double direct_offer(const PredictiveCdf& forecast, double tau_hat) {
    check_tau(tau_hat);
    return forecast.quantile(tau_hat);
}

double dr_omega_offer(const PredictiveCdf& forecast, double tau_hat, double rho) {
    check_tau(tau_hat);
    if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("FSD radius must lie in [0,1]");
    if (rho == 1.0) return tau_hat;
    // Deformed quantiles through the operator inverses: upper^{-1} = reference^{-1} o lower-op.
    const double q_upper = forecast.quantile(deform_upper_inverse(tau_hat, rho));
    const double q_lower = forecast.quantile(deform_lower_inverse(tau_hat, rho));
    return std::clamp(tau_hat * q_lower + (1.0 - tau_hat) * q_upper, 0.0, 1.0);
}

double dr_s_offer(const PredictiveCdf& forecast, const BernoulliBall& ball, DrSBranch* branch) {
    const double mean = forecast.mean();
    const double q_hi = forecast.quantile(ball.tau_hi);
    if (q_hi < mean) {
        if (branch) *branch = DrSBranch::UpperQuantile;
        return q_hi;
    }
    const double q_lo = forecast.quantile(ball.tau_lo);
    if (q_lo > mean) {
        if (branch) *branch = DrSBranch::LowerQuantile;
        return q_lo;
    }
    if (branch) *branch = DrSBranch::Mean;
    return mean;
}

OfferDecision solve_direct(const PredictiveCdf& forecast, double tau_hat) {
    OfferDecision d;
    d.method = Method::Direct;
    d.y_star = direct_offer(forecast, tau_hat);
    d.diagnostics["tau_hat"] = tau_hat;
    return d;
}

OfferDecision solve_dr_omega(const PredictiveCdf& forecast, double tau_hat, double rho) {
    OfferDecision d;
    d.method = Method::DrOmega;
    d.y_star = dr_omega_offer(forecast, tau_hat, rho);
    d.diagnostics["tau_hat"] = tau_hat;
    d.diagnostics["rho"] = rho;
    if (rho < 1.0) {
        d.diagnostics["upper_quantile"] = forecast.quantile(deform_upper_inverse(tau_hat, rho));
        d.diagnostics["lower_quantile"] = forecast.quantile(deform_lower_inverse(tau_hat, rho));
    } else {
        d.diagnostics["upper_quantile"] = 0.0;
        d.diagnostics["lower_quantile"] = 1.0;
    }
    return d;
}

PredictiveCdf worst_case_cdf(const PredictiveCdf& forecast, double tau_hat, double rho) {
    check_tau(tau_hat);
    const FsdAmbiguitySet set = make_fsd_set(forecast, rho);
    return PredictiveCdf::worst_case(set.upper, set.lower, tau_hat);
}

OfferDecision solve_dr_s(const PredictiveCdf& forecast, const BernoulliBall& ball) {
    OfferDecision d;
    d.method = Method::DrS;
    DrSBranch branch{};
    d.y_star = dr_s_offer(forecast, ball, &branch);
    d.diagnostics["tau_hat"] = ball.tau_hat;
    d.diagnostics["tau_lo"] = ball.tau_lo;
    d.diagnostics["tau_hi"] = ball.tau_hi;
    d.diagnostics["quantile_tau_lo"] = forecast.quantile(ball.tau_lo);
    d.diagnostics["quantile_tau_hi"] = forecast.quantile(ball.tau_hi);
    d.diagnostics["mean"] = forecast.mean();
    d.diagnostics["branch"] = static_cast<double>(branch);
    return d;
}

OfferDecision solve_robust_s(const PredictiveCdf& forecast) {
    OfferDecision d;
    d.method = Method::RobustS;
    d.y_star = forecast.mean();
    d.diagnostics["mean"] = d.y_star;
    return d;
}

OfferDecision solve_robust_omega(double tau_hat) {
    check_tau(tau_hat);
    OfferDecision d;
    d.method = Method::RobustOmega;
    d.y_star = tau_hat;
    d.diagnostics["tau_hat"] = tau_hat;
    return d;
}

}  // namespace drnv
