#pragma once

#include <map>
#include <string>

#include "drnv/ambiguity.hpp"
#include "drnv/dist.hpp"

namespace drnv {

enum class Method { Direct, DrOmega, DrS, RobustOmega, RobustS };

std::string to_string(Method method);

/// Offer y* in [0,1] with the intermediate values that produced it.
struct OfferDecision {
    double y_star = 0.0;
    Method method = Method::Direct;
    std::map<std::string, double> diagnostics;
};

/// Which term of the DR-s closed form fired.
enum class DrSBranch { UpperQuantile, LowerQuantile, Mean };

// Allocation-free kernels, used inside simulation and backtest loops.
double direct_offer(const PredictiveCdf& forecast, double tau_hat);
double dr_omega_offer(const PredictiveCdf& forecast, double tau_hat, double rho);
double dr_s_offer(const PredictiveCdf& forecast, const BernoulliBall& ball, DrSBranch* branch = nullptr);

/// Bernoulli newsvendor: y* = F^{-1}(tau_hat).
OfferDecision solve_direct(const PredictiveCdf& forecast, double tau_hat);

/// Ambiguity about the generation forecast, FSD band of radius rho:
/// y* = tau_hat * lower^{-1}(tau_hat) + (1 - tau_hat) * upper^{-1}(tau_hat).
/// rho = 1 returns the robust limit tau_hat.
OfferDecision solve_dr_omega(const PredictiveCdf& forecast, double tau_hat, double rho);

/// Worst-case distribution of the DR-omega problem.
PredictiveCdf worst_case_cdf(const PredictiveCdf& forecast, double tau_hat, double rho);

/// Ambiguity about the chance of success:
///   F^{-1}(tau_hi)  if F^{-1}(tau_hi) < E[w]
///   F^{-1}(tau_lo)  if F^{-1}(tau_lo) > E[w]
///   E[w]            otherwise (ties included)
OfferDecision solve_dr_s(const PredictiveCdf& forecast, const BernoulliBall& ball);

/// Robust limit of DR-s: y* = E[w].
OfferDecision solve_robust_s(const PredictiveCdf& forecast);

/// Robust limit of DR-omega: y* = tau_hat.
OfferDecision solve_robust_omega(double tau_hat);

}  // namespace drnv
