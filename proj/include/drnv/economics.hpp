#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drnv/dist.hpp"

namespace drnv {

/// One settlement period, capacity-normalized volumes.
struct SettlementInput {
    double pi_s = 0.0;        // day-ahead price
    double pi_b = 0.0;        // balancing price
    double s_L = 0.0;         // system length; only the sign matters
    double y = 0.0;           // offer
    double omega_star = 0.0;  // realized generation
};

/// Overage (surplus) and underage (deficit) penalties per unit.
struct PenaltyPair {
    double pi_o = 0.0;
    double pi_u = 0.0;
};

/// Two-price settlement price for the imbalance omega_star - y.
double effective_balancing_price(double pi_s, double pi_b, double s_L, double y, double omega_star);

/// R = pi_s * y + effective_balancing_price * (omega_star - y).
double revenue(const SettlementInput& in);

/// Penalties with the long/short indicators (s_L = 0 counts as long);
/// negative values are clamped to zero.
PenaltyPair penalties(double pi_s, double pi_b, double s_L);

/// 1 when overage is penalized, 0 when underage is, nothing when neither.
std::optional<int> bernoulli_outcome(const PenaltyPair& p);

/// s (w - y)_+ + (1 - s) (y - w)_+, with s in {0,1} or s = tau.
double scaled_loss(double y, double omega, double s);

/// (1 - tau) E[(y - w)_+] + tau E[(w - y)_+] under `dist`.
double expected_loss(const PredictiveCdf& dist, double y, double tau);

struct StrategySeries {
    std::string name;
    std::vector<double> revenues;  // per period
};

struct RegretRow {
    std::string name;
    double total_revenue = 0.0;
    double revenue_per_mwh = 0.0;
    double regret_per_mwh = 0.0;
    /// Share of periods (percent) with revenue at least that of the reference strategy.
    double advantage_ratio = 0.0;
    /// Running sum of (reference regret - strategy regret); positive means ahead.
    std::vector<double> cumulative_delta_regret;
};

/// Per-MWh revenue and regret against the oracle, advantage ratio and
/// cumulative regret difference against `reference` (a member of
/// `strategies`, normally the direct approach). Throws DataError when the
/// series are not aligned.
std::vector<RegretRow> regret_and_ratio(const std::vector<StrategySeries>& strategies,
                                        const std::vector<double>& oracle_revenues,
                                        const std::vector<double>& generation,
                                        const std::string& reference);

}  // namespace drnv
