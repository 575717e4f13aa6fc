#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "drnv/economics.hpp"

namespace drnv {

/// How periods without balancing penalties enter the tau estimate.
enum class NoBalancingRule { Exclude, CountAsShort, CountAsLong };

struct TauEstimatorConfig {
    std::size_t window_days = 90;  // m
    bool per_hour = true;          // one model per hour of the day
    NoBalancingRule no_balancing = NoBalancingRule::Exclude;
    /// The window ends `lag_days` before the target day (1 = the day before).
    std::size_t lag_days = 1;
    /// Return 0.5 instead of throwing when the window holds no usable outcome.
    bool fallback_half = false;
};

struct PenaltyObservation {
    int day = 0;
    int hour = 0;
    PenaltyPair penalties;
};

struct TauEstimate {
    double tau_hat = 0.5;
    std::size_t used = 0;
    std::size_t excluded = 0;
    double mean_pi_o = 0.0;  // raw penalty averages over the window
    double mean_pi_u = 0.0;
    bool fallback = false;
};

/// Sample mean of binary outcomes. Throws DomainError on an empty sample.
double estimate_tau(std::span<const int> samples);

/// Moving-average tau for (target_day, target_hour) from the last
/// `window_days` days of history, ending `lag_days` before the target day.
TauEstimate hourly_tau_forecast(std::span<const PenaltyObservation> history, const TauEstimatorConfig& config,
                                int target_day, int target_hour);

/// Day x hour table of Bernoulli outcomes with per-hour prefix counts, for
/// O(1) moving-average queries. Agrees with hourly_tau_forecast (per-hour,
/// Exclude rule).
class OutcomeTable {
public:
    OutcomeTable(int n_days, std::span<const PenaltyObservation> history);

    int days() const { return n_days_; }
    /// Successes and usable outcomes at `hour` over days [first, last] (clipped).
    std::pair<int, int> window(int hour, int first_day, int last_day) const;
    /// tau_hat for (day, hour); nullopt when the window has no usable outcome.
    std::optional<double> tau_hat(int day, int hour, std::size_t window_days, std::size_t lag_days) const;

private:
    int n_days_;
    std::vector<int> successes_;  // prefix sums, (n_days + 1) x 24
    std::vector<int> usable_;
};

}  // namespace drnv
