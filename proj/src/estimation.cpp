#include "drnv/estimation.hpp"

#include <algorithm>

#include "drnv/errors.hpp"

namespace drnv {

double estimate_tau(std::span<const int> samples) {
    if (samples.empty()) throw DomainError("cannot estimate tau from an empty sample");
    double sum = 0.0;
    for (int s : samples) sum += s;
    return sum / static_cast<double>(samples.size());
}

TauEstimate hourly_tau_forecast(std::span<const PenaltyObservation> history, const TauEstimatorConfig& config,
                                int target_day, int target_hour) {
    if (config.window_days == 0) throw DomainError("tau window must be at least one day");
    const int last = target_day - static_cast<int>(config.lag_days);
    const int first = last - static_cast<int>(config.window_days) + 1;

    TauEstimate est;
    double successes = 0.0, sum_o = 0.0, sum_u = 0.0;
    std::size_t in_window = 0;
    for (const auto& obs : history) {
        if (obs.day < first || obs.day > last) continue;
        if (config.per_hour && obs.hour != target_hour) continue;
        ++in_window;
        sum_o += obs.penalties.pi_o;
        sum_u += obs.penalties.pi_u;
        auto s = bernoulli_outcome(obs.penalties);
        if (!s) {
            switch (config.no_balancing) {
                case NoBalancingRule::Exclude: ++est.excluded; continue;
                case NoBalancingRule::CountAsShort: s = 0; break;
                case NoBalancingRule::CountAsLong: s = 1; break;
            }
        }
        successes += *s;
        ++est.used;
    }
    if (in_window > 0) {
        est.mean_pi_o = sum_o / static_cast<double>(in_window);
        est.mean_pi_u = sum_u / static_cast<double>(in_window);
    }
    if (est.used == 0) {
        if (!config.fallback_half)
            throw DomainError("no usable market outcome for hour " + std::to_string(target_hour) +
                              " in days [" + std::to_string(first) + "," + std::to_string(last) + "]");
        est.tau_hat = 0.5;
        est.fallback = true;
        return est;
    }
    est.tau_hat = successes / static_cast<double>(est.used);
    return est;
}

OutcomeTable::OutcomeTable(int n_days, std::span<const PenaltyObservation> history)
    : n_days_(n_days),
      successes_(static_cast<std::size_t>(n_days + 1) * 24, 0),
      usable_(static_cast<std::size_t>(n_days + 1) * 24, 0) {
    std::vector<int> s(static_cast<std::size_t>(n_days) * 24, 0), u(s.size(), 0);
    for (const auto& obs : history) {
        if (obs.day < 0 || obs.day >= n_days || obs.hour < 0 || obs.hour > 23) continue;
        const auto outcome = bernoulli_outcome(obs.penalties);
        if (!outcome) continue;
        const auto idx = static_cast<std::size_t>(obs.day) * 24 + static_cast<std::size_t>(obs.hour);
        s[idx] = *outcome;
        u[idx] = 1;
    }
    for (int d = 0; d < n_days; ++d)
        for (int h = 0; h < 24; ++h) {
            const auto cur = static_cast<std::size_t>(d + 1) * 24 + static_cast<std::size_t>(h);
            const auto prev = static_cast<std::size_t>(d) * 24 + static_cast<std::size_t>(h);
            successes_[cur] = successes_[prev] + s[prev];
            usable_[cur] = usable_[prev] + u[prev];
        }
}

std::pair<int, int> OutcomeTable::window(int hour, int first_day, int last_day) const {
    first_day = std::max(first_day, 0);
    last_day = std::min(last_day, n_days_ - 1);
    if (last_day < first_day) return {0, 0};
    const auto hi = static_cast<std::size_t>(last_day + 1) * 24 + static_cast<std::size_t>(hour);
    const auto lo = static_cast<std::size_t>(first_day) * 24 + static_cast<std::size_t>(hour);
    return {successes_[hi] - successes_[lo], usable_[hi] - usable_[lo]};
}

std::optional<double> OutcomeTable::tau_hat(int day, int hour, std::size_t window_days, std::size_t lag_days) const {
    const int last = day - static_cast<int>(lag_days);
    const int first = last - static_cast<int>(window_days) + 1;
    const auto [succ, used] = window(hour, first, last);
    if (used == 0) return std::nullopt;
    return static_cast<double>(succ) / static_cast<double>(used);
}

}  // namespace drnv
