#include "drnv/economics.hpp"

#include <algorithm>
#include <cmath>

#include "drnv/errors.hpp"

namespace drnv {

double effective_balancing_price(double pi_s, double pi_b, double s_L, double y, double omega_star) {
    return (omega_star - y) * s_L > 0.0 ? pi_b : pi_s;
}

double revenue(const SettlementInput& in) {
    const double price = effective_balancing_price(in.pi_s, in.pi_b, in.s_L, in.y, in.omega_star);
    return in.pi_s * in.y + price * (in.omega_star - in.y);
}

PenaltyPair penalties(double pi_s, double pi_b, double s_L) {
    PenaltyPair p;
    if (s_L >= 0.0)
        p.pi_o = std::max(pi_s - pi_b, 0.0);
    else
        p.pi_u = std::max(pi_b - pi_s, 0.0);
    return p;
}

std::optional<int> bernoulli_outcome(const PenaltyPair& p) {
    if (p.pi_o > 0.0) return 1;
    if (p.pi_u > 0.0) return 0;
    return std::nullopt;
}

double scaled_loss(double y, double omega, double s) {
    return s * std::max(omega - y, 0.0) + (1.0 - s) * std::max(y - omega, 0.0);
}

double expected_loss(const PredictiveCdf& dist, double y, double tau) {
    if (!(tau >= 0.0 && tau <= 1.0)) throw DomainError("chance of success must lie in [0,1]");
    const PartialExpectations pe = dist.partial_expectations(y);
    return (1.0 - tau) * pe.under + tau * pe.over;
}

std::vector<RegretRow> regret_and_ratio(const std::vector<StrategySeries>& strategies,
                                        const std::vector<double>& oracle_revenues,
                                        const std::vector<double>& generation,
                                        const std::string& reference) {
    const std::size_t n = oracle_revenues.size();
    if (generation.size() != n)
        throw DataError("generation series has " + std::to_string(generation.size()) +
                        " periods, oracle series has " + std::to_string(n));
    const StrategySeries* ref = nullptr;
    for (const auto& s : strategies) {
        if (s.revenues.size() != n)
            throw DataError("strategy '" + s.name + "' has " + std::to_string(s.revenues.size()) +
                            " periods, expected " + std::to_string(n));
        if (s.name == reference) ref = &s;
    }
    if (!ref) throw DataError("reference strategy '" + reference + "' not among the strategies");

    double energy = 0.0, oracle_total = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
        energy += generation[t];
        oracle_total += oracle_revenues[t];
    }

    std::vector<RegretRow> rows;
    rows.reserve(strategies.size());
    for (const auto& s : strategies) {
        RegretRow row;
        row.name = s.name;
        row.cumulative_delta_regret.reserve(n);
        std::size_t at_least_as_good = 0;
        double cum = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            row.total_revenue += s.revenues[t];
            // Revenues that agree up to rounding count as ties.
            const double slack = 1e-9 * (1.0 + std::abs(ref->revenues[t]));
            if (s.revenues[t] >= ref->revenues[t] - slack) ++at_least_as_good;
            // (oracle - ref) - (oracle - s) = s - ref
            cum += s.revenues[t] - ref->revenues[t];
            row.cumulative_delta_regret.push_back(cum);
        }
        row.revenue_per_mwh = energy > 0.0 ? row.total_revenue / energy : 0.0;
        row.regret_per_mwh = energy > 0.0 ? (oracle_total - row.total_revenue) / energy : 0.0;
        row.advantage_ratio = n > 0 ? 100.0 * static_cast<double>(at_least_as_good) / static_cast<double>(n) : 100.0;
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace drnv
