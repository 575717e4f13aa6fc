#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "drnv/economics.hpp"
#include "drnv/estimation.hpp"
#include "drnv/market.hpp"

namespace drnv {

enum class Strategy { Oracle, BN, DrOmega, DrSUniform, DrSLevelAdjusted, RobustS, RobustOmega };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& text);
std::vector<Strategy> all_strategies();

enum class CvMode { FixedWindow, Sliding };

std::string to_string(CvMode mode);
CvMode parse_cv_mode(const std::string& text);

struct BacktestPlan {
    std::size_t tau_window_days = 91;
    std::size_t cv_days = 40;
    std::size_t warm_start_days = 131;  // tau_window_days + cv_days
    /// Offers for day D use settled outcomes up to day D - lag_days.
    std::size_t lag_days = 2;
    CvMode cv_mode = CvMode::Sliding;
    std::vector<std::size_t> m_grid{30, 60, 90};
    std::vector<double> rho_grid;    // default 0:0.02:0.5
    std::vector<double> eps_grid;    // default 0:0.01:0.3
    std::vector<double> theta_grid{0.0, 0.3, 0.6, 0.9};
    std::vector<Strategy> strategies = all_strategies();
    unsigned threads = 1;

    BacktestPlan();
};

/// Throws DomainError on inconsistent plans.
void validate(const BacktestPlan& plan);

struct ChosenParameters {
    std::size_t m = 90;
    double rho = 0.0;
    double eps_uniform = 0.0;
    double eps_level_adjusted = 0.0;
    double theta = 0.0;
};

/// Settlement with the negative penalties removed: the balancing price is
/// pulled back to pi_s whenever the spread opposes the system direction.
double settle_hour(const MarketRecord& record, double y);

/// Offer of one strategy given tau_hat and parameters.
double strategy_offer(Strategy s, const MarketRecord& record, double tau_hat, const ChosenParameters& params);

/// Precomputes per-day revenues of every grid point so that cross-validation
/// over any window is a difference of prefix sums.
class BacktestEngine {
public:
    BacktestEngine(std::vector<MarketRecord> records, BacktestPlan plan);

    int days() const { return n_days_; }
    int first_day() const { return first_day_; }
    const BacktestPlan& plan() const { return plan_; }

    /// tau_hat for (day index, hour) with window m; 0.5 when the window holds no outcome.
    double tau_hat(std::size_t m, int day, int hour) const;
    /// Grid search on the cv_days window ending at day - lag_days: m by BN
    /// revenue, then each DR strategy's parameters given that m. Ties keep
    /// the first grid point.
    ChosenParameters choose(int day) const;
    /// Record for (day index, hour), or nullptr for a missing hour.
    const MarketRecord* record(int day, int hour) const;

private:
    struct GridPoint {
        Strategy strategy;
        double rho = 0.0, eps = 0.0, theta = 0.0;
    };
    double window_revenue(std::size_t m_index, std::size_t point, int first, int last) const;

    BacktestPlan plan_;
    std::vector<MarketRecord> records_;
    int first_day_ = 0;
    int n_days_ = 0;
    std::vector<int> index_;  // day * 24 + hour -> record index or -1
    std::vector<GridPoint> points_;
    std::vector<std::vector<double>> tau_;         // [m][day * 24 + hour]
    std::vector<std::vector<double>> prefix_;      // [m * points + point][day + 1]
};

struct DayChoice {
    HourStamp day;  // hour 0 of the trading day
    ChosenParameters params;
};

struct BacktestReport {
    BacktestPlan plan;
    std::vector<Strategy> strategies;
    std::vector<HourStamp> times;                 // evaluated hours
    std::vector<std::vector<double>> offers;      // [strategy][hour]
    std::vector<std::vector<double>> revenues;    // [strategy][hour]
    std::vector<double> oracle_revenues;
    std::vector<double> generation;
    std::vector<RegretRow> rows;                  // advantage ratio and delta-regret against BN
    std::vector<DayChoice> choices;               // one per evaluated day (Sliding) or one (FixedWindow)
    std::vector<std::string> warnings;
};

/// Parameters chosen on the window before the first evaluation day.
ChosenParameters cross_validate(const std::vector<MarketRecord>& records, const BacktestPlan& plan);

/// Full protocol: warm start, cross-validation (fixed or sliding),
/// out-of-sample settlement of every evaluation hour.
BacktestReport run_backtest(const std::vector<MarketRecord>& records, const BacktestPlan& plan);

/// Same evaluation with `params` held fixed for every day.
BacktestReport run_backtest(const std::vector<MarketRecord>& records, const BacktestPlan& plan,
                            const ChosenParameters& params);

/// `timestamp,strategy,revenue,regret,cum_delta_regret`
void write_report_csv(std::ostream& out, const BacktestReport& report);
nlohmann::json report_json(const BacktestReport& report);
nlohmann::json to_json(const ChosenParameters& params);

}  // namespace drnv
