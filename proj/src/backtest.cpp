#include "drnv/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <ostream>

#include "drnv/errors.hpp"
#include "drnv/montecarlo.hpp"
#include "drnv/parallel.hpp"
#include "drnv/solvers.hpp"

namespace drnv {

namespace {

const std::vector<std::pair<Strategy, std::string>>& strategy_names() {
    static const std::vector<std::pair<Strategy, std::string>> names{
        {Strategy::Oracle, "oracle"},           {Strategy::BN, "bn"},
        {Strategy::DrOmega, "dr-omega"},        {Strategy::DrSUniform, "dr-s-uniform"},
        {Strategy::DrSLevelAdjusted, "dr-s-level-adjusted"},
        {Strategy::RobustS, "robust-s"},        {Strategy::RobustOmega, "robust-omega"},
    };
    return names;
}

bool has(const std::vector<Strategy>& list, Strategy s) { return std::find(list.begin(), list.end(), s) != list.end(); }

}  // namespace

std::string to_string(Strategy s) {
    for (const auto& [k, name] : strategy_names())
        if (k == s) return name;
    return "?";
}

Strategy parse_strategy(const std::string& text) {
    for (const auto& [k, name] : strategy_names())
        if (name == text) return k;
    throw DomainError("unknown strategy '" + text +
                      "' (expected oracle, bn, dr-omega, dr-s-uniform, dr-s-level-adjusted, robust-s, robust-omega)");
}

std::vector<Strategy> all_strategies() {
    std::vector<Strategy> out;
    for (const auto& [k, name] : strategy_names()) out.push_back(k);
    return out;
}

std::string to_string(CvMode mode) { return mode == CvMode::Sliding ? "sliding" : "fixed"; }

CvMode parse_cv_mode(const std::string& text) {
    if (text == "sliding") return CvMode::Sliding;
    if (text == "fixed") return CvMode::FixedWindow;
    throw DomainError("unknown cross-validation mode '" + text + "' (expected sliding or fixed)");
}

BacktestPlan::BacktestPlan() : rho_grid(epsilon_grid(0.02, 0.5)), eps_grid(epsilon_grid(0.01, 0.3)) {}

void validate(const BacktestPlan& p) {
    if (p.tau_window_days == 0 || p.cv_days == 0) throw DomainError("tau window and cv window must be at least one day");
    if (p.warm_start_days != p.tau_window_days + p.cv_days)
        throw DomainError("warm start (" + std::to_string(p.warm_start_days) + " days) must equal tau window (" +
                          std::to_string(p.tau_window_days) + ") plus cv window (" + std::to_string(p.cv_days) + ")");
    if (p.lag_days == 0) throw DomainError("lag must be at least one day: day D outcomes settle after its offers");
    if (p.m_grid.empty() || p.rho_grid.empty() || p.eps_grid.empty() || p.theta_grid.empty())
        throw DomainError("parameter grids must be non-empty");
    for (std::size_t m : p.m_grid)
        if (m == 0 || m > p.tau_window_days)
            throw DomainError("m grid values must lie in [1, tau window = " + std::to_string(p.tau_window_days) + "]");
    for (double r : p.rho_grid)
        if (!(r >= 0.0 && r <= 1.0)) throw DomainError("rho grid values must lie in [0,1]");
    for (double e : p.eps_grid)
        if (!(e >= 0.0 && e <= kMaxBallRadius)) throw DomainError("epsilon grid values must lie in [0,10]");
    for (double t : p.theta_grid)
        if (!(t >= 0.0 && t < 1.0)) throw DomainError("theta grid values must lie in [0,1)");
    if (!has(p.strategies, Strategy::BN)) throw DomainError("strategies must include bn, the reference strategy");
}

double settle_hour(const MarketRecord& r, double y) {
    const PenaltyPair p = penalties(r.pi_s, r.pi_b, r.s_L);
    const double pi_b = r.s_L >= 0.0 ? r.pi_s - p.pi_o : r.pi_s + p.pi_u;
    return revenue({r.pi_s, pi_b, r.s_L, y, r.omega_star});
}

double strategy_offer(Strategy s, const MarketRecord& r, double tau_hat, const ChosenParameters& params) {
    switch (s) {
        case Strategy::Oracle: return r.omega_star;
        case Strategy::BN: return direct_offer(r.forecast, tau_hat);
        case Strategy::DrOmega: return dr_omega_offer(r.forecast, tau_hat, params.rho);
        case Strategy::DrSUniform:
            return dr_s_offer(r.forecast, make_bernoulli_ball(tau_hat, params.eps_uniform, BallKind::Uniform));
        case Strategy::DrSLevelAdjusted:
            return dr_s_offer(r.forecast, make_bernoulli_ball(tau_hat, params.eps_level_adjusted,
                                                              BallKind::LevelAdjusted, params.theta));
        case Strategy::RobustS: return r.forecast.mean();
        case Strategy::RobustOmega: return tau_hat;
    }
    return 0.0;
}

BacktestEngine::BacktestEngine(std::vector<MarketRecord> records, BacktestPlan plan)
    : plan_(std::move(plan)), records_(std::move(records)) {
    validate(plan_);
    if (records_.empty()) throw DataError("no market records");
    for (std::size_t i = 1; i < records_.size(); ++i)
        if (!(records_[i - 1].time < records_[i].time)) throw DataError("market records must be strictly increasing in time");
    first_day_ = records_.front().time.day;
    n_days_ = records_.back().time.day - first_day_ + 1;
    if (n_days_ <= static_cast<int>(plan_.warm_start_days))
        throw DataError("insufficient history: " + std::to_string(n_days_) + " days, warm start needs " +
                        std::to_string(plan_.warm_start_days) + " plus at least one evaluation day");

    index_.assign(static_cast<std::size_t>(n_days_) * 24, -1);
    std::vector<PenaltyObservation> history;
    history.reserve(records_.size());
    for (std::size_t i = 0; i < records_.size(); ++i) {
        const auto& r = records_[i];
        const int d = r.time.day - first_day_;
        index_[static_cast<std::size_t>(d) * 24 + static_cast<std::size_t>(r.time.hour)] = static_cast<int>(i);
        history.push_back({d, r.time.hour, penalties(r.pi_s, r.pi_b, r.s_L)});
    }
    const OutcomeTable table(n_days_, history);

    const std::size_t M = plan_.m_grid.size();
    tau_.assign(M, std::vector<double>(index_.size(), 0.5));
    for (std::size_t mi = 0; mi < M; ++mi)
        for (int d = 0; d < n_days_; ++d)
            for (int h = 0; h < 24; ++h)
                tau_[mi][static_cast<std::size_t>(d) * 24 + static_cast<std::size_t>(h)] =
                    table.tau_hat(d, h, plan_.m_grid[mi], plan_.lag_days).value_or(0.5);

    points_.push_back({Strategy::BN});
    if (has(plan_.strategies, Strategy::DrOmega))
        for (double rho : plan_.rho_grid) points_.push_back({Strategy::DrOmega, rho});
    if (has(plan_.strategies, Strategy::DrSUniform))
        for (double eps : plan_.eps_grid) points_.push_back({Strategy::DrSUniform, 0.0, eps});
    if (has(plan_.strategies, Strategy::DrSLevelAdjusted))
        for (double eps : plan_.eps_grid)
            for (double theta : plan_.theta_grid) points_.push_back({Strategy::DrSLevelAdjusted, 0.0, eps, theta});

    // daily[mi * P + p][d]: revenue of grid point p with window m on day d.
    const std::size_t P = points_.size();
    std::vector<std::vector<double>> daily(M * P, std::vector<double>(static_cast<std::size_t>(n_days_), 0.0));
    parallel_for(static_cast<std::size_t>(n_days_), plan_.threads, [&](std::size_t d) {
        for (int h = 0; h < 24; ++h) {
            const int idx = index_[d * 24 + static_cast<std::size_t>(h)];
            if (idx < 0) continue;
            const auto& r = records_[static_cast<std::size_t>(idx)];
            for (std::size_t mi = 0; mi < M; ++mi) {
                const double tau = tau_[mi][d * 24 + static_cast<std::size_t>(h)];
                for (std::size_t p = 0; p < P; ++p) {
                    ChosenParameters cp;
                    cp.rho = points_[p].rho;
                    cp.eps_uniform = cp.eps_level_adjusted = points_[p].eps;
                    cp.theta = points_[p].theta;
                    daily[mi * P + p][d] += settle_hour(r, strategy_offer(points_[p].strategy, r, tau, cp));
                }
            }
        }
    });
    prefix_.assign(M * P, std::vector<double>(static_cast<std::size_t>(n_days_) + 1, 0.0));
    for (std::size_t k = 0; k < M * P; ++k)
        for (std::size_t d = 0; d < static_cast<std::size_t>(n_days_); ++d) prefix_[k][d + 1] = prefix_[k][d] + daily[k][d];
}

double BacktestEngine::tau_hat(std::size_t m, int day, int hour) const {
    const auto it = std::find(plan_.m_grid.begin(), plan_.m_grid.end(), m);
    if (it == plan_.m_grid.end()) throw DomainError("m = " + std::to_string(m) + " is not on the plan's m grid");
    if (day < 0 || day >= n_days_ || hour < 0 || hour > 23) throw DomainError("day/hour outside the data span");
    return tau_[static_cast<std::size_t>(it - plan_.m_grid.begin())][static_cast<std::size_t>(day) * 24 +
                                                                       static_cast<std::size_t>(hour)];
}

const MarketRecord* BacktestEngine::record(int day, int hour) const {
    if (day < 0 || day >= n_days_ || hour < 0 || hour > 23) return nullptr;
    const int idx = index_[static_cast<std::size_t>(day) * 24 + static_cast<std::size_t>(hour)];
    return idx < 0 ? nullptr : &records_[static_cast<std::size_t>(idx)];
}

double BacktestEngine::window_revenue(std::size_t m_index, std::size_t point, int first, int last) const {
    const auto& pre = prefix_[m_index * points_.size() + point];
    return pre[static_cast<std::size_t>(last) + 1] - pre[static_cast<std::size_t>(first)];
}

ChosenParameters BacktestEngine::choose(int day) const {
    const int last = std::min(day - static_cast<int>(plan_.lag_days), n_days_ - 1);
    const int first = std::max(0, last - static_cast<int>(plan_.cv_days) + 1);
    if (last < first) throw DataError("insufficient history to cross-validate day " + std::to_string(day));

    ChosenParameters out;
    std::size_t best_m = 0;
    double best = -HUGE_VAL;
    for (std::size_t mi = 0; mi < plan_.m_grid.size(); ++mi) {
        const double v = window_revenue(mi, 0, first, last);
        if (v > best) best = v, best_m = mi;
    }
    out.m = plan_.m_grid[best_m];

    double best_omega = -HUGE_VAL, best_u = -HUGE_VAL, best_la = -HUGE_VAL;
    for (std::size_t p = 1; p < points_.size(); ++p) {
        const double v = window_revenue(best_m, p, first, last);
        const auto& g = points_[p];
        switch (g.strategy) {
            case Strategy::DrOmega:
                if (v > best_omega) best_omega = v, out.rho = g.rho;
                break;
            case Strategy::DrSUniform:
                if (v > best_u) best_u = v, out.eps_uniform = g.eps;
                break;
            case Strategy::DrSLevelAdjusted:
                if (v > best_la) best_la = v, out.eps_level_adjusted = g.eps, out.theta = g.theta;
                break;
            default: break;
        }
    }
    return out;
}

ChosenParameters cross_validate(const std::vector<MarketRecord>& records, const BacktestPlan& plan) {
    const BacktestEngine engine(records, plan);
    return engine.choose(static_cast<int>(plan.warm_start_days));
}

namespace {

BacktestReport evaluate(const BacktestEngine& engine, const std::vector<ChosenParameters>& per_day) {
    const BacktestPlan& plan = engine.plan();
    BacktestReport rep;
    rep.plan = plan;
    rep.strategies = plan.strategies;
    const std::size_t S = rep.strategies.size();
    rep.offers.assign(S, {});
    rep.revenues.assign(S, {});

    const int start = static_cast<int>(plan.warm_start_days);
    for (int d = start; d < engine.days(); ++d) {
        const ChosenParameters& params = per_day[static_cast<std::size_t>(d - start)];
        for (int h = 0; h < 24; ++h) {
            const MarketRecord* r = engine.record(d, h);
            if (!r) continue;
            const double tau = engine.tau_hat(params.m, d, h);
            rep.times.push_back(r->time);
            rep.oracle_revenues.push_back(settle_hour(*r, r->omega_star));
            rep.generation.push_back(r->omega_star);
            for (std::size_t s = 0; s < S; ++s) {
                const double y = strategy_offer(rep.strategies[s], *r, tau, params);
                rep.offers[s].push_back(y);
                rep.revenues[s].push_back(settle_hour(*r, y));
            }
        }
    }
    std::vector<StrategySeries> series;
    for (std::size_t s = 0; s < S; ++s) series.push_back({to_string(rep.strategies[s]), rep.revenues[s]});
    rep.rows = regret_and_ratio(series, rep.oracle_revenues, rep.generation, to_string(Strategy::BN));
    return rep;
}

}  // namespace

BacktestReport run_backtest(const std::vector<MarketRecord>& records, const BacktestPlan& plan) {
    const BacktestEngine engine(records, plan);
    const int start = static_cast<int>(plan.warm_start_days);
    std::vector<ChosenParameters> per_day;
    std::vector<DayChoice> choices;
    if (plan.cv_mode == CvMode::FixedWindow) {
        const ChosenParameters fixed = engine.choose(start);
        per_day.assign(static_cast<std::size_t>(engine.days() - start), fixed);
        choices.push_back({{engine.first_day() + start, 0}, fixed});
    } else {
        for (int d = start; d < engine.days(); ++d) {
            per_day.push_back(engine.choose(d));
            choices.push_back({{engine.first_day() + d, 0}, per_day.back()});
        }
    }
    BacktestReport rep = evaluate(engine, per_day);
    rep.choices = std::move(choices);
    return rep;
}

BacktestReport run_backtest(const std::vector<MarketRecord>& records, const BacktestPlan& plan,
                            const ChosenParameters& params) {
    BacktestPlan fixed = plan;
    if (std::find(fixed.m_grid.begin(), fixed.m_grid.end(), params.m) == fixed.m_grid.end()) fixed.m_grid = {params.m};
    const BacktestEngine engine(records, fixed);
    const int start = static_cast<int>(plan.warm_start_days);
    BacktestReport rep = evaluate(engine, std::vector<ChosenParameters>(static_cast<std::size_t>(engine.days() - start), params));
    rep.choices.push_back({{engine.first_day() + start, 0}, params});
    return rep;
}

void write_report_csv(std::ostream& out, const BacktestReport& rep) {
    out << "timestamp,strategy,revenue,regret,cum_delta_regret\n" << std::setprecision(17);
    for (std::size_t t = 0; t < rep.times.size(); ++t) {
        const std::string stamp = format_hour_stamp(rep.times[t]);
        for (std::size_t s = 0; s < rep.strategies.size(); ++s)
            out << stamp << ',' << rep.rows[s].name << ',' << rep.revenues[s][t] << ','
                << rep.oracle_revenues[t] - rep.revenues[s][t] << ',' << rep.rows[s].cumulative_delta_regret[t] << '\n';
    }
}

nlohmann::json to_json(const ChosenParameters& p) {
    return {{"m", p.m},
            {"rho", p.rho},
            {"eps_uniform", p.eps_uniform},
            {"eps_level_adjusted", p.eps_level_adjusted},
            {"theta", p.theta}};
}

nlohmann::json report_json(const BacktestReport& rep) {
    nlohmann::json strategies = nlohmann::json::array();
    for (const auto& row : rep.rows)
        strategies.push_back({{"strategy", row.name},
                              {"total_revenue", row.total_revenue},
                              {"revenue_per_mwh", row.revenue_per_mwh},
                              {"regret_per_mwh", row.regret_per_mwh},
                              {"advantage_ratio_pct", row.advantage_ratio},
                              {"final_delta_regret",
                               row.cumulative_delta_regret.empty() ? 0.0 : row.cumulative_delta_regret.back()}});
    nlohmann::json choices = nlohmann::json::array();
    for (const auto& c : rep.choices) {
        auto j = to_json(c.params);
        j["from"] = format_hour_stamp(c.day).substr(0, 10);
        choices.push_back(j);
    }
    double oracle_total = 0.0, energy = 0.0;
    for (std::size_t t = 0; t < rep.times.size(); ++t) oracle_total += rep.oracle_revenues[t], energy += rep.generation[t];
    const auto& p = rep.plan;
    std::vector<std::string> names;
    for (auto s : p.strategies) names.push_back(to_string(s));
    return {
        {"plan",
         {{"warm_start_days", p.warm_start_days},
          {"tau_window_days", p.tau_window_days},
          {"cv_days", p.cv_days},
          {"lag_days", p.lag_days},
          {"cv_mode", to_string(p.cv_mode)},
          {"m_grid", p.m_grid},
          {"rho_grid", {{"first", p.rho_grid.front()}, {"last", p.rho_grid.back()}, {"count", p.rho_grid.size()}}},
          {"eps_grid", {{"first", p.eps_grid.front()}, {"last", p.eps_grid.back()}, {"count", p.eps_grid.size()}}},
          {"theta_grid", p.theta_grid},
          {"strategies", names}}},
        {"evaluation",
         {{"hours", rep.times.size()},
          {"first", rep.times.empty() ? "" : format_hour_stamp(rep.times.front())},
          {"last", rep.times.empty() ? "" : format_hour_stamp(rep.times.back())},
          {"energy", energy},
          {"oracle_revenue", oracle_total}}},
        {"reference", "bn"},
        {"strategies", strategies},
        {"parameters", choices},
        {"warnings", rep.warnings},
        {"note", "Figures are specific to the market data supplied; results computed on proprietary market data "
                 "cannot be regenerated from this report."},
    };
}

}  // namespace drnv
