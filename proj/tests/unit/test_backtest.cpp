#include <doctest.h>

#include <cmath>
#include <sstream>

#include "drnv/backtest.hpp"
#include "drnv/errors.hpp"
#include "drnv/montecarlo.hpp"

using namespace drnv;

namespace {

BacktestPlan small_plan() {
    BacktestPlan p;
    p.tau_window_days = 20;
    p.cv_days = 10;
    p.warm_start_days = 30;
    p.m_grid = {5, 10, 20};
    p.rho_grid = epsilon_grid(0.1, 0.5);
    p.eps_grid = epsilon_grid(0.05, 0.3);
    p.theta_grid = {0.0, 0.5};
    return p;
}

std::vector<MarketRecord> small_market(int days = 60, std::uint64_t seed = 7) {
    SyntheticMarketConfig cfg;
    cfg.days = days;
    cfg.seed = seed;
    return generate_synthetic_market(cfg);
}

std::size_t index_of(const BacktestReport& rep, Strategy s) {
    for (std::size_t i = 0; i < rep.strategies.size(); ++i)
        if (rep.strategies[i] == s) return i;
    FAIL("strategy missing");
    return 0;
}

}  // namespace

TEST_CASE("strategy and mode names") {
    for (auto s : all_strategies()) CHECK(parse_strategy(to_string(s)) == s);
    CHECK(to_string(Strategy::DrSLevelAdjusted) == "dr-s-level-adjusted");
    CHECK_THROWS_AS(parse_strategy("dr-x"), DomainError);
    CHECK(parse_cv_mode("fixed") == CvMode::FixedWindow);
    CHECK(parse_cv_mode("sliding") == CvMode::Sliding);
    CHECK_THROWS_AS(parse_cv_mode("rolling"), DomainError);
}

TEST_CASE("plan validation") {
    CHECK_NOTHROW(validate(BacktestPlan{}));
    BacktestPlan p = small_plan();
    p.warm_start_days = 31;
    CHECK_THROWS_AS(validate(p), DomainError);
    p = small_plan();
    p.lag_days = 0;
    CHECK_THROWS_AS(validate(p), DomainError);
    p = small_plan();
    p.m_grid = {21};
    CHECK_THROWS_AS(validate(p), DomainError);
    p = small_plan();
    p.theta_grid = {1.0};
    CHECK_THROWS_AS(validate(p), DomainError);
    p = small_plan();
    p.strategies = {Strategy::Oracle, Strategy::DrOmega};
    CHECK_THROWS_AS(validate(p), DomainError);
}

TEST_CASE("settlement removes negative penalties") {
    MarketRecord r;
    r.pi_s = 50;
    r.s_L = 100;
    r.omega_star = 0.4;
    r.pi_b = 40;
    CHECK(settle_hour(r, 0.3) == doctest::Approx(50 * 0.3 + 40 * 0.1));
    CHECK(settle_hour(r, 0.6) == doctest::Approx(50 * 0.4));
    // long system, spread of the wrong sign: surplus settles at pi_s
    r.pi_b = 60;
    CHECK(settle_hour(r, 0.3) == doctest::Approx(50 * 0.4));
    CHECK(settle_hour(r, 0.6) == doctest::Approx(50 * 0.4));
}

TEST_CASE("insufficient history") {
    const auto recs = small_market(30);
    CHECK_THROWS_AS(BacktestEngine(recs, small_plan()), DataError);
    CHECK_THROWS_AS(run_backtest(recs, small_plan()), DataError);
    CHECK_THROWS_AS(BacktestEngine({}, small_plan()), DataError);
}

TEST_CASE("oracle dominance and totals") {
    const auto recs = small_market();
    const auto rep = run_backtest(recs, small_plan());
    CHECK(rep.times.size() == 30u * 24u);
    CHECK(rep.choices.size() == 30u);
    const auto o = index_of(rep, Strategy::Oracle);
    for (std::size_t s = 0; s < rep.strategies.size(); ++s) {
        double total = 0.0;
        for (std::size_t t = 0; t < rep.times.size(); ++t) {
            total += rep.revenues[s][t];
            CHECK(rep.revenues[s][t] <= rep.oracle_revenues[t] + 1e-9);
            CHECK(rep.offers[s][t] >= 0.0);
            CHECK(rep.offers[s][t] <= 1.0);
        }
        CHECK(rep.rows[s].total_revenue == doctest::Approx(total).epsilon(1e-12));
        CHECK(rep.rows[s].revenue_per_mwh <= rep.rows[o].revenue_per_mwh + 1e-12);
    }
    CHECK(rep.rows[o].regret_per_mwh == doctest::Approx(0.0));

    std::ostringstream csv;
    write_report_csv(csv, rep);
    std::size_t lines = 0;
    std::string line;
    std::istringstream in(csv.str());
    std::getline(in, line);
    CHECK(line == "timestamp,strategy,revenue,regret,cum_delta_regret");
    while (std::getline(in, line)) ++lines;
    CHECK(lines == rep.times.size() * rep.strategies.size());

    const auto j = report_json(rep);
    CHECK(j["evaluation"]["hours"] == rep.times.size());
    CHECK(j["strategies"].size() == rep.strategies.size());
    CHECK(j["parameters"].size() == 30u);
    CHECK(j["plan"]["cv_mode"] == "sliding");
}

TEST_CASE("penalty-free data gives identical revenues") {
    auto recs = small_market();
    for (auto& r : recs) r.pi_b = r.pi_s;
    const auto rep = run_backtest(recs, small_plan());
    for (std::size_t s = 0; s < rep.strategies.size(); ++s)
        for (std::size_t t = 0; t < rep.times.size(); ++t)
            CHECK(rep.revenues[s][t] == doctest::Approx(rep.oracle_revenues[t]).epsilon(1e-12));
}

TEST_CASE("no look-ahead: later outcomes and forecasts do not move earlier offers") {
    const auto recs = small_market();
    const BacktestPlan plan = small_plan();
    const auto base = run_backtest(recs, plan);
    const int first = recs.front().time.day;
    const int poison = 40;  // day index
    auto poisoned = recs;
    for (auto& r : poisoned) {
        const int d = r.time.day - first;
        if (d >= poison) {
            r.s_L = -r.s_L;
            r.pi_b = 2 * r.pi_s - r.pi_b;
            r.omega_star = 1.0 - r.omega_star;
        }
        if (d >= poison + 2) r.forecast = PredictiveCdf::beta(5.0, 1.5);
    }
    const auto rep = run_backtest(poisoned, plan);
    REQUIRE(rep.times.size() == base.times.size());
    std::size_t compared = 0, changed = 0;
    for (std::size_t t = 0; t < rep.times.size(); ++t) {
        const int d = rep.times[t].day - first;
        for (std::size_t s = 0; s < rep.strategies.size(); ++s) {
            if (rep.strategies[s] == Strategy::Oracle) continue;
            if (d <= poison + 1) {
                CHECK(rep.offers[s][t] == base.offers[s][t]);
                ++compared;
            } else if (rep.offers[s][t] != base.offers[s][t]) {
                ++changed;
            }
        }
    }
    CHECK(compared == 12u * 24u * 6u);
    CHECK(changed > 0);
}

TEST_CASE("cross-validation") {
    const auto recs = small_market();
    BacktestPlan p = small_plan();
    p.m_grid = {10};
    p.rho_grid = {0.2};
    p.eps_grid = {0.15};
    p.theta_grid = {0.5};
    const auto single = cross_validate(recs, p);
    CHECK(single.m == 10);
    CHECK(single.rho == 0.2);
    CHECK(single.eps_uniform == 0.15);
    CHECK(single.eps_level_adjusted == 0.15);
    CHECK(single.theta == 0.5);

    // Perfect point forecasts: every offer equals the realization, so every
    // grid point ties and the first one is kept.
    auto perfect = recs;
    for (auto& r : perfect) r.forecast = PredictiveCdf::heaviside(r.omega_star);
    const auto tie = cross_validate(perfect, small_plan());
    CHECK(tie.m == 5);
    CHECK(tie.rho == 0.0);
    CHECK(tie.eps_uniform == 0.0);
    CHECK(tie.eps_level_adjusted == 0.0);
    CHECK(tie.theta == 0.0);

    BacktestPlan fixed = small_plan();
    fixed.cv_mode = CvMode::FixedWindow;
    const auto rep = run_backtest(recs, fixed);
    REQUIRE(rep.choices.size() == 1);
    const auto chosen = cross_validate(recs, fixed);
    CHECK(rep.choices[0].params.m == chosen.m);
    CHECK(rep.choices[0].params.eps_uniform == chosen.eps_uniform);
    const auto again = run_backtest(recs, fixed, chosen);
    for (std::size_t s = 0; s < rep.strategies.size(); ++s) CHECK(again.offers[s] == rep.offers[s]);
}

TEST_CASE("thread count does not change the report") {
    const auto recs = small_market();
    BacktestPlan p = small_plan();
    const auto a = run_backtest(recs, p);
    p.threads = 4;
    const auto b = run_backtest(recs, p);
    for (std::size_t s = 0; s < a.strategies.size(); ++s) CHECK(a.revenues[s] == b.revenues[s]);
    CHECK(report_json(a).dump() == report_json(b).dump());
}

TEST_CASE("scaled penalties with fixed parameters scale the revenue gaps") {
    const auto recs = small_market();
    const ChosenParameters params{20, 0.2, 0.1, 0.15, 0.5};
    const auto base = run_backtest(recs, small_plan(), params);
    const auto tripled = run_backtest(scale_penalties(recs, 3.0), small_plan(), params);
    const auto bn = index_of(base, Strategy::BN);
    for (std::size_t s = 0; s < base.strategies.size(); ++s) {
        CHECK(tripled.offers[s] == base.offers[s]);
        const double gap = base.rows[s].cumulative_delta_regret.back();
        CHECK(tripled.rows[s].cumulative_delta_regret.back() == doctest::Approx(3.0 * gap).epsilon(1e-9));
    }
    CHECK(base.rows[bn].cumulative_delta_regret.back() == 0.0);
}
