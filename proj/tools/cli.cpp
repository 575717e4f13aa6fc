#include "drnv/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "drnv/ambiguity.hpp"
#include "drnv/backtest.hpp"
#include "drnv/errors.hpp"
#include "drnv/market.hpp"
#include "drnv/montecarlo.hpp"
#include "drnv/solvers.hpp"

namespace drnv {

namespace {

namespace fs = std::filesystem;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double parse_number(const std::string& text, const std::string& what) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size()) throw UsageError("bad number '" + text + "' in " + what);
    return v;
}

std::string fmt(double v, int precision = 10) {
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

struct Common {
    std::uint64_t seed = 2023;
    std::string output = "json";
    std::string out_path;
    unsigned threads = 1;
};

void add_common(CLI::App* sub, Common& c) {
    sub->add_option("--config", "key = value file mirroring the flags of this command");
    sub->add_option("--seed", c.seed, "master seed")->capture_default_str();
    sub->add_option("--output", c.output, "artifact format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    sub->add_option("--out", c.out_path, "artifact file (stdout when omitted)");
    sub->add_option("--threads", c.threads, "worker cap, 0 = all cores")->capture_default_str();
}

struct Artifact {
    std::string body;
    std::string summary;
};

void emit(const Common& c, const Artifact& a, std::ostream& out, std::ostream& err) {
    if (c.out_path.empty()) {
        out << a.body;
        err << a.summary << '\n';
    } else {
        write_file_atomic(c.out_path, a.body);
        out << a.summary << '\n';
    }
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

// ---------------------------------------------------------------- solve

struct SolveArgs {
    std::string strategy = "direct";
    std::string dist = "uniform";
    double tau = 0.5;
    double rho = 0.0;
    double eps = 0.0;
    std::string ball = "uniform";
    double theta = 0.0;
};

Artifact solve(const SolveArgs& a, const Common& c) {
    const PredictiveCdf f = parse_dist_spec(a.dist);
    OfferDecision d;
    if (a.strategy == "direct")
        d = solve_direct(f, a.tau);
    else if (a.strategy == "dr-omega")
        d = solve_dr_omega(f, a.tau, a.rho);
    else if (a.strategy == "dr-s")
        d = solve_dr_s(f, make_bernoulli_ball(a.tau, a.eps, parse_ball_kind(a.ball), a.theta));
    else if (a.strategy == "robust-omega")
        d = solve_robust_omega(a.tau);
    else
        d = solve_robust_s(f);

    Artifact art;
    art.summary = "y*=" + fmt(d.y_star) + " (" + to_string(d.method) + ", " + f.describe() + ")";
    if (c.output == "json") {
        nlohmann::json j = {{"strategy", to_string(d.method)}, {"dist", f.describe()}, {"tau", a.tau},
                            {"y_star", d.y_star},          {"diagnostics", d.diagnostics}};
        if (a.strategy == "dr-omega") j["rho"] = a.rho;
        if (a.strategy == "dr-s") j["ball"] = {{"kind", a.ball}, {"epsilon", a.eps}, {"theta", a.theta}};
        art.body = dump(j);
    } else {
        std::ostringstream s;
        s << std::setprecision(17) << "key,value\nstrategy," << to_string(d.method) << "\ny_star," << d.y_star << '\n';
        for (const auto& [k, v] : d.diagnostics) s << k << ',' << v << '\n';
        art.body = s.str();
    }
    return art;
}

// ---------------------------------------------------------------- deform

struct DeformArgs {
    std::string dist = "uniform";
    double rho = 0.0;
    std::size_t grid = 101;
};

Artifact deform(const DeformArgs& a, const Common& c) {
    if (a.grid < 2) throw UsageError("--grid needs at least 2 points");
    const PredictiveCdf f = parse_dist_spec(a.dist);
    const FsdAmbiguitySet set = make_fsd_set(f, a.rho);
    std::vector<double> x, ref, up, lo;
    for (std::size_t i = 0; i < a.grid; ++i) {
        const double v = static_cast<double>(i) / static_cast<double>(a.grid - 1);
        x.push_back(v);
        ref.push_back(f.cdf(v));
        up.push_back(set.upper.cdf(v));
        lo.push_back(set.lower.cdf(v));
    }
    Artifact art;
    art.summary = "deformed " + f.describe() + " at rho=" + fmt(a.rho) + " on " + std::to_string(a.grid) + " points";
    if (c.output == "json") {
        art.body = dump({{"dist", f.describe()}, {"rho", a.rho}, {"x", x}, {"reference", ref}, {"upper", up}, {"lower", lo}});
    } else {
        std::ostringstream s;
        s << std::setprecision(17) << "x,reference,upper,lower\n";
        for (std::size_t i = 0; i < x.size(); ++i) s << x[i] << ',' << ref[i] << ',' << up[i] << ',' << lo[i] << '\n';
        art.body = s.str();
    }
    return art;
}

// ---------------------------------------------------------------- simulate / msweep

struct SimArgs {
    std::string dist = "beta:2,6";
    double tau = 0.75;
    std::size_t m = 10;
    std::size_t n = 1'000'000;
    double theta = 0.9;
    double eps_step = 0.01;
    double eps_max = 1.0;
    bool exact = false;
    std::vector<std::size_t> m_values;
};

void add_sim_options(CLI::App* sub, SimArgs& a) {
    sub->add_option("--dist", a.dist, "true generation distribution")->capture_default_str();
    sub->add_option("--tau", a.tau, "true chance of success")->capture_default_str();
    sub->add_option("--n", a.n, "replicates")->capture_default_str();
    sub->add_option("--theta", a.theta, "level-adjusted ball shape")->capture_default_str();
    sub->add_option("--eps-step", a.eps_step, "epsilon grid step")->capture_default_str();
    sub->add_option("--eps-max", a.eps_max, "epsilon grid upper end")->capture_default_str();
    sub->add_flag("--exact", a.exact, "binomial expectation instead of sampling");
}

SimConfig sim_config(const SimArgs& a, const Common& c) {
    SimConfig cfg;
    cfg.true_dist = parse_dist_spec(a.dist);
    cfg.true_tau = a.tau;
    cfg.m = a.m;
    cfg.replicates = a.n;
    cfg.theta = a.theta;
    cfg.epsilons = epsilon_grid(a.eps_step, a.eps_max);
    cfg.master_seed = c.seed;
    cfg.threads = c.threads;
    return cfg;
}

Artifact simulate(const SimArgs& a, const Common& c) {
    const SimConfig cfg = sim_config(a, c);
    const SimResult r = a.exact ? epsilon_sweep_exact(cfg) : run_epsilon_sweep(cfg);
    Artifact art;
    art.summary = "gamma_u=" + fmt(r.gamma_u, 6) + " gamma_la=" + fmt(r.gamma_la, 6) + " (m=" + std::to_string(cfg.m) +
                  (a.exact ? ", exact)" : ", n=" + std::to_string(cfg.replicates) + ")");
    if (c.output == "json") {
        nlohmann::json j = sweep_summary_json(cfg, r);
        j["mode"] = a.exact ? "exact" : "monte-carlo";
        art.body = dump(j);
    } else {
        std::ostringstream s;
        write_sweep_csv(s, r);
        art.body = s.str();
    }
    return art;
}

Artifact msweep(const SimArgs& a, const Common& c) {
    std::vector<std::size_t> ms = a.m_values;
    if (ms.empty())
        for (std::size_t m = 1; m <= 75; ++m) ms.push_back(m);
    const SimConfig cfg = sim_config(a, c);
    std::vector<MSweepPoint> pts;
    if (a.exact) {
        for (auto m : ms) {
            SimConfig one = cfg;
            one.m = m;
            const SimResult r = epsilon_sweep_exact(one);
            pts.push_back({m, r.gamma_u, r.gamma_la, 0.0, r.epsilons[r.best_uniform], r.epsilons[r.best_level_adjusted]});
        }
    } else {
        pts = run_m_sweep(cfg, ms);
    }
    std::size_t la_ahead = 0;
    for (const auto& p : pts) la_ahead += p.gamma_la >= p.gamma_u;
    Artifact art;
    art.summary = std::to_string(pts.size()) + " m values, gamma_la >= gamma_u at " + std::to_string(la_ahead) +
                  "; last m=" + std::to_string(pts.back().m) + " gamma_u=" + fmt(pts.back().gamma_u, 6) +
                  " gamma_la=" + fmt(pts.back().gamma_la, 6);
    if (c.output == "json") {
        nlohmann::json j = msweep_summary_json(cfg, pts);
        j["mode"] = a.exact ? "exact" : "monte-carlo";
        art.body = dump(j);
    } else {
        std::ostringstream s;
        write_msweep_csv(s, pts);
        art.body = s.str();
    }
    return art;
}

// ---------------------------------------------------------------- backtest / crossval

struct DataArgs {
    std::string market;
    std::string forecasts;
    bool synthetic = false;
    int synthetic_days = 731;
    bool strict = false;
    double penalty_factor = 1.0;
};

struct PlanArgs {
    std::size_t tau_window = 91;
    std::size_t cv_days = 40;
    std::size_t lag = 2;
    std::string cv_mode = "sliding";
    std::vector<std::size_t> m_grid{30, 60, 90};
    double rho_step = 0.02, rho_max = 0.5;
    double eps_step = 0.01, eps_max = 0.3;
    std::vector<double> theta_grid{0.0, 0.3, 0.6, 0.9};
    std::vector<std::string> strategies;
};

void add_data_options(CLI::App* sub, DataArgs& d, PlanArgs& p) {
    sub->add_option("--market", d.market, "market CSV (timestamp,pi_s,pi_b,s_L,omega_star)");
    sub->add_option("--forecasts", d.forecasts, "directory of hourly quantile forecasts");
    sub->add_flag("--synthetic", d.synthetic, "generate the synthetic market from --seed instead of reading files");
    sub->add_option("--synthetic-days", d.synthetic_days, "length of the synthetic market")->capture_default_str();
    sub->add_flag("--strict", d.strict, "fail on missing hours or forecast files");
    sub->add_option("--penalty-factor", d.penalty_factor, "scale balancing spreads by this factor")->capture_default_str();
    sub->add_option("--tau-window", p.tau_window, "days used to estimate tau")->capture_default_str();
    sub->add_option("--cv-days", p.cv_days, "cross-validation window in days")->capture_default_str();
    sub->add_option("--lag", p.lag, "days between an outcome and its first use")->capture_default_str();
    sub->add_option("--cv-mode", p.cv_mode, "parameter refresh")->check(CLI::IsMember({"sliding", "fixed"}))->capture_default_str();
    sub->add_option("--m-grid", p.m_grid, "tau window candidates (days)")->delimiter(',')->capture_default_str();
    sub->add_option("--rho-step", p.rho_step)->capture_default_str();
    sub->add_option("--rho-max", p.rho_max)->capture_default_str();
    sub->add_option("--eps-step", p.eps_step)->capture_default_str();
    sub->add_option("--eps-max", p.eps_max)->capture_default_str();
    sub->add_option("--theta-grid", p.theta_grid)->delimiter(',')->capture_default_str();
    sub->add_option("--strategies", p.strategies, "subset of oracle,bn,dr-omega,dr-s-uniform,dr-s-level-adjusted,robust-s,robust-omega")
        ->delimiter(',');
}

BacktestPlan make_plan(const PlanArgs& a, const Common& c) {
    BacktestPlan p;
    p.tau_window_days = a.tau_window;
    p.cv_days = a.cv_days;
    p.warm_start_days = a.tau_window + a.cv_days;
    p.lag_days = a.lag;
    p.cv_mode = parse_cv_mode(a.cv_mode);
    p.m_grid = a.m_grid;
    p.rho_grid = epsilon_grid(a.rho_step, a.rho_max);
    p.eps_grid = epsilon_grid(a.eps_step, a.eps_max);
    p.theta_grid = a.theta_grid;
    if (!a.strategies.empty()) {
        p.strategies.clear();
        for (const auto& s : a.strategies) p.strategies.push_back(parse_strategy(s));
    }
    p.threads = c.threads;
    validate(p);
    return p;
}

MarketData load_data(const DataArgs& d, const Common& c) {
    MarketData data;
    if (d.synthetic == !d.market.empty()) throw UsageError("give exactly one of --market or --synthetic");
    if (d.synthetic) {
        SyntheticMarketConfig cfg;
        cfg.days = d.synthetic_days;
        cfg.seed = c.seed;
        cfg.threads = c.threads;
        data.records = generate_synthetic_market(cfg);
    } else {
        data = load_market_data(d.market, d.forecasts, {.strict = d.strict});
    }
    if (d.penalty_factor != 1.0) data.records = scale_penalties(data.records, d.penalty_factor);
    return data;
}

Artifact backtest(const DataArgs& d, const PlanArgs& pa, const Common& c, std::ostream& err) {
    const BacktestPlan plan = make_plan(pa, c);
    MarketData data = load_data(d, c);
    for (const auto& w : data.warnings) err << "warning: " << w << '\n';
    BacktestReport rep = run_backtest(data.records, plan);
    rep.warnings = data.warnings;

    Artifact art;
    std::ostringstream s;
    s << "evaluated " << rep.times.size() << " hours; regret per MWh:";
    for (const auto& row : rep.rows) s << ' ' << row.name << '=' << fmt(row.regret_per_mwh, 6);
    art.summary = s.str();
    if (c.output == "json") {
        art.body = dump(report_json(rep));
    } else {
        std::ostringstream csv;
        write_report_csv(csv, rep);
        art.body = csv.str();
    }
    return art;
}

Artifact crossval(const DataArgs& d, const PlanArgs& pa, const Common& c, std::ostream& err) {
    const BacktestPlan plan = make_plan(pa, c);
    const MarketData data = load_data(d, c);
    for (const auto& w : data.warnings) err << "warning: " << w << '\n';
    const BacktestEngine engine(data.records, plan);
    const int start = static_cast<int>(plan.warm_start_days);
    const int stop = plan.cv_mode == CvMode::Sliding ? engine.days() : start + 1;
    std::vector<DayChoice> choices;
    for (int day = start; day < stop; ++day) choices.push_back({{engine.first_day() + day, 0}, engine.choose(day)});

    Artifact art;
    const auto& first = choices.front().params;
    art.summary = std::to_string(choices.size()) + " day(s) cross-validated; first: m=" + std::to_string(first.m) +
                  " rho=" + fmt(first.rho) + " eps_u=" + fmt(first.eps_uniform) +
                  " eps_la=" + fmt(first.eps_level_adjusted) + " theta=" + fmt(first.theta);
    if (c.output == "json") {
        nlohmann::json rows = nlohmann::json::array();
        for (const auto& ch : choices) {
            auto j = to_json(ch.params);
            j["day"] = format_hour_stamp(ch.day).substr(0, 10);
            rows.push_back(j);
        }
        art.body = dump({{"cv_mode", to_string(plan.cv_mode)}, {"cv_days", plan.cv_days}, {"lag_days", plan.lag_days},
                         {"choices", rows}, {"warnings", data.warnings}});
    } else {
        std::ostringstream s;
        s << std::setprecision(17) << "day,m,rho,eps_uniform,eps_level_adjusted,theta\n";
        for (const auto& ch : choices)
            s << format_hour_stamp(ch.day).substr(0, 10) << ',' << ch.params.m << ',' << ch.params.rho << ','
              << ch.params.eps_uniform << ',' << ch.params.eps_level_adjusted << ',' << ch.params.theta << '\n';
        art.body = s.str();
    }
    return art;
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
    std::string dir;
    SyntheticMarketConfig cfg;
};

Artifact synth(SynthArgs a, const Common& c) {
    a.cfg.seed = c.seed;
    a.cfg.threads = c.threads;
    const auto recs = generate_synthetic_market(a.cfg);
    fs::create_directories(a.dir);
    std::ostringstream csv;
    write_market_csv(csv, recs);
    const std::string market = (fs::path(a.dir) / "market.csv").string();
    const std::string forecasts = (fs::path(a.dir) / "forecasts").string();
    write_file_atomic(market, csv.str());
    write_forecast_dir(forecasts, recs, standard_quantile_levels());

    Artifact art;
    art.summary = "wrote " + std::to_string(recs.size()) + " hours to " + market + " and " + forecasts;
    const nlohmann::json j = {{"market", market},
                              {"forecasts", forecasts},
                              {"hours", recs.size()},
                              {"first", format_hour_stamp(recs.front().time)},
                              {"last", format_hour_stamp(recs.back().time)},
                              {"seed", c.seed},
                              {"tau", a.cfg.tau},
                              {"penalty_ratio", a.cfg.penalty_ratio}};
    if (c.output == "json") {
        art.body = dump(j);
    } else {
        std::ostringstream s;
        s << "key,value\n";
        for (const auto& [k, v] : j.items()) s << k << ',' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
        art.body = s.str();
    }
    return art;
}

// Config entries become `--key=value` arguments placed before the command
// line ones; keys already given on the command line are skipped.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
    std::vector<std::string> kept;
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
        } else {
            kept.push_back(args[i]);
        }
    }
    if (path.empty() || kept.empty()) return kept;
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read config file " + path);
    auto given = [&](const std::string& flag) {
        for (const auto& a : kept)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::vector<std::string> from_file;
    for (const auto& item : CLI::ConfigTOML().from_config(in)) {
        if (item.name == "++" || item.name == "--" || !item.parents.empty()) continue;
        const std::string flag = "--" + item.name;
        if (flag == "--config" || given(flag)) continue;
        std::string value;
        for (std::size_t k = 0; k < item.inputs.size(); ++k) value += (k ? "," : "") + item.inputs[k];
        from_file.push_back(flag + "=" + value);
    }
    kept.insert(kept.begin() + 1, from_file.begin(), from_file.end());
    return kept;
}

}  // namespace

PredictiveCdf parse_dist_spec(const std::string& text) {
    const auto colon = text.find(':');
    const std::string name = text.substr(0, colon);
    std::vector<double> params;
    if (colon != std::string::npos) {
        std::stringstream s(text.substr(colon + 1));
        std::string item;
        while (std::getline(s, item, ',')) params.push_back(parse_number(item, "--dist " + text));
    }
    auto expect = [&](std::size_t n) {
        if (params.size() != n)
            throw UsageError("--dist " + name + " takes " + std::to_string(n) + " parameter(s), got " +
                             std::to_string(params.size()));
    };
    if (name == "uniform") {
        expect(0);
        return PredictiveCdf::uniform();
    }
    if (name == "beta") {
        expect(2);
        return PredictiveCdf::beta(params[0], params[1]);
    }
    if (name == "point") {
        expect(1);
        return PredictiveCdf::heaviside(params[0]);
    }
    if (fs::is_regular_file(text)) return read_quantile_csv(text);
    throw UsageError("unknown distribution '" + text + "' (uniform, beta:a,b, point:x or a quantile CSV file)");
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw DataError("cannot write " + tmp.string());
        f << content;
        f.flush();
        if (!f) throw DataError("write failed: " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw DataError("cannot move " + tmp.string() + " to " + path + ": " + ec.message());
    }
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Bernoulli newsvendor offers, robust variants, simulations and market backtests", "drnv"};
    app.require_subcommand(1);

    Common common;
    std::function<Artifact()> action;

    SolveArgs sa;
    auto* s = app.add_subcommand("solve", "optimal offer for one forecast");
    add_common(s, common);
    s->add_option("--strategy", sa.strategy)
        ->check(CLI::IsMember({"direct", "dr-omega", "dr-s", "robust-omega", "robust-s"}))
        ->capture_default_str();
    s->add_option("--dist", sa.dist, "uniform, beta:a,b, point:x or a quantile CSV")->capture_default_str();
    s->add_option("--tau", sa.tau, "estimated chance of success")->capture_default_str();
    s->add_option("--rho", sa.rho, "FSD band radius (dr-omega)")->capture_default_str();
    s->add_option("--eps", sa.eps, "ball radius (dr-s)")->capture_default_str();
    s->add_option("--ball", sa.ball)->check(CLI::IsMember({"uniform", "level-adjusted"}))->capture_default_str();
    s->add_option("--theta", sa.theta, "level-adjusted ball shape")->capture_default_str();
    s->callback([&] { action = [&] { return solve(sa, common); }; });

    DeformArgs da;
    auto* d = app.add_subcommand("deform", "FSD band around a forecast");
    add_common(d, common);
    d->add_option("--dist", da.dist)->capture_default_str();
    d->add_option("--rho", da.rho)->capture_default_str();
    d->add_option("--grid", da.grid, "evaluation points on [0,1]")->capture_default_str();
    d->callback([&] { action = [&] { return deform(da, common); }; });

    SimArgs sim;
    auto* si = app.add_subcommand("simulate", "epsilon sweep for one m");
    add_common(si, common);
    add_sim_options(si, sim);
    si->add_option("--m", sim.m, "Bernoulli draws per replicate")->capture_default_str();
    si->callback([&] { action = [&] { return simulate(sim, common); }; });

    SimArgs ms;
    auto* mw = app.add_subcommand("msweep", "gamma across m");
    add_common(mw, common);
    add_sim_options(mw, ms);
    mw->add_option("--m-values", ms.m_values, "comma-separated m list (default 1..75)")->delimiter(',');
    mw->callback([&] { action = [&] { return msweep(ms, common); }; });

    DataArgs bd;
    PlanArgs bp;
    auto* b = app.add_subcommand("backtest", "cross-validated out-of-sample backtest");
    add_common(b, common);
    add_data_options(b, bd, bp);
    b->callback([&] { action = [&] { return backtest(bd, bp, common, err); }; });

    DataArgs cd;
    PlanArgs cp;
    auto* cv = app.add_subcommand("crossval", "parameters chosen by cross-validation");
    add_common(cv, common);
    add_data_options(cv, cd, cp);
    cv->callback([&] { action = [&] { return crossval(cd, cp, common, err); }; });

    SynthArgs sy;
    auto* y = app.add_subcommand("synth", "write a synthetic market and its forecast files");
    add_common(y, common);
    y->add_option("--dir", sy.dir, "output directory")->required();
    y->add_option("--days", sy.cfg.days)->capture_default_str();
    y->add_option("--start", sy.cfg.start_date)->capture_default_str();
    y->add_option("--tau", sy.cfg.tau, "chance of a long system")->capture_default_str();
    y->add_option("--penalty-ratio", sy.cfg.penalty_ratio, "mean spread over pi_s")->capture_default_str();
    y->add_option("--no-balancing-share", sy.cfg.no_balancing_share)->capture_default_str();
    y->add_option("--wrong-sign-share", sy.cfg.wrong_sign_share)->capture_default_str();
    y->add_option("--concentration", sy.cfg.concentration, "a + b of the hourly Beta")->capture_default_str();
    y->callback([&] { action = [&] { return synth(sy, common); }; });

    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        args = expand_config(args);
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        emit(common, action(), out, err);
        return 0;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return 2;
    } catch (const DomainError& e) {
        err << "error: domain: " << e.what() << '\n';
    } catch (const DataError& e) {
        err << "error: data: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
    }
    return 1;
}

}  // namespace drnv
