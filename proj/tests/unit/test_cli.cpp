#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "drnv/cli.hpp"

using namespace drnv;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code;
    std::string out;
    std::string err;
};

Run run(std::vector<std::string> args) {
    args.insert(args.begin(), "drnv");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("drnv_cli_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

const std::vector<std::string> kSmallPlan{"--synthetic", "--synthetic-days", "60", "--tau-window", "20",
                                          "--cv-days",   "10",          "--m-grid",        "5,10", "--rho-step",
                                          "0.1",         "--eps-step",  "0.05",            "--theta-grid", "0,0.5"};

}  // namespace

TEST_CASE("solve examples") {
    auto r = run({"solve", "--strategy", "direct", "--dist", "uniform", "--tau", "0.75"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["y_star"] == 0.75);
    CHECK(r.err.find("y*=0.75") != std::string::npos);

    r = run({"solve", "--strategy", "dr-s", "--dist", "beta:2,6", "--tau", "0.75", "--eps", "1", "--ball", "uniform"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["y_star"].get<double>() == doctest::Approx(0.25).epsilon(1e-12));

    r = run({"solve", "--strategy", "robust-omega", "--tau", "0.3", "--output", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out.find("y_star,0.29999999999999999") != std::string::npos);
}

TEST_CASE("exit codes") {
    CHECK(run({}).code == 2);
    CHECK(run({"solve", "--no-such-flag"}).code == 2);
    CHECK(run({"solve", "--output", "xml"}).code == 2);
    CHECK(run({"solve", "--dist", "gamma:2"}).code == 2);
    CHECK(run({"solve", "--dist", "beta:2"}).code == 2);
    CHECK(run({"solve", "--tau", "abc"}).code == 2);
    CHECK(run({"solve", "--help"}).code == 0);

    const auto domain = run({"solve", "--tau", "1.5"});
    CHECK(domain.code == 1);
    CHECK(domain.err.find("error: domain:") == 0);
    const auto data = run({"backtest", "--market", "/nonexistent/market.csv"});
    CHECK(data.code == 1);
    CHECK(data.err.find("error: data:") == 0);
    CHECK(run({"backtest"}).code == 2);
    CHECK(run({"solve", "--config", "/nonexistent.ini"}).code == 2);
}

TEST_CASE("atomic output file and config file") {
    const auto dir = scratch("out");
    const auto target = dir / "sub" / "y.json";
    auto r = run({"solve", "--dist", "beta:2,6", "--tau", "0.75", "--out", target.string()});
    CHECK(r.code == 0);
    CHECK(r.out.find("y*=") == 0);
    CHECK(nlohmann::json::parse(slurp(target))["strategy"] == "direct");
    std::size_t files = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "sub")) ++files;
    CHECK(files == 1);

    {
        std::ofstream cfg(dir / "solve.ini");
        cfg << "# dr-omega at rho 0.3\nstrategy = dr-omega\ndist = \"beta:2,6\"\ntau = 0.75\nrho = 0.3\n";
    }
    r = run({"solve", "--config", (dir / "solve.ini").string()});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["y_star"].get<double>() == doctest::Approx(0.4007515500248336).epsilon(1e-12));
    r = run({"solve", "--config", (dir / "solve.ini").string(), "--rho", "0"});
    CHECK(nlohmann::json::parse(r.out)["y_star"].get<double>() ==
          doctest::Approx(nlohmann::json::parse(run({"solve", "--dist", "beta:2,6", "--tau", "0.75"}).out)["y_star"].get<double>()));
    fs::remove_all(dir);
}

TEST_CASE("quantile file as distribution") {
    const auto dir = scratch("dist");
    {
        std::ofstream f(dir / "q.csv");
        f << "level,value\n0.25,0.2\n0.5,0.4\n0.75,0.6\n";
    }
    const auto r = run({"solve", "--dist", (dir / "q.csv").string(), "--tau", "0.5"});
    CHECK(r.code == 0);
    CHECK(nlohmann::json::parse(r.out)["y_star"].get<double>() == doctest::Approx(0.4));
    CHECK(parse_dist_spec("point:0.3").quantile(0.9) == 0.3);
    fs::remove_all(dir);
}

TEST_CASE("deform") {
    const auto r = run({"deform", "--dist", "uniform", "--rho", "0.5", "--grid", "5", "--output", "csv"});
    CHECK(r.code == 0);
    CHECK(r.out.rfind("x,reference,upper,lower\n", 0) == 0);
    CHECK(std::count(r.out.begin(), r.out.end(), '\n') == 6);
    const auto j = nlohmann::json::parse(run({"deform", "--dist", "uniform", "--rho", "0.5", "--grid", "3"}).out);
    CHECK(j["upper"][1].get<double>() == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
    CHECK(j["lower"][1].get<double>() == doctest::Approx(1.0 - std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("simulate and msweep are reproducible across thread counts") {
    const std::vector<std::string> base{"simulate", "--n", "30000", "--m", "10", "--seed", "11"};
    auto with = [&](std::vector<std::string> extra) {
        auto a = base;
        a.insert(a.end(), extra.begin(), extra.end());
        return run(a);
    };
    const auto one = with({"--threads", "1"});
    const auto eight = with({"--threads", "8"});
    CHECK(one.code == 0);
    CHECK(one.out == eight.out);
    CHECK(with({"--seed", "12"}).out != one.out);
    const auto csv = with({"--output", "csv", "--eps-step", "0.1"});
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 1 + 11 * 5);

    const auto ms1 = run({"msweep", "--m-values", "1,5,20", "--n", "20000", "--threads", "1", "--output", "csv"});
    const auto ms8 = run({"msweep", "--m-values", "1,5,20", "--n", "20000", "--threads", "8", "--output", "csv"});
    CHECK(ms1.code == 0);
    CHECK(ms1.out == ms8.out);
    CHECK(std::count(ms1.out.begin(), ms1.out.end(), '\n') == 4);
    const auto exact = nlohmann::json::parse(run({"simulate", "--exact", "--m", "10"}).out);
    CHECK(exact["mode"] == "exact");
}

TEST_CASE("backtest, crossval and synth") {
    auto args = kSmallPlan;
    args.insert(args.begin(), "backtest");
    const auto a = run(args);
    REQUIRE(a.code == 0);
    args.insert(args.end(), {"--threads", "8"});
    const auto b = run(args);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j["evaluation"]["hours"] == 30 * 24);
    CHECK(j["plan"]["m_grid"] == nlohmann::json::array({5, 10}));

    auto cv = kSmallPlan;
    cv.insert(cv.begin(), "crossval");
    cv.insert(cv.end(), {"--cv-mode", "fixed", "--output", "csv"});
    const auto c = run(cv);
    CHECK(c.code == 0);
    CHECK(std::count(c.out.begin(), c.out.end(), '\n') == 2);

    const auto dir = scratch("synth");
    const auto s = run({"synth", "--dir", dir.string(), "--days", "40", "--seed", "5"});
    CHECK(s.code == 0);
    CHECK(fs::exists(dir / "market.csv"));
    CHECK(fs::exists(dir / "forecasts" / "2019-01-01T00.csv"));
    auto from_files = kSmallPlan;
    from_files.erase(from_files.begin(), from_files.begin() + 3);
    from_files.insert(from_files.begin(), {"backtest", "--market", (dir / "market.csv").string(), "--forecasts",
                                           (dir / "forecasts").string(), "--output", "csv"});
    const auto f = run(from_files);
    CHECK(f.code == 0);
    CHECK(f.out.rfind("timestamp,strategy,revenue,regret,cum_delta_regret\n", 0) == 0);
    fs::remove_all(dir);
}
