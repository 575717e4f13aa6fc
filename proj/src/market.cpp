#include "drnv/market.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <random>
#include <sstream>

#include "drnv/errors.hpp"
#include "drnv/parallel.hpp"
#include "drnv/rng.hpp"

namespace drnv {

namespace {

namespace chr = std::chrono;

int parse_int(std::string_view s, std::size_t pos, std::size_t len, const std::string& text) {
    int v = 0;
    if (pos + len > s.size()) throw DataError("malformed timestamp '" + text + "'");
    const auto r = std::from_chars(s.data() + pos, s.data() + pos + len, v);
    if (r.ec != std::errc{} || r.ptr != s.data() + pos + len) throw DataError("malformed timestamp '" + text + "'");
    return v;
}

int days_from_date(int y, int m, int d, const std::string& text) {
    const chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)}, chr::day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) throw DataError("invalid date in '" + text + "'");
    return static_cast<int>(chr::sys_days{ymd}.time_since_epoch().count());
}

std::string date_string(int day) {
    const chr::year_month_day ymd{chr::sys_days{chr::days{day}}};
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                  static_cast<unsigned>(ymd.day()));
    return buf;
}

double parse_field(std::string_view field, std::size_t row, const char* column, const std::string& source) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r')) field.remove_suffix(1);
    double v = 0.0;
    const auto r = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || r.ec != std::errc{} || r.ptr != field.data() + field.size() || !std::isfinite(v))
        throw DataError(source + ": row " + std::to_string(row) + ", column " + column + ": expected a number, got '" +
                        std::string(field) + "'");
    return v;
}

std::vector<std::string_view> split_commas(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (;;) {
        const auto comma = line.find(',', start);
        out.push_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

constexpr const char* kMarketHeader = "timestamp,pi_s,pi_b,s_L,omega_star";

}  // namespace

HourStamp parse_hour_stamp(const std::string& text) {
    std::string_view s = text;
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.remove_suffix(1);
    if (!s.empty() && s.back() == 'Z') s.remove_suffix(1);
    if (s.size() < 13 || s[4] != '-' || s[7] != '-' || (s[10] != 'T' && s[10] != ' '))
        throw DataError("malformed timestamp '" + text + "', expected YYYY-MM-DDTHH[:MM[:SS]]");
    const int y = parse_int(s, 0, 4, text), mo = parse_int(s, 5, 2, text), d = parse_int(s, 8, 2, text);
    const int h = parse_int(s, 11, 2, text);
    if (h < 0 || h > 23) throw DataError("hour out of range in '" + text + "'");
    if (s.size() > 13) {
        if (s.size() != 16 && s.size() != 19) throw DataError("malformed timestamp '" + text + "'");
        if (s[13] != ':' || parse_int(s, 14, 2, text) != 0) throw DataError("timestamp '" + text + "' is not on the hour");
        if (s.size() == 19 && (s[16] != ':' || parse_int(s, 17, 2, text) != 0))
            throw DataError("timestamp '" + text + "' is not on the hour");
    }
    return {days_from_date(y, mo, d, text), h};
}

std::string format_hour_stamp(const HourStamp& t) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "T%02d:00", t.hour);
    return date_string(t.day) + buf;
}

std::string forecast_file_stem(const HourStamp& t) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "T%02d", t.hour);
    return date_string(t.day) + buf;
}

MarketData parse_market_csv(std::istream& in, const std::string& source, const LoadOptions& options) {
    MarketData data;
    std::string line;
    if (!std::getline(in, line)) throw DataError(source + ": empty market file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kMarketHeader)
        throw DataError(source + ": row 1: expected header '" + std::string(kMarketHeader) + "', got '" + line + "'");
    static const char* columns[] = {"timestamp", "pi_s", "pi_b", "s_L", "omega_star"};
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_commas(line);
        if (fields.size() != 5)
            throw DataError(source + ": row " + std::to_string(row) + ": expected 5 columns, got " +
                            std::to_string(fields.size()));
        MarketRecord rec;
        try {
            rec.time = parse_hour_stamp(std::string(fields[0]));
        } catch (const DataError& e) {
            throw DataError(source + ": row " + std::to_string(row) + ", column timestamp: " + e.what());
        }
        rec.pi_s = parse_field(fields[1], row, columns[1], source);
        rec.pi_b = parse_field(fields[2], row, columns[2], source);
        rec.s_L = parse_field(fields[3], row, columns[3], source);
        rec.omega_star = parse_field(fields[4], row, columns[4], source);
        if (rec.omega_star < 0.0 || rec.omega_star > 1.0)
            throw DataError(source + ": row " + std::to_string(row) +
                            ", column omega_star: generation must be a capacity fraction in [0,1]");
        if (!data.records.empty()) {
            const HourStamp prev = data.records.back().time;
            if (!(prev < rec.time))
                throw DataError(source + ": row " + std::to_string(row) + ", column timestamp: " +
                                format_hour_stamp(rec.time) + " does not follow " + format_hour_stamp(prev));
            const long gap = (rec.time.day - prev.day) * 24L + (rec.time.hour - prev.hour) - 1;
            if (gap > 0) {
                const std::string msg = source + ": " + std::to_string(gap) + " missing hour(s) between " +
                                        format_hour_stamp(prev) + " and " + format_hour_stamp(rec.time);
                if (options.strict) throw DataError(msg);
                data.warnings.push_back(msg);
            }
        }
        data.records.push_back(std::move(rec));
    }
    if (data.records.empty()) throw DataError(source + ": market file has a header but no rows");
    return data;
}

MarketData load_market_data(const std::string& market_csv, const std::string& forecast_dir,
                            const LoadOptions& options) {
    std::ifstream in(market_csv);
    if (!in) throw DataError("cannot open market file '" + market_csv + "'");
    MarketData data = parse_market_csv(in, market_csv, options);
    if (forecast_dir.empty()) return data;

    namespace fs = std::filesystem;
    if (!fs::is_directory(forecast_dir)) throw DataError("forecast directory '" + forecast_dir + "' not found");
    std::vector<MarketRecord> kept;
    kept.reserve(data.records.size());
    for (auto& rec : data.records) {
        const fs::path path = fs::path(forecast_dir) / (forecast_file_stem(rec.time) + ".csv");
        if (!fs::exists(path)) {
            const std::string msg = "no forecast file " + path.string() + "; hour dropped";
            if (options.strict) throw DataError(msg);
            data.warnings.push_back(msg);
            continue;
        }
        rec.forecast = read_quantile_csv(path.string());
        kept.push_back(std::move(rec));
    }
    if (kept.empty()) throw DataError("no market hour has a forecast file in '" + forecast_dir + "'");
    data.records = std::move(kept);
    return data;
}

void write_market_csv(std::ostream& out, const std::vector<MarketRecord>& records) {
    out << kMarketHeader << '\n' << std::setprecision(17);
    for (const auto& r : records)
        out << format_hour_stamp(r.time) << ',' << r.pi_s << ',' << r.pi_b << ',' << r.s_L << ',' << r.omega_star
            << '\n';
}

void write_forecast_dir(const std::string& dir, const std::vector<MarketRecord>& records,
                        const std::vector<double>& levels) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    for (const auto& r : records) {
        std::vector<double> ps, xs;
        if (r.forecast.kind() == CdfKind::PiecewiseLinear) {
            // Knots without the (0,0) and (1,1) anchors, so a reload is exact.
            ps = r.forecast.knot_levels();
            xs = r.forecast.knot_values();
            ps = {ps.begin() + 1, ps.end() - 1};
            xs = {xs.begin() + 1, xs.end() - 1};
        } else {
            ps = levels;
            for (double p : levels) xs.push_back(r.forecast.quantile(p));
        }
        std::ofstream out(fs::path(dir) / (forecast_file_stem(r.time) + ".csv"));
        if (!out) throw DataError("cannot write forecast files under '" + dir + "'");
        write_quantile_csv(out, ps, xs);
    }
}

std::vector<MarketRecord> generate_synthetic_market(const SyntheticMarketConfig& c) {
    if (c.days < 1) throw DomainError("synthetic market needs at least one day");
    if (!(c.tau >= 0.0 && c.tau <= 1.0)) throw DomainError("tau must lie in [0,1]");
    if (!(c.penalty_ratio > 0.0 && c.penalty_ratio < 1.0)) throw DomainError("penalty ratio must lie in (0,1)");
    if (!(c.no_balancing_share >= 0.0 && c.wrong_sign_share >= 0.0 && c.no_balancing_share + c.wrong_sign_share < 1.0))
        throw DomainError("no-balancing and wrong-sign shares must be non-negative and sum below 1");
    if (!(c.concentration > 0.0)) throw DomainError("concentration must be positive");

    const int first_day = parse_hour_stamp(c.start_date + "T00").day;
    const auto levels = standard_quantile_levels();
    constexpr double two_pi = 2.0 * std::numbers::pi;

    std::vector<MarketRecord> records(static_cast<std::size_t>(c.days) * 24);
    parallel_for(static_cast<std::size_t>(c.days), c.threads, [&](std::size_t day) {
        const int d = static_cast<int>(day);
        RngStream rng(c.seed, day);
        std::normal_distribution<double> normal;
        std::exponential_distribution<double> spread(1.0 / c.penalty_ratio);
        const double season = std::sin(two_pi * d / 365.25);
        const double weather = normal(rng);
        for (int h = 0; h < 24; ++h) {
            MarketRecord rec;
            rec.time = {first_day + d, h};

            const double mu =
                std::clamp(0.25 + 0.08 * season + 0.04 * std::cos(two_pi * h / 24.0) + 0.06 * weather, 0.05, 0.7);
            const double a = mu * c.concentration, b = (1.0 - mu) * c.concentration;
            std::gamma_distribution<double> ga(a), gb(b);
            const double x = ga(rng), y = gb(rng);
            rec.omega_star = (x + y) > 0.0 ? x / (x + y) : mu;
            const auto beta = PredictiveCdf::beta(a, b);
            rec.forecast = c.quantile_forecasts ? summarize_quantiles(beta, levels) : beta;

            rec.pi_s = std::max(5.0, 45.0 + 12.0 * std::sin(two_pi * (h - 8) / 24.0) + 8.0 * std::sin(two_pi * d / 365.25 + 1.0) +
                                         6.0 * normal(rng));
            const bool is_long = rng.bernoulli(c.tau);
            rec.s_L = (is_long ? 1.0 : -1.0) * (50.0 + 950.0 * rng.uniform());
            const double k = std::min(spread(rng), 0.95);
            const double u = rng.uniform();
            double sign = is_long ? -1.0 : 1.0;  // pi_b below pi_s in a long system
            if (u < c.no_balancing_share)
                sign = 0.0;
            else if (u < c.no_balancing_share + c.wrong_sign_share)
                sign = -sign;
            rec.pi_b = rec.pi_s * (1.0 + sign * k);
            records[day * 24 + static_cast<std::size_t>(h)] = std::move(rec);
        }
    });
    return records;
}

std::vector<MarketRecord> scale_penalties(const std::vector<MarketRecord>& records, double factor) {
    if (!(factor > 0.0)) throw DomainError("penalty scaling factor must be positive");
    std::vector<MarketRecord> out = records;
    if (factor == 1.0) return out;
    for (auto& r : out) r.pi_b = r.pi_s + factor * (r.pi_b - r.pi_s);
    return out;
}

}  // namespace drnv
