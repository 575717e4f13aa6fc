#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "drnv/dist.hpp"

namespace drnv {

/// Delivery hour: `day` counts days since 1970-01-01 (UTC), `hour` in 0..23.
struct HourStamp {
    int day = 0;
    int hour = 0;

    friend bool operator==(const HourStamp&, const HourStamp&) = default;
    friend auto operator<=>(const HourStamp&, const HourStamp&) = default;
};

/// Parses "YYYY-MM-DDTHH", "YYYY-MM-DDTHH:MM[:SS][Z]" or the same with a
/// space separator. Minutes and seconds must be zero.
HourStamp parse_hour_stamp(const std::string& text);
/// "YYYY-MM-DDTHH:00".
std::string format_hour_stamp(const HourStamp& t);
/// "YYYY-MM-DDTHH", the forecast file stem.
std::string forecast_file_stem(const HourStamp& t);

struct MarketRecord {
    HourStamp time;
    double pi_s = 0.0;
    double pi_b = 0.0;
    double s_L = 0.0;
    double omega_star = 0.0;
    PredictiveCdf forecast = PredictiveCdf::uniform();
};

struct MarketData {
    std::vector<MarketRecord> records;  // strictly increasing in time
    std::vector<std::string> warnings;
};

struct LoadOptions {
    /// Fail on gaps (missing hours or missing forecast files) instead of warning.
    bool strict = false;
};

/// Reads the market CSV (`timestamp,pi_s,pi_b,s_L,omega_star`) and, when
/// `forecast_dir` is non-empty, one `level,value` file per hour named
/// `YYYY-MM-DDTHH.csv`. Schema errors throw DataError naming row and column.
MarketData load_market_data(const std::string& market_csv, const std::string& forecast_dir = "",
                            const LoadOptions& options = {});
MarketData parse_market_csv(std::istream& in, const std::string& source = "<stream>",
                            const LoadOptions& options = {});

void write_market_csv(std::ostream& out, const std::vector<MarketRecord>& records);
/// Writes one quantile file per record at `levels`.
void write_forecast_dir(const std::string& dir, const std::vector<MarketRecord>& records,
                        const std::vector<double>& levels);

struct SyntheticMarketConfig {
    int days = 731;
    std::string start_date = "2019-01-01";
    double tau = 0.75;                   // chance of a long system
    double penalty_ratio = 0.135;        // mean |pi_b - pi_s| / pi_s on balanced hours
    double no_balancing_share = 0.02;    // hours with pi_b = pi_s
    double wrong_sign_share = 0.01;      // hours whose spread opposes the system direction
    double concentration = 8.0;          // a + b of the hourly generation Beta
    std::uint64_t seed = 2023;
    /// Store the 20-level quantile summary (as read back from disk) rather
    /// than the exact Beta forecast.
    bool quantile_forecasts = true;
    unsigned threads = 1;  // days are generated from independent streams
};

/// Stationary synthetic market: hourly generation w ~ Beta with a seasonal
/// and diurnal mean, the forecast is that Beta, the system is long with
/// probability tau.
std::vector<MarketRecord> generate_synthetic_market(const SyntheticMarketConfig& config);

/// pi_b moved to pi_s + factor * (pi_b - pi_s). Throws DomainError unless factor > 0.
std::vector<MarketRecord> scale_penalties(const std::vector<MarketRecord>& records, double factor);

}  // namespace drnv
