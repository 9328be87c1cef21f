#ifndef DCI_DATA_INGEST_HPP
#define DCI_DATA_INGEST_HPP

#include <chrono>
#include <filesystem>
#include <istream>
#include <span>
#include <vector>

#include "dci/market_model.hpp"

namespace dci {

/// Daily closing prices, date-sorted, strictly positive.
struct PriceSeries {
    std::vector<std::chrono::year_month_day> dates;
    std::vector<double> closes;
    bool sorted_on_load = false;  // true when input rows were out of order
};

/// Annualized estimates from historical data.
struct EstimatedParams {
    double r_hat = 0.0;
    double v_hat = 0.0;
    double sigma_hat = 0.0;
    double sample_span_years = 0.0;
    long observations_used = 0;
};

/// Rate observations (annualized decimals) with their dates.
struct RateSeries {
    std::vector<std::chrono::year_month_day> dates;
    std::vector<double> rates;
};

/// Parse a CSV with `date` (ISO-8601) and `close` columns, any column
/// order, extra columns ignored. Out-of-order rows are sorted with the
/// sorted_on_load flag raised; duplicate dates and non-positive prices
/// are rejected with the offending date / line number.
PriceSeries load_prices_csv(std::istream& in);
PriceSeries load_prices_csv(const std::filesystem::path& path);

/// Parse a CSV with `date` and `rate` columns.
RateSeries load_rates_csv(std::istream& in);
RateSeries load_rates_csv(const std::filesystem::path& path);

/// sigma_hat = sd(daily log-returns) sqrt(252); drift = mean(log-returns)
/// * 252 + sigma_hat^2 / 2 (arithmetic drift of the GBM price model);
/// r_hat = mean of the rate observations; v_hat = drift - r_hat.
/// Needs >= 30 log-returns and a non-degenerate price path.
EstimatedParams estimate_market_params(const PriceSeries& prices,
                                       std::span<const double> rates);

} // namespace dci

#endif
