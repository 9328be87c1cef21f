#include "dci/data_ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

namespace dci {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::stringstream ss(line);
    while (std::getline(ss, cur, ',')) out.push_back(trim(cur));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::chrono::year_month_day parse_iso_date(const std::string& s, long line_no) {
    int y = 0;
    unsigned m = 0, d = 0;
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        std::from_chars(s.data(), s.data() + 4, y).ec != std::errc{} ||
        std::from_chars(s.data() + 5, s.data() + 7, m).ec != std::errc{} ||
        std::from_chars(s.data() + 8, s.data() + 10, d).ec != std::errc{}) {
        throw ContractError("line " + std::to_string(line_no) +
                            ": malformed ISO-8601 date '" + s + "'");
    }
    const std::chrono::year_month_day ymd{std::chrono::year{y}, std::chrono::month{m},
                                          std::chrono::day{d}};
    if (!ymd.ok()) {
        throw ContractError("line " + std::to_string(line_no) + ": invalid date '" +
                            s + "'");
    }
    return ymd;
}

double parse_number(const std::string& s, long line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ContractError("line " + std::to_string(line_no) +
                            ": malformed number '" + s + "'");
    }
}

std::string date_string(const std::chrono::year_month_day& d) {
    std::ostringstream os;
    os << static_cast<int>(d.year()) << '-'
       << (static_cast<unsigned>(d.month()) < 10 ? "0" : "")
       << static_cast<unsigned>(d.month()) << '-'
       << (static_cast<unsigned>(d.day()) < 10 ? "0" : "")
       << static_cast<unsigned>(d.day());
    return os.str();
}

struct TwoColumnCsv {
    std::vector<std::chrono::year_month_day> dates;
    std::vector<double> values;
    bool resorted = false;
};

TwoColumnCsv load_two_column(std::istream& in, const char* value_column,
                             bool require_positive) {
    std::string line;
    if (!std::getline(in, line)) throw ContractError("empty CSV input");
    const auto header = split_csv(line);
    long date_col = -1, value_col = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        const std::string name = lower(header[i]);
        if (name == "date") date_col = static_cast<long>(i);
        if (name == value_column) value_col = static_cast<long>(i);
    }
    if (date_col < 0 || value_col < 0) {
        throw ContractError(std::string("CSV header must contain 'date' and '") +
                            value_column + "' columns");
    }

    TwoColumnCsv out;
    long line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() <= static_cast<std::size_t>(std::max(date_col, value_col))) {
            throw ContractError("line " + std::to_string(line_no) +
                                ": expected at least " +
                                std::to_string(std::max(date_col, value_col) + 1) +
                                " columns");
        }
        const auto date = parse_iso_date(cells[date_col], line_no);
        const double value = parse_number(cells[value_col], line_no);
        if (require_positive && !(value > 0.0)) {
            throw ContractError("line " + std::to_string(line_no) +
                                ": non-positive price " + cells[value_col]);
        }
        out.dates.push_back(date);
        out.values.push_back(value);
    }

    // Accept out-of-order exports: sort by date, flag it, then reject
    // duplicates (which sorting makes adjacent).
    std::vector<std::size_t> order(out.dates.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return out.dates[a] < out.dates[b];
    });
    for (std::size_t i = 0; i < order.size(); ++i) {
        if (order[i] != i) {
            out.resorted = true;
            break;
        }
    }
    TwoColumnCsv sorted;
    sorted.resorted = out.resorted;
    sorted.dates.reserve(out.dates.size());
    sorted.values.reserve(out.values.size());
    for (const std::size_t idx : order) {
        sorted.dates.push_back(out.dates[idx]);
        sorted.values.push_back(out.values[idx]);
    }
    for (std::size_t i = 1; i < sorted.dates.size(); ++i) {
        if (sorted.dates[i] == sorted.dates[i - 1]) {
            throw ContractError("duplicate date " + date_string(sorted.dates[i]));
        }
    }
    return sorted;
}

} // namespace

PriceSeries load_prices_csv(std::istream& in) {
    auto csv = load_two_column(in, "close", /*require_positive=*/true);
    PriceSeries out;
    out.dates = std::move(csv.dates);
    out.closes = std::move(csv.values);
    out.sorted_on_load = csv.resorted;
    return out;
}

PriceSeries load_prices_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open price CSV: " + path.string());
    return load_prices_csv(in);
}

RateSeries load_rates_csv(std::istream& in) {
    auto csv = load_two_column(in, "rate", /*require_positive=*/false);
    RateSeries out;
    out.dates = std::move(csv.dates);
    out.rates = std::move(csv.values);
    return out;
}

RateSeries load_rates_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ContractError("cannot open rate CSV: " + path.string());
    return load_rates_csv(in);
}

EstimatedParams estimate_market_params(const PriceSeries& prices,
                                       std::span<const double> rates) {
    constexpr double kTradingDays = 252.0;
    if (prices.closes.size() < 31) {
        throw ContractError("estimate_market_params: need >= 30 log-returns, got " +
                            std::to_string(prices.closes.size() > 0
                                               ? prices.closes.size() - 1
                                               : 0));
    }
    if (rates.empty()) {
        throw ContractError("estimate_market_params: rate series is empty");
    }

    const std::size_t n = prices.closes.size() - 1;
    double mean = 0.0;
    std::vector<double> lr(n);
    for (std::size_t i = 0; i < n; ++i) {
        lr[i] = std::log(prices.closes[i + 1] / prices.closes[i]);
        mean += lr[i];
    }
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (const double x : lr) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    EstimatedParams out;
    out.sigma_hat = sd * std::sqrt(kTradingDays);
    if (!(out.sigma_hat > 0.0)) {
        throw NumericError("estimate_market_params: zero volatility (constant "
                           "prices); sigma > 0 is required downstream");
    }
    const double drift = mean * kTradingDays + 0.5 * out.sigma_hat * out.sigma_hat;
    out.r_hat = std::accumulate(rates.begin(), rates.end(), 0.0) /
                static_cast<double>(rates.size());
    out.v_hat = drift - out.r_hat;
    out.observations_used = static_cast<long>(n);
    const auto span_days = std::chrono::sys_days(prices.dates.back()) -
                           std::chrono::sys_days(prices.dates.front());
    out.sample_span_years = static_cast<double>(span_days.count()) / 365.25;
    return out;
}

} // namespace dci
