#include "netfolio/market_data.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <climits>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace netfolio {

namespace {

bool all_digits(const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

int days_in_month(int year, int month) {
    static const int lengths[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2) {
        bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
        return leap ? 29 : 28;
    }
    return lengths[month - 1];
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.push_back("");
    return fields;
}

double parse_number(const std::string& s, const std::string& path, int line_no) {
    const std::string t = trim(s);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (ec != std::errc{} || ptr != t.data() + t.size())
        throw DataError(path + ":" + std::to_string(line_no) + ": not a number: '" + s + "'");
    return value;
}

Date parse_date_at(const std::string& s, const std::string& path, int line_no) {
    try {
        return Date::parse(s);
    } catch (const DataError& e) {
        throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
    }
}

struct RawTable {
    std::vector<Date> dates;
    std::vector<std::string> tickers;
    Matrix values;
};

// Shared loader for prices and returns; only the value validation differs.
RawTable load_table(const std::string& path, CsvFormat format) {
    std::ifstream file(path);
    if (!file.is_open()) throw DataError("cannot open file: " + path);

    std::string line;
    int line_no = 0;
    if (!std::getline(file, line)) throw DataError(path + ": empty file");
    ++line_no;
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 2)
        throw DataError(path + ":1: header must have at least two columns");

    RawTable table;

    if (format == CsvFormat::Wide) {
        table.tickers.assign(header.begin() + 1, header.end());
        {
            std::unordered_set<std::string> seen;
            for (const auto& t : table.tickers) {
                if (t.empty()) throw DataError(path + ":1: empty ticker in header");
                if (!seen.insert(t).second) throw DataError(path + ":1: duplicate ticker '" + t + "'");
            }
        }
        const size_t n = table.tickers.size();
        std::vector<std::pair<Date, std::vector<double>>> rows;
        while (std::getline(file, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            std::vector<std::string> fields = split_csv_line(line);
            if (fields.size() != n + 1)
                throw DataError(path + ":" + std::to_string(line_no) + ": expected " +
                                std::to_string(n + 1) + " fields, got " + std::to_string(fields.size()));
            Date d = parse_date_at(fields[0], path, line_no);
            std::vector<double> row(n);
            for (size_t i = 0; i < n; ++i) row[i] = parse_number(fields[i + 1], path, line_no);
            rows.emplace_back(d, std::move(row));
        }
        std::stable_sort(rows.begin(), rows.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (size_t t = 1; t < rows.size(); ++t)
            if (!(rows[t - 1].first < rows[t].first))
                throw DataError(path + ": duplicate date " + rows[t].first.to_string());
        table.dates.reserve(rows.size());
        table.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(n));
        for (size_t t = 0; t < rows.size(); ++t) {
            table.dates.push_back(rows[t].first);
            for (size_t i = 0; i < n; ++i) table.values(static_cast<Index>(t), static_cast<Index>(i)) = rows[t].second[i];
        }
    } else {
        // Long format: keyed load, so the result is independent of row order.
        std::map<std::pair<Date, std::string>, double> cells;
        std::set<Date> dates;
        std::set<std::string> tickers;
        while (std::getline(file, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            std::vector<std::string> fields = split_csv_line(line);
            if (fields.size() != 3)
                throw DataError(path + ":" + std::to_string(line_no) + ": expected 3 fields, got " +
                                std::to_string(fields.size()));
            Date d = parse_date_at(fields[0], path, line_no);
            const std::string& ticker = fields[1];
            if (ticker.empty()) throw DataError(path + ":" + std::to_string(line_no) + ": empty ticker");
            double v = parse_number(fields[2], path, line_no);
            auto [it, inserted] = cells.emplace(std::make_pair(d, ticker), v);
            if (!inserted)
                throw DataError(path + ":" + std::to_string(line_no) + ": duplicate observation (" +
                                d.to_string() + ", " + ticker + ")");
            dates.insert(d);
            tickers.insert(ticker);
        }
        table.dates.assign(dates.begin(), dates.end());
        table.tickers.assign(tickers.begin(), tickers.end());
        table.values.resize(static_cast<Index>(table.dates.size()), static_cast<Index>(table.tickers.size()));
        for (size_t t = 0; t < table.dates.size(); ++t) {
            for (size_t i = 0; i < table.tickers.size(); ++i) {
                auto it = cells.find(std::make_pair(table.dates[t], table.tickers[i]));
                if (it == cells.end())
                    throw DataError(path + ": missing observation (" + table.dates[t].to_string() +
                                    ", " + table.tickers[i] + "); no imputation is performed");
                table.values(static_cast<Index>(t), static_cast<Index>(i)) = it->second;
            }
        }
    }

    if (table.dates.empty()) throw DataError(path + ": no data rows");
    return table;
}

}  // namespace

Date Date::parse(const std::string& iso) {
    const std::string s = trim(iso);
    if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
        !all_digits(s.substr(0, 4)) || !all_digits(s.substr(5, 2)) || !all_digits(s.substr(8, 2)))
        throw DataError("bad date (want YYYY-MM-DD): '" + iso + "'");
    Date d{std::stoi(s.substr(0, 4)), std::stoi(s.substr(5, 2)), std::stoi(s.substr(8, 2))};
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > days_in_month(d.year, d.month))
        throw DataError("bad calendar date: '" + iso + "'");
    return d;
}

std::string Date::to_string() const {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
}

ReturnPanel::ReturnPanel(std::vector<Date> dates, std::vector<std::string> tickers, Matrix returns)
    : dates_(std::move(dates)), tickers_(std::move(tickers)), returns_(std::move(returns)) {
    if (returns_.rows() != static_cast<Index>(dates_.size()))
        throw DataError("return panel: row count does not match date count");
    if (returns_.cols() != static_cast<Index>(tickers_.size()))
        throw DataError("return panel: column count does not match ticker count");
    if (returns_.rows() < 2) throw DataError("return panel needs at least 2 observations");
    if (returns_.cols() < 1) throw DataError("return panel needs at least 1 asset");
    for (size_t t = 1; t < dates_.size(); ++t)
        if (!(dates_[t - 1] < dates_[t]))
            throw DataError("return panel dates must be strictly increasing (at " +
                            dates_[t].to_string() + ")");
    {
        std::unordered_set<std::string> seen;
        for (const auto& t : tickers_)
            if (!seen.insert(t).second) throw DataError("duplicate ticker '" + t + "'");
    }
    if (!returns_.allFinite()) throw DataError("return panel contains non-finite entries");
}

PriceTable load_prices_csv(const std::string& path, CsvFormat format) {
    RawTable raw = load_table(path, format);
    for (Index t = 0; t < raw.values.rows(); ++t)
        for (Index i = 0; i < raw.values.cols(); ++i)
            if (!(raw.values(t, i) > 0.0) || !std::isfinite(raw.values(t, i)))
                throw DataError(path + ": non-positive price for " + raw.tickers[static_cast<size_t>(i)] +
                                " on " + raw.dates[static_cast<size_t>(t)].to_string());
    return PriceTable{std::move(raw.dates), std::move(raw.tickers), std::move(raw.values)};
}

ReturnPanel load_returns_csv(const std::string& path, CsvFormat format) {
    RawTable raw = load_table(path, format);
    if (!raw.values.allFinite()) throw DataError(path + ": non-finite return value");
    return ReturnPanel(std::move(raw.dates), std::move(raw.tickers), std::move(raw.values));
}

ReturnPanel log_returns(const PriceTable& prices) {
    const Index t_prices = prices.prices.rows();
    if (t_prices < 2) throw DataError("log returns need at least 2 price rows");
    Matrix rets(t_prices - 1, prices.prices.cols());
    for (Index t = 0; t + 1 < t_prices; ++t)
        for (Index i = 0; i < prices.prices.cols(); ++i)
            rets(t, i) = std::log(prices.prices(t + 1, i) / prices.prices(t, i));
    std::vector<Date> dates(prices.dates.begin() + 1, prices.dates.end());
    return ReturnPanel(std::move(dates), prices.tickers, std::move(rets));
}

std::vector<WindowPair> rolling_windows(const ReturnPanel& panel, int in_sample, int out_sample,
                                        WindowUnit unit, bool allow_partial_tail) {
    if (in_sample < 1 || out_sample < 1)
        throw ConfigError("window lengths must be positive");

    std::vector<WindowPair> windows;

    if (unit == WindowUnit::TradingDays) {
        const Index total = panel.rows();
        if (static_cast<Index>(in_sample) + out_sample > total)
            throw ConfigError("in-sample + out-of-sample (" + std::to_string(in_sample + out_sample) +
                              " days) exceeds panel length " + std::to_string(total));
        for (Index start = 0;; start += out_sample) {
            WindowPair w;
            w.in_begin = start;
            w.in_end = start + in_sample;
            w.out_begin = w.in_end;
            w.out_end = w.out_begin + out_sample;
            if (w.out_end > total) {
                if (allow_partial_tail && w.out_begin < total) {
                    w.out_end = total;
                    windows.push_back(w);
                }
                break;
            }
            windows.push_back(w);
        }
        return windows;
    }

    // Calendar months: group rows by the ordered distinct (year, month) pairs
    // present in the panel and roll in month units.
    std::vector<Index> month_first_row;  // row index of the first observation of each month
    int last_key = INT_MIN;
    for (Index t = 0; t < panel.rows(); ++t) {
        int key = panel.dates()[static_cast<size_t>(t)].month_key();
        if (key != last_key) {
            month_first_row.push_back(t);
            last_key = key;
        }
    }
    const int total_months = static_cast<int>(month_first_row.size());
    if (in_sample + out_sample > total_months)
        throw ConfigError("in-sample + out-of-sample (" + std::to_string(in_sample + out_sample) +
                          " months) exceeds panel span of " + std::to_string(total_months) + " months");
    auto month_row_begin = [&](int m) { return month_first_row[static_cast<size_t>(m)]; };
    auto month_row_end = [&](int m) {
        return m + 1 < total_months ? month_first_row[static_cast<size_t>(m) + 1] : panel.rows();
    };
    for (int start = 0;; start += out_sample) {
        int in_end_m = start + in_sample;
        int out_end_m = in_end_m + out_sample;
        if (out_end_m > total_months) {
            if (allow_partial_tail && in_end_m < total_months) {
                WindowPair w;
                w.in_begin = month_row_begin(start);
                w.in_end = month_row_begin(in_end_m);
                w.out_begin = w.in_end;
                w.out_end = month_row_end(total_months - 1);
                windows.push_back(w);
            }
            break;
        }
        WindowPair w;
        w.in_begin = month_row_begin(start);
        w.in_end = month_row_begin(in_end_m);
        w.out_begin = w.in_end;
        w.out_end = month_row_end(out_end_m - 1);
        windows.push_back(w);
    }
    return windows;
}

}  // namespace netfolio
