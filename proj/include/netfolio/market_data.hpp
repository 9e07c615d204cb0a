#pragma once

#include <Eigen/Dense>

#include <compare>
#include <string>
#include <vector>

#include "netfolio/errors.hpp"

namespace netfolio {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

// Calendar date, ISO-8601 (YYYY-MM-DD) on the wire.
struct Date {
    int year = 0;
    int month = 0;
    int day = 0;

    static Date parse(const std::string& iso);
    std::string to_string() const;

    // Months since year 0, used for calendar-month window grouping.
    int month_key() const { return year * 12 + (month - 1); }

    auto operator<=>(const Date&) const = default;
};

// Dated price table, the precursor of a ReturnPanel.
struct PriceTable {
    std::vector<Date> dates;          // strictly increasing
    std::vector<std::string> tickers; // unique
    Matrix prices;                    // T x N, strictly positive
};

// T x N panel of daily log-returns for a fixed universe.
// Immutable after construction; safe to share across threads.
class ReturnPanel {
public:
    ReturnPanel(std::vector<Date> dates, std::vector<std::string> tickers, Matrix returns);

    const std::vector<Date>& dates() const { return dates_; }
    const std::vector<std::string>& tickers() const { return tickers_; }
    const Matrix& returns() const { return returns_; }
    Index rows() const { return returns_.rows(); }
    Index assets() const { return returns_.cols(); }

private:
    std::vector<Date> dates_;
    std::vector<std::string> tickers_;
    Matrix returns_;
};

enum class CsvFormat { Wide, Long };
enum class WindowUnit { TradingDays, CalendarMonths };

// One rolling step: half-open row ranges [in_begin, in_end) in-sample and
// [out_begin, out_end) out-of-sample, with out_begin == in_end.
struct WindowPair {
    Index in_begin = 0;
    Index in_end = 0;
    Index out_begin = 0;
    Index out_end = 0;

    Index in_length() const { return in_end - in_begin; }
    Index out_length() const { return out_end - out_begin; }
};

// Wide format: header `date,TICK1,TICK2,...`, one row per date.
// Long format: header `date,ticker,price`, one row per observation; the
// ticker order of the loaded table is lexicographic so the result does not
// depend on row order. Duplicate (date,ticker) pairs and gaps in the
// date x ticker grid are rejected.
PriceTable load_prices_csv(const std::string& path, CsvFormat format);

// Same shapes as load_prices_csv but the values are daily log-returns,
// bypassing the price-to-return conversion. Long-format header is
// `date,ticker,return`ish; only the column count is checked.
ReturnPanel load_returns_csv(const std::string& path, CsvFormat format);

// returns[t,i] = ln(price[t+1,i] / price[t,i]); drops the first date.
ReturnPanel log_returns(const PriceTable& prices);

// Rolling schedule: the first window is in-sample over the first n units and
// out-of-sample over the next k; each subsequent window shifts both ranges k
// units forward. Windows whose out-of-sample range would run past the end of
// the panel are dropped unless allow_partial_tail is set, in which case a
// final shorter window is kept.
std::vector<WindowPair> rolling_windows(const ReturnPanel& panel, int in_sample, int out_sample,
                                        WindowUnit unit, bool allow_partial_tail = false);

}  // namespace netfolio
