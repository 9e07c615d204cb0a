#include "netfolio/io.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

namespace netfolio {

namespace {

std::vector<std::string> labels_or_default(const std::vector<std::string>& tickers, Index n) {
    if (static_cast<Index>(tickers.size()) == n) return tickers;
    std::vector<std::string> out;
    out.reserve(static_cast<size_t>(n));
    for (Index i = 0; i < n; ++i) out.push_back("a" + std::to_string(i + 1));
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10e", v);
    return buf;
}

std::string sanitize_label(const std::string& label) {
    std::string out = label;
    for (char& c : out) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                        (c >= '0' && c <= '9') || c == '-' || c == '.';
        if (!ok) c = '_';
    }
    return out;
}

void write_text_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream file(path, std::ios::binary);
    if (!file.is_open()) throw DataError("cannot write " + path.string());
    file << content;
    if (!file.good()) throw DataError("write failed for " + path.string());
}

void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& tickers) {
    const std::vector<std::string> names = labels_or_default(tickers, m.rows());
    std::ostringstream os;
    os << "ticker";
    for (const auto& t : names) os << "," << t;
    os << "\n";
    for (Index i = 0; i < m.rows(); ++i) {
        os << names[static_cast<size_t>(i)];
        for (Index j = 0; j < m.cols(); ++j) os << "," << format_double(m(i, j));
        os << "\n";
    }
    write_text_file(path, os.str());
}

void write_vector_csv(const std::filesystem::path& path, const Vector& v,
                      const std::vector<std::string>& tickers,
                      const std::string& value_header) {
    const std::vector<std::string> names = labels_or_default(tickers, v.size());
    std::ostringstream os;
    os << "ticker," << value_header << "\n";
    for (Index i = 0; i < v.size(); ++i)
        os << names[static_cast<size_t>(i)] << "," << format_double(v(i)) << "\n";
    write_text_file(path, os.str());
}

void write_edge_list_csv(const std::filesystem::path& path, const CorrelationNetwork& net) {
    const std::vector<std::string> names =
        labels_or_default(net.tickers, net.weights.rows());
    std::ostringstream os;
    os << "ticker_i,ticker_j,weight\n";
    for (Index i = 0; i < net.weights.rows(); ++i)
        for (Index j = i + 1; j < net.weights.cols(); ++j)
            os << names[static_cast<size_t>(i)] << "," << names[static_cast<size_t>(j)] << ","
               << format_double(net.weights(i, j)) << "\n";
    write_text_file(path, os.str());
}

void write_series_csv(const std::filesystem::path& path, const std::vector<Date>& dates,
                      const Vector& values, const std::string& value_header) {
    if (static_cast<Index>(dates.size()) != values.size())
        throw ConfigError("series writer: dates and values lengths differ");
    std::ostringstream os;
    os << "date," << value_header << "\n";
    for (Index t = 0; t < values.size(); ++t)
        os << dates[static_cast<size_t>(t)].to_string() << "," << format_double(values(t)) << "\n";
    write_text_file(path, os.str());
}

void write_weights_csv(const std::filesystem::path& path, const ReturnPanel& panel,
                       const BacktestResult& result) {
    std::ostringstream os;
    os << "date,ticker,weight\n";
    for (const WindowAllocation& wa : result.windows) {
        const std::string date =
            panel.dates()[static_cast<size_t>(wa.window.out_begin)].to_string();
        for (Index i = 0; i < wa.allocation.weights.size(); ++i)
            os << date << "," << panel.tickers()[static_cast<size_t>(i)] << ","
               << format_double(wa.allocation.weights(i)) << "\n";
    }
    write_text_file(path, os.str());
}

std::pair<std::vector<Date>, Vector> read_series_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file.is_open()) throw DataError("cannot open series file: " + path.string());
    std::string line;
    if (!std::getline(file, line)) throw DataError(path.string() + ": empty series file");
    std::vector<Date> dates;
    std::vector<double> values;
    int line_no = 1;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected date,value");
        dates.push_back(Date::parse(line.substr(0, comma)));
        try {
            values.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": bad value");
        }
    }
    Vector v(static_cast<Index>(values.size()));
    for (size_t i = 0; i < values.size(); ++i) v(static_cast<Index>(i)) = values[i];
    return {std::move(dates), std::move(v)};
}

std::pair<std::vector<std::string>, Matrix> read_matrix_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file.is_open()) throw DataError("cannot open matrix file: " + path.string());
    std::string line;
    if (!std::getline(file, line)) throw DataError(path.string() + ": empty matrix file");
    std::vector<std::string> tickers;
    {
        std::stringstream header(line);
        std::string field;
        bool first = true;
        while (std::getline(header, field, ',')) {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            if (first) {
                first = false;
                continue;  // corner label
            }
            tickers.push_back(field);
        }
    }
    const Index n = static_cast<Index>(tickers.size());
    if (n < 1) throw DataError(path.string() + ": matrix header has no tickers");
    Matrix m(n, n);
    int line_no = 1;
    Index row = 0;
    while (std::getline(file, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        if (row >= n) throw DataError(path.string() + ": more rows than header tickers");
        std::stringstream ss(line);
        std::string field;
        Index col = -1;
        while (std::getline(ss, field, ',')) {
            if (!field.empty() && field.back() == '\r') field.pop_back();
            if (col >= 0) {
                if (col >= n)
                    throw DataError(path.string() + ":" + std::to_string(line_no) +
                                    ": too many columns");
                try {
                    m(row, col) = std::stod(field);
                } catch (const std::exception&) {
                    throw DataError(path.string() + ":" + std::to_string(line_no) +
                                    ": bad matrix entry '" + field + "'");
                }
            }
            ++col;
        }
        if (col != n)
            throw DataError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                            std::to_string(n) + " values, got " + std::to_string(col));
        ++row;
    }
    if (row != n) throw DataError(path.string() + ": expected " + std::to_string(n) + " rows");
    return {std::move(tickers), std::move(m)};
}

std::string summary_table_csv(const std::vector<std::pair<std::string, PerformanceReport>>& rows,
                              const std::string& ir_reference) {
    std::ostringstream os;
    os << "model,mean,std,skew,kurt,SR,IR(" << ir_reference << "),OR\n";
    for (const auto& [label, report] : rows) {
        os << label << "," << format_double(report.stats.mean) << ","
           << format_double(report.stats.std) << ","
           << (report.stats.skew ? format_double(*report.stats.skew) : "") << ","
           << (report.stats.kurt ? format_double(*report.stats.kurt) : "") << ","
           << format_double(report.sharpe) << ","
           << (report.info_ratio ? format_double(*report.info_ratio) : "") << ","
           << format_double(report.omega) << "\n";
    }
    return os.str();
}

std::string summary_table_json(const std::vector<std::pair<std::string, PerformanceReport>>& rows,
                               const std::string& ir_reference) {
    nlohmann::ordered_json j;
    j["ir_reference"] = ir_reference;
    j["rows"] = nlohmann::ordered_json::array();
    for (const auto& [label, report] : rows) {
        nlohmann::ordered_json row;
        row["model"] = label;
        row["mean"] = report.stats.mean;
        row["std"] = report.stats.std;
        if (report.stats.skew) row["skew"] = *report.stats.skew;
        if (report.stats.kurt) row["kurt"] = *report.stats.kurt;
        row["SR"] = report.sharpe;
        if (report.info_ratio) row["IR"] = *report.info_ratio;
        row["OR"] = report.omega;
        j["rows"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

std::uint64_t fnv1a(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

std::uint64_t fnv1a_file(const std::filesystem::path& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file.is_open()) throw DataError("cannot hash missing file: " + path.string());
    std::ostringstream os;
    os << file.rdbuf();
    return fnv1a(os.str());
}

std::string hash_string(std::uint64_t h) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "fnv1a:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace netfolio
