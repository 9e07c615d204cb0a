#pragma once

#include "netfolio/backtest.hpp"
#include "netfolio/network.hpp"

#include <cstdint>
#include <filesystem>

namespace netfolio {

// Deterministic scientific formatting used in every report artifact, so
// byte-level reproducibility only depends on the computed doubles.
std::string format_double(double v);

// Spec labels become filename fragments: spaces and path-hostile characters
// map to '_' ("NB-sample GMV" -> "NB-sample_GMV").
std::string sanitize_label(const std::string& label);

// Square matrix with a ticker header row and a leading ticker column.
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m,
                      const std::vector<std::string>& tickers);

// One row per asset: ticker,<value_header>.
void write_vector_csv(const std::filesystem::path& path, const Vector& v,
                      const std::vector<std::string>& tickers,
                      const std::string& value_header);

// ticker_i,ticker_j,weight for the strict upper triangle.
void write_edge_list_csv(const std::filesystem::path& path, const CorrelationNetwork& net);

// date,<value_header> rows.
void write_series_csv(const std::filesystem::path& path, const std::vector<Date>& dates,
                      const Vector& values, const std::string& value_header);

// date,ticker,weight rows at each rebalance date (the first out-of-sample day
// of each window).
void write_weights_csv(const std::filesystem::path& path, const ReturnPanel& panel,
                       const BacktestResult& result);

// Reads a date,value series written by write_series_csv.
std::pair<std::vector<Date>, Vector> read_series_csv(const std::filesystem::path& path);

// Reads a square matrix CSV in write_matrix_csv's layout.
std::pair<std::vector<std::string>, Matrix> read_matrix_csv(const std::filesystem::path& path);

// Summary table in the statistics-table layout: one row per model, columns
// model,mean,std,skew,kurt,SR,IR(<reference>),OR. The reference row's IR cell
// is empty (the self-comparison is omitted). Rows appear in the given order.
std::string summary_table_csv(const std::vector<std::pair<std::string, PerformanceReport>>& rows,
                              const std::string& ir_reference);

std::string summary_table_json(const std::vector<std::pair<std::string, PerformanceReport>>& rows,
                               const std::string& ir_reference);

// 64-bit FNV-1a over raw bytes; the manifest's reproducibility fingerprint.
std::uint64_t fnv1a(const std::string& bytes);
std::uint64_t fnv1a_file(const std::filesystem::path& path);
std::string hash_string(std::uint64_t h);  // "fnv1a:<16 hex digits>"

void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace netfolio
