#pragma once

// Text emitters: shortest round-trip numbers, RFC 4180 CSV, gnuplot scripts.

#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace qkd {

/// Shortest decimal form that parses back to exactly `v`.
std::string format_double(double v);

/// Quotes a CSV field when it contains a comma, quote, CR or LF.
std::string csv_field(std::string_view text);

class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  /// Missing values are written as empty fields.
  void row(const std::vector<std::optional<double>>& values);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

enum class PlotKind {
  Lines,    // columns 2.. against column 1
  Surface,  // column 3 over columns 1 and 2
};

/// gnuplot script that reads `csv_path` (comma separated, header row) and
/// writes `<csv_path without extension>.png`.
std::string plot_script(std::string_view csv_path, std::string_view title, PlotKind kind,
                        const std::vector<std::string>& header);

}  // namespace qkd
