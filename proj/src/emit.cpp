#include "qkd/emit.hpp"

#include <array>
#include <charconv>
#include <sstream>
#include <stdexcept>

namespace qkd {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc()) throw std::runtime_error("format_double: conversion failed");
  return std::string(buf.data(), ptr);
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) throw std::invalid_argument("CsvWriter: row width does not match header");
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::optional<double>>& values) {
  std::vector<std::string> fields;
  fields.reserve(values.size());
  for (const auto& v : values) fields.push_back(v ? format_double(*v) : std::string());
  row(fields);
}

std::string plot_script(std::string_view csv_path, std::string_view title, PlotKind kind,
                        const std::vector<std::string>& header) {
  std::string image(csv_path);
  if (const auto dot = image.rfind('.'); dot != std::string::npos && image.find('/', dot) == std::string::npos) {
    image.erase(dot);
  }
  image += ".png";

  const auto quoted = [](std::string_view s) {
    std::string out = "'";
    for (char c : s) {
      if (c == '\'') out += '\'';
      out += c;
    }
    return out + "'";
  };

  std::ostringstream gp;
  gp << "# gnuplot script; run with: gnuplot <this file>\n";
  gp << "set datafile separator ','\n";
  gp << "set terminal pngcairo size 900,600\n";
  gp << "set output " << quoted(image) << "\n";
  gp << "set title " << quoted(title) << "\n";
  gp << "set key autotitle columnhead\n";
  gp << "set grid\n";
  if (kind == PlotKind::Lines) {
    gp << "set xlabel " << quoted(header.empty() ? "" : header[0]) << "\n";
    gp << "plot";
    for (std::size_t col = 2; col <= header.size(); ++col) {
      gp << (col == 2 ? " " : ", \\\n     ") << quoted(csv_path) << " using 1:" << col << " with lines";
    }
    gp << "\n";
  } else {
    gp << "set xlabel " << quoted(header.size() > 0 ? header[0] : "") << "\n";
    gp << "set ylabel " << quoted(header.size() > 1 ? header[1] : "") << "\n";
    gp << "set zlabel " << quoted(header.size() > 2 ? header[2] : "") << " rotate parallel\n";
    gp << "set dgrid3d 60,60 qnorm 2\n";
    gp << "set hidden3d\n";
    gp << "splot " << quoted(csv_path) << " using 1:2:3 with lines\n";
  }
  return gp.str();
}

}  // namespace qkd
