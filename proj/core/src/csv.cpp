#include "qobs/csv.hpp"

#include <fmt/format.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qobs {

namespace {

template <typename Record>
auto field(Record& r, std::size_t column) {
  const std::array fields{&r.gamma_D, &r.kdT,    &r.j_p_up, &r.j_h_up, &r.j_h_down,
                                                 &r.Qdot_H,  &r.Qdot_C, &r.Qdot_D, &r.Phi_H,  &r.Phi_C,
                                                 &r.P_prod,  &r.S_vn,   &r.residual, &r.min_eig};
  return fields[column];
}

double parse_double(std::string_view text, std::size_t line) {
  if (text == "nan" || text == "-nan") return std::numeric_limits<double>::quiet_NaN();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw std::runtime_error(fmt::format("csv line {}: cannot parse '{}'", line, text));
  }
  return value;
}

std::string header() {
  std::string h;
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
    if (c) h += ',';
    h += kCsvColumns[c];
  }
  return h;
}

}  // namespace

std::optional<double> column_value(const ObservablesRecord& record, std::string_view column) {
  for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
    if (kCsvColumns[c] == column) return *field(record, c);
  }
  return std::nullopt;
}

bool is_column(std::string_view column) {
  for (auto c : kCsvColumns) {
    if (c == column) return true;
  }
  return false;
}

void write_csv(const SweepResult& result, std::ostream& out) {
  out << header() << '\n';
  for (const auto& row : result.rows) {
    const ObservablesRecord& r = row.record;
    std::string line;
    for (std::size_t c = 0; c < kCsvColumns.size(); ++c) {
      if (c) line += ',';
      const double v = *field(r, c);
      line += (row.error && c >= 2) ? std::string("nan") : fmt::format("{}", v);
    }
    out << line << '\n';
  }
}

void write_csv(const SweepResult& result, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot open '{}' for writing", path.string()));
  write_csv(result, out);
  if (!out) throw std::runtime_error(fmt::format("write to '{}' failed", path.string()));
}

std::vector<ObservablesRecord> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != header()) throw std::runtime_error("csv: unexpected header");
  std::vector<ObservablesRecord> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    ObservablesRecord r;
    std::size_t column = 0;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      const std::string_view cell(line.data() + start, (comma == std::string::npos ? line.size() : comma) - start);
      if (column >= kCsvColumns.size()) throw std::runtime_error(fmt::format("csv line {}: too many fields", line_no));
      *field(r, column++) = parse_double(cell, line_no);
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (column != kCsvColumns.size()) throw std::runtime_error(fmt::format("csv line {}: too few fields", line_no));
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace qobs
