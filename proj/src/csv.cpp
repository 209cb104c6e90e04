#include "scaleon/csv.hpp"

#include <cstdio>
#include <ostream>

#include "scaleon/error.hpp"

namespace scaleon {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(std::ostream& out, const std::vector<std::string>& header)
    : out_(out), columns_(header.size()) {
  for (const auto& h : header) cell(h);
  end_row();
}

void CsvWriter::separator() {
  if (current_ > 0) out_ << ',';
  ++current_;
}

CsvWriter& CsvWriter::cell(double v) {
  separator();
  out_ << format_double(v);
  return *this;
}

CsvWriter& CsvWriter::cell(long long v) {
  separator();
  out_ << v;
  return *this;
}

CsvWriter& CsvWriter::cell(std::string_view text) {
  separator();
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    out_ << text;
    return *this;
  }
  out_ << '"';
  for (char c : text) {
    if (c == '"') out_ << '"';
    out_ << c;
  }
  out_ << '"';
  return *this;
}

void CsvWriter::end_row() {
  if (current_ != columns_) {
    fail(ErrorCode::InvalidArgument, "csv row has " + std::to_string(current_) + " cells, expected " +
                                         std::to_string(columns_));
  }
  out_ << '\n';
  current_ = 0;
}

}  // namespace scaleon
