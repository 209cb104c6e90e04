#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace scaleon {

/// Shortest round-trip form is not used on purpose: every float is written
/// with 17 significant digits so output bytes are stable across runs.
std::string format_double(double v);

/// Comma-separated rows, LF line endings, header first.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);

  CsvWriter& cell(double v);
  CsvWriter& cell(std::string_view text);
  CsvWriter& cell(long long v);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  std::size_t columns_;
  std::size_t current_ = 0;
};

}  // namespace scaleon
