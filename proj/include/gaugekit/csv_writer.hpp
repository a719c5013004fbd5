#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace gaugekit {

/// Fixed-format CSV: header row, 17 significant digits, '\n' line endings.
class CsvWriter {
 public:
  CsvWriter(std::ostream& out, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ostream& out_;
  std::size_t columns_;
};

std::string format_number(double value);

}  // namespace gaugekit
