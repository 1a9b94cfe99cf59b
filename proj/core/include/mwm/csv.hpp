// csv.hpp — The one CSV dialect used everywhere
//
// Comma separated, LF line endings, '#'-prefixed metadata lines before a
// mandatory header row, numbers at 15 significant digits.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace mwm::csv {

struct Table {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

std::string format_double(double v);  // %.15g

void write_table(const std::string& path, const Table& table);
Table read_table(const std::string& path);

} // namespace mwm::csv
