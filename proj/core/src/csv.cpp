// csv.cpp
#include "mwm/csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "mwm/errors.hpp"

namespace mwm::csv {
namespace {

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

} // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

void write_table(const std::string& path, const Table& table) {
  std::ofstream os(path, std::ios::binary);  // binary: LF endings everywhere
  if (!os) throw ConfigError("csv: cannot open '" + path + "' for writing");
  for (const auto& [key, value] : table.meta) os << "# " << key << " = " << value << "\n";
  for (std::size_t i = 0; i < table.columns.size(); ++i)
    os << (i ? "," : "") << table.columns[i];
  os << "\n";
  for (const auto& row : table.rows) {
    if (row.size() != table.columns.size())
      throw ConfigError("csv: row width does not match the header");
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_double(row[i]);
    os << "\n";
  }
  if (!os) throw ConfigError("csv: write failed for '" + path + "'");
}

Table read_table(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("csv: cannot open '" + path + "'");
  Table table;
  std::string line;
  bool have_header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '#') {
      const std::string body = trim(line.substr(1));
      const auto eq = body.find('=');
      if (eq != std::string::npos)
        table.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      continue;
    }
    if (!have_header) {
      for (const auto& col : split(line, ',')) table.columns.push_back(trim(col));
      if (table.columns.empty())
        throw ConfigError("csv '" + path + "': missing header line");
      have_header = true;
      continue;
    }
    const auto fields = split(line, ',');
    if (fields.size() != table.columns.size())
      throw ConfigError("csv '" + path + "' line " + std::to_string(lineno) +
                        ": expected " + std::to_string(table.columns.size()) + " fields");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& fstr : fields) {
      // strtod instead of stod: subnormal intensities must round-trip
      const std::string token = trim(fstr);
      char* end = nullptr;
      const double v = std::strtod(token.c_str(), &end);
      if (token.empty() || end != token.c_str() + token.size())
        throw ConfigError("csv '" + path + "' line " + std::to_string(lineno) +
                          ": not a number: '" + fstr + "'");
      row.push_back(v);
    }
    table.rows.push_back(std::move(row));
  }
  if (!have_header) throw ConfigError("csv '" + path + "': empty file");
  return table;
}

} // namespace mwm::csv
