#include "csop/cli/table.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "csop/error.hpp"

namespace csop::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

double parse_cell(const std::string& cell) {
  char* end = nullptr;
  const double v = std::strtod(cell.c_str(), &end);
  if (cell.empty() || *end != '\0') throw Error(Errc::io_failure, "not a number: '" + cell + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

bool same_number(double a, double b) { return a == b || (std::isnan(a) && std::isnan(b)); }

}  // namespace

void ResultTable::add_row(std::vector<double> row) {
  if (row.size() != columns.size())
    throw Error(Errc::invalid_argument, "row has " + std::to_string(row.size()) + " cells for " +
                                            std::to_string(columns.size()) + " columns");
  rows.push_back(std::move(row));
}

void ResultTable::set_meta(const std::string& key, const std::string& value) {
  for (auto& [k, v] : metadata) {
    if (k == key) {
      v = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

const std::string* ResultTable::meta(const std::string& key) const {
  for (const auto& [k, v] : metadata)
    if (k == key) return &v;
  return nullptr;
}

bool ResultTable::operator==(const ResultTable& o) const {
  if (columns != o.columns || metadata != o.metadata || rows.size() != o.rows.size()) return false;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != o.rows[i].size()) return false;
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      if (!same_number(rows[i][j], o.rows[i][j])) return false;
  }
  return true;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string emit(const ResultTable& t, Format f) {
  if (f == Format::json) {
    ordered_json j;
    j["metadata"] = ordered_json::object();
    for (const auto& [k, v] : t.metadata) j["metadata"][k] = v;
    j["columns"] = t.columns;
    j["rows"] = ordered_json::array();
    for (const auto& row : t.rows) {
      ordered_json r = ordered_json::array();
      for (double v : row) {
        if (std::isfinite(v))
          r.push_back(v);
        else
          r.push_back(format_number(v));
      }
      j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
  }
  std::string out;
  for (const auto& [k, v] : t.metadata) out += "# " + one_line(k) + ": " + one_line(v) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
  out += "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + format_number(row[i]);
    out += "\n";
  }
  return out;
}

ResultTable parse_json_table(std::string_view text) {
  ResultTable t;
  ordered_json j;
  try {
    j = ordered_json::parse(text);
    for (const auto& [k, v] : j.at("metadata").items()) t.metadata.emplace_back(k, v.get<std::string>());
    t.columns = j.at("columns").get<std::vector<std::string>>();
    for (const auto& r : j.at("rows")) {
      std::vector<double> row;
      for (const auto& v : r) row.push_back(v.is_string() ? parse_cell(v.get<std::string>()) : v.get<double>());
      t.add_row(std::move(row));
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::io_failure, std::string("malformed JSON table: ") + e.what());
  }
  return t;
}

ResultTable parse_csv_table(std::string_view text) {
  ResultTable t;
  std::stringstream ss{std::string(text)};
  std::string line;
  bool header = false;
  while (std::getline(ss, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.rfind("# ", 0) == 0) {
      const auto colon = line.find(": ", 2);
      if (colon == std::string::npos) throw Error(Errc::io_failure, "malformed metadata line: " + line);
      t.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
      continue;
    }
    if (line.empty()) continue;
    if (!header) {
      t.columns = split(line, ',');
      header = true;
      continue;
    }
    std::vector<double> row;
    for (const auto& cell : split(line, ',')) row.push_back(parse_cell(cell));
    t.add_row(std::move(row));
  }
  return t;
}

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::csv;
  if (name == "json") return Format::json;
  throw Error(Errc::invalid_argument, "format must be csv or json, got '" + std::string(name) + "'");
}

}  // namespace csop::cli
