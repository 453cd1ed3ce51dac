#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

/// Numeric result tables with a metadata block, emitted as CSV (metadata as
/// leading `#` lines, 17 significant digits) or JSON {metadata, columns, rows}.
namespace csop::cli {

enum class Format { csv, json };

struct ResultTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
  std::vector<std::pair<std::string, std::string>> metadata;

  void add_row(std::vector<double> row);
  void set_meta(const std::string& key, const std::string& value);
  const std::string* meta(const std::string& key) const;

  bool operator==(const ResultTable& other) const;
};

std::string format_number(double v);
std::string emit(const ResultTable& t, Format f);
ResultTable parse_json_table(std::string_view text);
ResultTable parse_csv_table(std::string_view text);
Format parse_format(std::string_view name);

}  // namespace csop::cli
