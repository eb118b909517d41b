#pragma once

#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace semiquant::cli {

using Cell = std::variant<std::monostate, long long, double, std::string>;

/// Fixed-column report. Doubles are written with 15 significant digits in
/// both CSV and JSON, so the two formats carry identical numbers.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  void add(std::vector<Cell> row) { rows.push_back(std::move(row)); }
};

std::string format_number(double v);
/// v rounded to 15 significant digits.
double rounded(double v);

void write_csv(std::ostream& out, const Table& table);
nlohmann::ordered_json rows_json(const Table& table);

}  // namespace semiquant::cli
