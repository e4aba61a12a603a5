#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace perception::cli {

// In-memory CSV table. Numbers are written with 12 significant digits and a
// '.' decimal point whatever the locale; missing values are empty cells.
class Table {
 public:
  explicit Table(std::vector<std::string> columns) : columns_(std::move(columns)) {}

  class Row {
   public:
    Row& num(double v);
    Row& num(std::optional<double> v);
    Row& integer(long long v);
    Row& text(const std::string& v);
    Row& flag(bool v) { return text(v ? "true" : "false"); }

   private:
    friend class Table;
    std::vector<std::string> cells_;
  };

  Row& add() { return rows_.emplace_back(); }
  const std::vector<std::string>& columns() const { return columns_; }
  std::size_t size() const { return rows_.size(); }
  // Throws if a row has the wrong width.
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<Row> rows_;
};

std::string format_number(double v);

// Writes dir/name.csv and dir/name.meta.json. The CSV carries no run
// information so identical inputs give identical bytes.
void write_table(const std::string& dir, const std::string& name, const Table& t, nlohmann::json meta);

}  // namespace perception::cli
