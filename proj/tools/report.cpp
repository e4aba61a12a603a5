#include "report.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "perception/errors.hpp"

namespace perception::cli {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";  // no "-0"
  char buf[40];
  // to_chars ignores the C locale.
  auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

Table::Row& Table::Row::num(double v) {
  cells_.push_back(format_number(v));
  return *this;
}

Table::Row& Table::Row::num(std::optional<double> v) {
  cells_.push_back(v ? format_number(*v) : "");
  return *this;
}

Table::Row& Table::Row::integer(long long v) {
  cells_.push_back(std::to_string(v));
  return *this;
}

Table::Row& Table::Row::text(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) {
    cells_.push_back(v);
    return *this;
  }
  std::string q = "\"";
  for (char c : v) {
    if (c == '"') q += '"';
    q += c;
  }
  cells_.push_back(q + "\"");
  return *this;
}

std::string Table::str() const {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(columns_);
  for (const Row& r : rows_) {
    if (r.cells_.size() != columns_.size()) {
      throw Error(ErrorKind::kDimension, "csv row has " + std::to_string(r.cells_.size()) + " cells for " +
                                             std::to_string(columns_.size()) + " columns");
    }
    line(r.cells_);
  }
  return out;
}

void write_table(const std::string& dir, const std::string& name, const Table& t, nlohmann::json meta) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kSchema, "cannot create output directory " + dir + ": " + ec.message());
  const fs::path base = fs::path(dir) / name;
  {
    std::ofstream out(base.string() + ".csv", std::ios::binary);
    if (!out) throw Error(ErrorKind::kSchema, "cannot write " + base.string() + ".csv");
    out << t.str();
  }
  meta["file"] = name + ".csv";
  meta["rows"] = t.size();
  meta["columns"] = t.columns();
  meta["number_format"] = "%.12g";
  std::ofstream out(base.string() + ".meta.json", std::ios::binary);
  if (!out) throw Error(ErrorKind::kSchema, "cannot write " + base.string() + ".meta.json");
  out << meta.dump(2) << '\n';
}

}  // namespace perception::cli
