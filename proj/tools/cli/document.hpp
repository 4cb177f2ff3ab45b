#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace seqclt::cli {

// A single output value. monostate is written as an empty CSV field / JSON null.
using Cell = std::variant<std::monostate, bool, std::int64_t, std::uint64_t, double, std::string>;

struct Table {
  Table(std::string name_, std::vector<std::string> columns_, bool single_ = false)
      : name(std::move(name_)), columns(std::move(columns_)), single(single_) {}

  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  bool single = false;  // JSON: written as one object rather than an array

  void add(std::vector<Cell> row);
};

// Metadata block followed by named tables.
struct Document {
  std::vector<std::pair<std::string, Cell>> metadata;
  std::vector<Table> tables;
};

enum class Format { csv, json };

// 12 significant digits, "%.12g"; negative zero prints as 0.
std::string format_double(double v);

// CSV: "# key=value" lines, then per table a "# section=<name>" line, header and rows.
void write_csv(const Document& doc, std::ostream& os);
// JSON object with "metadata" first and one key per table, in order.
void write_json(const Document& doc, std::ostream& os);

void write(const Document& doc, Format format, std::ostream& os);

}  // namespace seqclt::cli
