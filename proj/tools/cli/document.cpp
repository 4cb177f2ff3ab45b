#include "document.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace seqclt::cli {

namespace {

using Json = nlohmann::ordered_json;

template <class... F>
struct Overload : F... {
  using F::operator()...;
};
template <class... F>
Overload(F...) -> Overload<F...>;

std::string csv_field(const Cell& c) {
  return std::visit(Overload{[](std::monostate) { return std::string{}; },
                             [](bool b) { return std::string(b ? "true" : "false"); },
                             [](std::int64_t v) { return std::to_string(v); },
                             [](std::uint64_t v) { return std::to_string(v); },
                             [](double v) { return format_double(v); },
                             [](const std::string& s) {
                               if (s.find_first_of(",\"\n") == std::string::npos) return s;
                               std::string q = "\"";
                               for (char ch : s) {
                                 if (ch == '"') q += '"';
                                 q += ch;
                               }
                               return q + "\"";
                             }},
                    c);
}

// Scalars are written by hand so doubles keep the same 12-digit text as CSV;
// the library only escapes strings.
std::string json_value(const Cell& c) {
  return std::visit(Overload{[](std::monostate) { return std::string("null"); },
                             [](bool b) { return std::string(b ? "true" : "false"); },
                             [](std::int64_t v) { return std::to_string(v); },
                             [](std::uint64_t v) { return std::to_string(v); },
                             [](double v) { return std::isfinite(v) ? format_double(v) : std::string("null"); },
                             [](const std::string& s) { return Json(s).dump(); }},
                    c);
}

void write_object(std::ostream& os, const std::vector<std::pair<std::string, Cell>>& fields, int indent) {
  const std::string pad(static_cast<std::size_t>(indent), ' ');
  if (fields.empty()) {
    os << "{}";
    return;
  }
  os << "{\n";
  for (std::size_t i = 0; i < fields.size(); ++i) {
    os << pad << "  " << Json(fields[i].first).dump() << ": " << json_value(fields[i].second);
    os << (i + 1 < fields.size() ? ",\n" : "\n");
  }
  os << pad << '}';
}

std::vector<std::pair<std::string, Cell>> row_fields(const Table& t, const std::vector<Cell>& row) {
  std::vector<std::pair<std::string, Cell>> fields;
  for (std::size_t i = 0; i < t.columns.size(); ++i) fields.emplace_back(t.columns[i], row[i]);
  return fields;
}

}  // namespace

void Table::add(std::vector<Cell> row) {
  if (row.size() != columns.size())
    throw std::logic_error("row width " + std::to_string(row.size()) + " does not match table '" + name + "'");
  rows.push_back(std::move(row));
}

std::string format_double(double v) {
  if (v == 0.0) return "0";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

void write_csv(const Document& doc, std::ostream& os) {
  for (const auto& [key, value] : doc.metadata) os << "# " << key << '=' << csv_field(value) << '\n';
  for (const Table& t : doc.tables) {
    os << "# section=" << t.name << '\n';
    for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
    os << '\n';
    for (const auto& row : t.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << '\n';
    }
  }
}

void write_json(const Document& doc, std::ostream& os) {
  os << "{\n  \"metadata\": ";
  write_object(os, doc.metadata, 2);
  for (const Table& t : doc.tables) {
    os << ",\n  " << Json(t.name).dump() << ": ";
    if (t.single) {
      write_object(os, t.rows.empty() ? std::vector<std::pair<std::string, Cell>>{} : row_fields(t, t.rows.front()), 2);
      continue;
    }
    if (t.rows.empty()) {
      os << "[]";
      continue;
    }
    os << "[\n";
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      os << "    ";
      write_object(os, row_fields(t, t.rows[i]), 4);
      os << (i + 1 < t.rows.size() ? ",\n" : "\n");
    }
    os << "  ]";
  }
  os << "\n}\n";
}

void write(const Document& doc, Format format, std::ostream& os) {
  if (format == Format::json)
    write_json(doc, os);
  else
    write_csv(doc, os);
}

}  // namespace seqclt::cli
