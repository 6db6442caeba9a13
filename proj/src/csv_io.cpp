#include "stablex/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

namespace stablex {
namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.push_back("");
  return out;
}

}  // namespace

Key KeyMap::intern(const std::string& name) {
  auto [it, added] = ids_.emplace(name, names_.size());
  if (added) names_.push_back(name);
  return it->second;
}

Key KeyMap::at(const std::string& name) const {
  auto it = ids_.find(name);
  if (it == ids_.end()) throw InputError("unknown key '" + name + "'");
  return it->second;
}

std::vector<CsvRow> read_csv(std::istream& in, const std::vector<std::string>& header) {
  std::vector<CsvRow> rows;
  std::string line;
  std::size_t number = 0;
  bool need_header = !header.empty();
  while (std::getline(in, line)) {
    ++number;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::vector<std::string> fields = split(t);
    if (need_header) {
      if (fields != header) {
        std::string want;
        for (std::size_t i = 0; i < header.size(); ++i) want += (i ? "," : "") + header[i];
        throw InputError("expected header '" + want + "'", number);
      }
      need_header = false;
      continue;
    }
    if (!header.empty() && fields.size() != header.size()) {
      throw InputError("expected " + std::to_string(header.size()) + " fields", number);
    }
    rows.push_back({number, std::move(fields)});
  }
  if (need_header) throw InputError("missing header", number);
  return rows;
}

double parse_number(const std::string& field, std::size_t line) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size() || !std::isfinite(v)) {
    throw InputError("not a finite number: '" + field + "'", line);
  }
  return v;
}

std::size_t parse_index(const std::string& field, std::size_t line) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InputError("not a nonnegative integer: '" + field + "'", line);
  }
  return v;
}

KeyedValues read_keyed_csv(std::istream& in, const std::string& value_column, KeyMap& keys) {
  KeyedValues out;
  std::unordered_map<Key, std::size_t> seen;
  for (const CsvRow& row : read_csv(in, {"key", value_column})) {
    if (row.fields[0].empty()) throw InputError("empty key", row.line);
    Key k = keys.intern(row.fields[0]);
    if (!seen.emplace(k, row.line).second) {
      throw InputError("duplicate key '" + row.fields[0] + "'", row.line);
    }
    out.push_back({k, parse_number(row.fields[1], row.line)});
  }
  return out;
}

std::vector<std::vector<double>> read_matrix_csv(std::istream& in) {
  std::vector<std::vector<double>> out;
  for (const CsvRow& row : read_csv(in, {})) {
    std::vector<double> r;
    for (const std::string& f : row.fields) r.push_back(parse_number(f, row.line));
    if (!out.empty() && r.size() != out.front().size()) {
      throw InputError("ragged matrix row", row.line);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace stablex
