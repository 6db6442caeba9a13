// Plain CSV readers for the command-line tool and the harness. Fields are
// comma separated and trimmed; quoting is not supported. Errors carry the
// 1-based line number.
#pragma once

#include <istream>
#include <string>
#include <unordered_map>
#include <vector>

#include "stablex/core.hpp"

namespace stablex {

// String keys from external files mapped to dense internal ids in order of
// first appearance.
class KeyMap {
 public:
  Key intern(const std::string& name);
  // InputError for unknown names.
  Key at(const std::string& name) const;
  bool has(const std::string& name) const { return ids_.count(name) > 0; }
  const std::string& name(Key key) const { return names_.at(key); }
  std::size_t size() const { return names_.size(); }

 private:
  std::unordered_map<std::string, Key> ids_;
  std::vector<std::string> names_;
};

struct CsvRow {
  std::size_t line;
  std::vector<std::string> fields;
};

// Skips blank lines and lines starting with '#'. When header is nonempty
// the first row must match it exactly.
std::vector<CsvRow> read_csv(std::istream& in, const std::vector<std::string>& header);

double parse_number(const std::string& field, std::size_t line);
std::size_t parse_index(const std::string& field, std::size_t line);

// key,value rows; keys are interned in file order.
KeyedValues read_keyed_csv(std::istream& in, const std::string& value_column, KeyMap& keys);

// Rows of numbers without a header.
std::vector<std::vector<double>> read_matrix_csv(std::istream& in);

}  // namespace stablex
