#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace anast::toml {

// Minimal TOML subset used for scenario manifests: top-level key/value pairs,
// [table] sections, [[array-of-table]] sections, strings, integers, floats,
// booleans, flat arrays, and # comments. Parse errors carry file:line.

struct Value {
  enum class Kind { string, number, boolean, array };
  Kind kind = Kind::string;
  std::string str;           // string payload
  std::string raw;           // numeric token as written (keeps u64 exact)
  bool boolean = false;
  std::vector<Value> items;  // array payload
  std::size_t line = 0;

  double as_double(const std::string& context) const;
  std::uint64_t as_u64(const std::string& context) const;
  const std::string& as_string(const std::string& context) const;
  bool as_bool(const std::string& context) const;
  std::vector<std::string> as_string_array(const std::string& context) const;
};

struct Table {
  std::map<std::string, Value> entries;
  std::size_t line = 0;

  const Value* find(const std::string& key) const;
  const Value& require(const std::string& key,
                       const std::string& context) const;
  // Throws if the table holds keys outside `allowed` (typo guard).
  void reject_unknown_keys(const std::vector<std::string>& allowed,
                           const std::string& context) const;
};

struct Document {
  Table root;
  std::map<std::string, Table> tables;                 // [name]
  std::map<std::string, std::vector<Table>> arrays;    // [[name]]
};

// Parses TOML text. `origin` labels error messages (usually the file path).
Document parse(const std::string& text, const std::string& origin);
Document parse_file(const std::string& path);

}  // namespace anast::toml
