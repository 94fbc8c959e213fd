#include "anast/toml_lite.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anast::toml {

namespace {

[[noreturn]] void fail(const std::string& origin, std::size_t line,
                       const std::string& msg) {
  std::ostringstream out;
  out << origin << ":" << line << ": " << msg;
  throw std::invalid_argument(out.str());
}

std::string trim(const std::string& s) {
  const std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool is_bare_key_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
         (c >= '0' && c <= '9') || c == '_' || c == '-';
}

// Strips a trailing comment that is not inside a string literal.
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

class ValueParser {
 public:
  ValueParser(const std::string& text, const std::string& origin,
              std::size_t line)
      : text_(text), origin_(origin), line_(line) {}

  Value parse() {
    Value v = parse_one();
    skip_space();
    if (pos_ != text_.size()) {
      fail(origin_, line_, "trailing characters after value");
    }
    return v;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t'))
      ++pos_;
  }

  Value parse_one() {
    skip_space();
    if (pos_ >= text_.size()) fail(origin_, line_, "missing value");
    Value v;
    v.line = line_;
    const char c = text_[pos_];
    if (c == '"') {
      v.kind = Value::Kind::string;
      v.str = parse_string();
    } else if (c == '[') {
      v.kind = Value::Kind::array;
      ++pos_;
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == ']') {
        ++pos_;
        return v;
      }
      while (true) {
        v.items.push_back(parse_one());
        skip_space();
        if (pos_ >= text_.size()) fail(origin_, line_, "unterminated array");
        if (text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (text_[pos_] == ']') {
          ++pos_;
          break;
        }
        fail(origin_, line_, "expected ',' or ']' in array");
      }
    } else if (text_.compare(pos_, 4, "true") == 0) {
      v.kind = Value::Kind::boolean;
      v.boolean = true;
      pos_ += 4;
    } else if (text_.compare(pos_, 5, "false") == 0) {
      v.kind = Value::Kind::boolean;
      v.boolean = false;
      pos_ += 5;
    } else {
      v.kind = Value::Kind::number;
      const std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ']' &&
             text_[pos_] != ' ' && text_[pos_] != '\t')
        ++pos_;
      v.raw = text_.substr(start, pos_ - start);
      if (v.raw.empty()) fail(origin_, line_, "missing value");
      double probe = 0.0;
      const char* b = v.raw.data();
      auto [p, ec] = std::from_chars(b, b + v.raw.size(), probe);
      if (ec != std::errc() || p != b + v.raw.size()) {
        fail(origin_, line_, "not a number: \"" + v.raw + "\"");
      }
    }
    return v;
  }

  std::string parse_string() {
    ++pos_;  // opening quote
    std::string out;
    while (pos_ < text_.size()) {
      const char c = text_[pos_++];
      if (c == '"') return out;
      if (c == '\\') {
        if (pos_ >= text_.size()) break;
        const char esc = text_[pos_++];
        switch (esc) {
          case '"': out.push_back('"'); break;
          case '\\': out.push_back('\\'); break;
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          default:
            fail(origin_, line_, std::string("unsupported escape \\") + esc);
        }
        continue;
      }
      out.push_back(c);
    }
    fail(origin_, line_, "unterminated string");
  }

  const std::string& text_;
  const std::string& origin_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

}  // namespace

double Value::as_double(const std::string& context) const {
  if (kind != Kind::number) {
    throw std::invalid_argument(context + ": expected a number");
  }
  double v = 0.0;
  const char* b = raw.data();
  auto [p, ec] = std::from_chars(b, b + raw.size(), v);
  if (ec != std::errc() || p != b + raw.size()) {
    throw std::invalid_argument(context + ": not a number: \"" + raw + "\"");
  }
  return v;
}

std::uint64_t Value::as_u64(const std::string& context) const {
  if (kind != Kind::number) {
    throw std::invalid_argument(context + ": expected an integer");
  }
  std::uint64_t v = 0;
  const char* b = raw.data();
  auto [p, ec] = std::from_chars(b, b + raw.size(), v);
  if (ec != std::errc() || p != b + raw.size()) {
    throw std::invalid_argument(context + ": not a non-negative integer: \"" +
                             raw + "\"");
  }
  return v;
}

const std::string& Value::as_string(const std::string& context) const {
  if (kind != Kind::string) {
    throw std::invalid_argument(context + ": expected a string");
  }
  return str;
}

bool Value::as_bool(const std::string& context) const {
  if (kind != Kind::boolean) {
    throw std::invalid_argument(context + ": expected true or false");
  }
  return boolean;
}

std::vector<std::string> Value::as_string_array(
    const std::string& context) const {
  if (kind != Kind::array) {
    throw std::invalid_argument(context + ": expected an array of strings");
  }
  std::vector<std::string> out;
  out.reserve(items.size());
  for (const auto& item : items) out.push_back(item.as_string(context));
  return out;
}

const Value* Table::find(const std::string& key) const {
  auto it = entries.find(key);
  return it == entries.end() ? nullptr : &it->second;
}

const Value& Table::require(const std::string& key,
                            const std::string& context) const {
  const Value* v = find(key);
  if (v == nullptr) {
    throw std::invalid_argument(context + ": missing required key \"" + key +
                             "\"");
  }
  return *v;
}

void Table::reject_unknown_keys(const std::vector<std::string>& allowed,
                                const std::string& context) const {
  for (const auto& [key, value] : entries) {
    bool known = false;
    for (const auto& a : allowed) {
      if (key == a) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw std::invalid_argument(context + ": unknown key \"" + key + "\"");
    }
  }
}

Document parse(const std::string& text, const std::string& origin) {
  Document doc;
  Table* current = &doc.root;

  std::istringstream in(text);
  std::string raw_line;
  std::size_t line_no = 0;
  while (std::getline(in, raw_line)) {
    ++line_no;
    const std::string line = trim(strip_comment(raw_line));
    if (line.empty()) continue;

    if (line.front() == '[') {
      const bool is_array = line.size() > 1 && line[1] == '[';
      const std::string closer = is_array ? "]]" : "]";
      const std::size_t name_begin = is_array ? 2 : 1;
      const std::size_t name_end = line.find(closer, name_begin);
      if (name_end == std::string::npos ||
          trim(line.substr(name_end + closer.size())) != "") {
        fail(origin, line_no, "malformed section header");
      }
      const std::string name =
          trim(line.substr(name_begin, name_end - name_begin));
      if (name.empty()) fail(origin, line_no, "empty section name");
      for (char c : name) {
        if (!is_bare_key_char(c)) {
          fail(origin, line_no, "invalid section name \"" + name + "\"");
        }
      }
      if (is_array) {
        doc.arrays[name].emplace_back();
        current = &doc.arrays[name].back();
      } else {
        if (doc.tables.count(name)) {
          fail(origin, line_no, "duplicate section [" + name + "]");
        }
        current = &doc.tables[name];
      }
      current->line = line_no;
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      fail(origin, line_no, "expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(origin, line_no, "empty key");
    for (char c : key) {
      if (!is_bare_key_char(c)) {
        fail(origin, line_no, "invalid key \"" + key + "\"");
      }
    }
    if (current->entries.count(key)) {
      fail(origin, line_no, "duplicate key \"" + key + "\"");
    }
    const std::string value_text = trim(line.substr(eq + 1));
    current->entries.emplace(
        key, ValueParser(value_text, origin, line_no).parse());
  }
  return doc;
}

Document parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

}  // namespace anast::toml
