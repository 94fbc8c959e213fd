#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include "anast/binio.hpp"
#include "anast/data.hpp"

namespace anast {

namespace {

constexpr char kMagic[4] = {'A', 'N', 'F', 'T'};
constexpr std::uint32_t kVersion = 1;

bool has_suffix(const std::string& s, const std::string& suffix) {
  return s.size() >= suffix.size() &&
         s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

bool is_text_path(const std::string& path) {
  return has_suffix(path, ".csv") || has_suffix(path, ".txt");
}

double parse_field(const std::string& field, std::size_t line_no,
                   std::size_t field_no) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end) {
    std::ostringstream msg;
    msg << "line " << line_no << ", field " << field_no + 1
        << ": not a number: \"" << field << "\"";
    throw std::runtime_error(msg.str());
  }
  return value;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  // Trim surrounding spaces; the format itself has no quoting.
  for (auto& f : fields) {
    const std::size_t b = f.find_first_not_of(" \t\r");
    const std::size_t e = f.find_last_not_of(" \t\r");
    f = b == std::string::npos ? std::string() : f.substr(b, e - b + 1);
  }
  return fields;
}

bool looks_like_header(const std::vector<std::string>& fields) {
  // A header is a first line whose non-label fields do not all parse as
  // numbers.
  for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
    double v;
    const char* b = fields[i].data();
    auto [ptr, ec] = std::from_chars(b, b + fields[i].size(), v);
    if (ec != std::errc() || ptr != b + fields[i].size()) return true;
  }
  return false;
}

FeatureStore load_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);

  FeatureStore store;
  store.source_name = path;
  std::vector<double> values;
  std::size_t dim = 0;
  bool have_dim = false;
  bool maybe_header = true;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line.find_first_not_of(" \t\r") == std::string::npos) {
      continue;
    }
    auto fields = split_csv_line(line);
    if (maybe_header) {
      maybe_header = false;
      if (looks_like_header(fields)) continue;  // optional header
    }
    if (fields.size() < 2) {
      std::ostringstream msg;
      msg << path << ": line " << line_no
          << ": expected at least one feature and a label";
      throw std::runtime_error(msg.str());
    }
    if (!have_dim) {
      dim = fields.size() - 1;
      have_dim = true;
    } else if (fields.size() - 1 != dim) {
      std::ostringstream msg;
      msg << path << ": line " << line_no << ": ragged row, has "
          << fields.size() - 1 << " features but earlier rows have " << dim;
      throw std::runtime_error(msg.str());
    }
    for (std::size_t i = 0; i + 1 < fields.size(); ++i) {
      try {
        values.push_back(parse_field(fields[i], line_no, i));
      } catch (const std::runtime_error& e) {
        throw std::runtime_error(path + ": " + e.what());
      }
    }
    store.labels.push_back(fields.back());
  }
  if (store.labels.empty()) {
    throw std::runtime_error(path + ": no data rows");
  }
  store.features = Matrix(store.labels.size(), dim, std::move(values));
  store.features.require_finite(path);
  return store;
}

void save_text(const FeatureStore& store, const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out.precision(17);
  for (std::size_t i = 0; i < store.rows(); ++i) {
    const double* row = store.features.row(i);
    for (std::size_t j = 0; j < store.dim(); ++j) out << row[j] << ',';
    out << store.labels[i] << '\n';
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace

void save_features(const FeatureStore& store, const std::string& path) {
  if (store.labels.size() != store.rows()) {
    throw std::invalid_argument("feature store: label count != rows");
  }
  if (is_text_path(path)) {
    save_text(store, path);
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  binio::write_bytes(out, kMagic, sizeof(kMagic));
  binio::write_u32(out, kVersion);
  binio::write_u64(out, store.rows());
  binio::write_u64(out, store.dim());
  for (const auto& label : store.labels) binio::write_string(out, label);
  binio::write_bytes(out, store.features.data().data(),
                     store.features.size() * sizeof(double));
  if (!out) throw std::runtime_error("write failed for " + path);
}

FeatureStore load_features(const std::string& path) {
  if (is_text_path(path)) return load_text(path);

  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);

  char magic[4];
  binio::read_bytes(in, magic, sizeof(magic), "magic");
  if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error(path + ": bad magic, not an ANFT file");
  }
  const std::uint32_t version = binio::read_u32(in, "version");
  if (version != kVersion) {
    std::ostringstream msg;
    msg << path << ": unsupported feature-file version " << version;
    throw std::runtime_error(msg.str());
  }
  const std::uint64_t n = binio::read_u64(in, "row count");
  const std::uint64_t d = binio::read_u64(in, "column count");
  if (d == 0) throw std::runtime_error(path + ": zero feature columns");

  FeatureStore store;
  store.source_name = path;
  store.labels.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    store.labels.push_back(binio::read_string(in, "labels"));
  }
  std::vector<double> values(static_cast<std::size_t>(n * d));
  binio::read_bytes(in, values.data(), values.size() * sizeof(double),
                    "feature rows");
  store.features = Matrix(static_cast<std::size_t>(n),
                          static_cast<std::size_t>(d), std::move(values));
  store.features.require_finite(path);
  return store;
}

}  // namespace anast
