#include "anast/binio.hpp"

#include <cstring>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace anast::binio {

namespace {

[[noreturn]] void truncated(const std::string& section) {
  throw std::runtime_error("file truncated while reading " + section);
}

}  // namespace

void write_bytes(std::ostream& out, const void* data, std::size_t n) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void write_u32(std::ostream& out, std::uint32_t v) {
  write_bytes(out, &v, sizeof(v));
}

void write_u64(std::ostream& out, std::uint64_t v) {
  write_bytes(out, &v, sizeof(v));
}

void write_f64(std::ostream& out, double v) { write_bytes(out, &v, sizeof(v)); }

void write_string(std::ostream& out, const std::string& s) {
  write_u64(out, s.size());
  write_bytes(out, s.data(), s.size());
}

void write_matrix(std::ostream& out, const Matrix& m) {
  write_u64(out, m.rows());
  write_u64(out, m.cols());
  write_bytes(out, m.data().data(), m.data().size() * sizeof(double));
}

void read_bytes(std::istream& in, void* data, std::size_t n,
                const std::string& section) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in.gcount()) != n) truncated(section);
}

std::uint32_t read_u32(std::istream& in, const std::string& section) {
  std::uint32_t v;
  read_bytes(in, &v, sizeof(v), section);
  return v;
}

std::uint64_t read_u64(std::istream& in, const std::string& section) {
  std::uint64_t v;
  read_bytes(in, &v, sizeof(v), section);
  return v;
}

double read_f64(std::istream& in, const std::string& section) {
  double v;
  read_bytes(in, &v, sizeof(v), section);
  return v;
}

std::string read_string(std::istream& in, const std::string& section) {
  const std::uint64_t len = read_u64(in, section);
  if (len > (1ULL << 32)) {
    throw std::runtime_error("implausible string length in " + section);
  }
  std::string s(static_cast<std::size_t>(len), '\0');
  read_bytes(in, s.data(), s.size(), section);
  return s;
}

Matrix read_matrix(std::istream& in, const std::string& section) {
  const std::uint64_t rows = read_u64(in, section);
  const std::uint64_t cols = read_u64(in, section);
  if (rows > std::numeric_limits<std::uint32_t>::max() ||
      cols > std::numeric_limits<std::uint32_t>::max() ||
      (cols != 0 && rows * cols / cols != rows)) {
    throw std::runtime_error("implausible matrix shape in " + section);
  }
  std::vector<double> data(static_cast<std::size_t>(rows * cols));
  read_bytes(in, data.data(), data.size() * sizeof(double), section);
  Matrix m(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
           std::move(data));
  m.require_finite(section);
  return m;
}

}  // namespace anast::binio
