#pragma once

#include <bit>
#include <cstdint>
#include <iosfwd>
#include <string>

#include "anast/matrix.hpp"

namespace anast {

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; big-endian hosts need swaps");

// Little-endian primitives for the ANST/ANFT formats. Readers throw
// std::runtime_error naming `section` on truncation so a corrupt file never
// yields partial state.
namespace binio {

void write_u32(std::ostream& out, std::uint32_t v);
void write_u64(std::ostream& out, std::uint64_t v);
void write_f64(std::ostream& out, double v);
void write_bytes(std::ostream& out, const void* data, std::size_t n);
void write_string(std::ostream& out, const std::string& s);  // u64 length + bytes
void write_matrix(std::ostream& out, const Matrix& m);  // rows, cols, row-major f64

std::uint32_t read_u32(std::istream& in, const std::string& section);
std::uint64_t read_u64(std::istream& in, const std::string& section);
double read_f64(std::istream& in, const std::string& section);
void read_bytes(std::istream& in, void* data, std::size_t n,
                const std::string& section);
std::string read_string(std::istream& in, const std::string& section);
Matrix read_matrix(std::istream& in, const std::string& section);

}  // namespace binio
}  // namespace anast
