#pragma once

// Little-endian primitives shared by the CGCT / IRRF / E3PR blob formats.

#include <array>
#include <bit>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "irrepcore/errors.hpp"

namespace irrepcore::detail {

inline void write_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> b;
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

inline void write_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b;
  for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b.data(), b.size());
}

inline void write_f64(std::ostream& out, double v) { write_u64(out, std::bit_cast<std::uint64_t>(v)); }

inline void write_f64s(std::ostream& out, std::span<const double> values) {
  for (double v : values) write_f64(out, v);
}

inline void write_magic(std::ostream& out, std::string_view magic) { out.write(magic.data(), 4); }

inline std::uint64_t read_u64(std::istream& in) {
  std::array<unsigned char, 8> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw InvalidArgument("blob: unexpected end of input");
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline std::uint32_t read_u32(std::istream& in) {
  std::array<unsigned char, 4> b{};
  if (!in.read(reinterpret_cast<char*>(b.data()), b.size())) throw InvalidArgument("blob: unexpected end of input");
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

inline double read_f64(std::istream& in) { return std::bit_cast<double>(read_u64(in)); }

inline std::vector<double> read_f64s(std::istream& in, std::size_t n) {
  std::vector<double> v(n);
  for (auto& x : v) x = read_f64(in);
  return v;
}

inline void expect_magic(std::istream& in, std::string_view magic) {
  std::array<char, 4> b{};
  if (!in.read(b.data(), 4) || std::string_view(b.data(), 4) != magic)
    throw InvalidArgument("blob: bad magic, expected \"" + std::string(magic) + "\"");
}

inline std::uint64_t fnv1a(std::uint64_t hash, std::uint64_t word) {
  for (int i = 0; i < 8; ++i) {
    hash ^= (word >> (8 * i)) & 0xff;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

inline constexpr std::uint64_t kFnvOffset = 0xcbf29ce484222325ULL;

}  // namespace irrepcore::detail
