#pragma once

// Real-basis Clebsch-Gordan coefficients.
//
// Coupling u (degree l1) and v (degree l2) into degree l3 is
//
//   w[m3] = sum_{m1,m2} C(l1,m1,l2,m2,l3,m3) * u[m1] * v[m2]
//
// with C norm-preserving on the tensor product and C(l1,0,l2,0,l3,0) >= 0.
// For triples where that entry vanishes (l1+l2+l3 odd), the first nonzero
// coefficient in (m3, m1, m2) storage order is made positive; for (1,1,1)
// this reproduces w = (u x v)/sqrt(2).

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

namespace irrepcore::cgc {

class CgcTable {
 public:
  struct Entry {
    int offset1;
    int offset2;
    int offset3;
    double value;
  };

  /// Wraps a dense coefficient array of size ((L+1)^2)^3 indexed (l1 m1, l2 m2, l3 m3).
  static CgcTable from_values(int max_degree, std::vector<double> values);

  int max_degree() const { return max_degree_; }
  /// (L+1)^2, the extent of each of the three flat indices.
  int extent() const { return extent_; }

  /// Unchecked lookup.
  double operator()(int l1, int m1, int l2, int m2, int l3, int m3) const;
  /// Checked lookup; throws InvalidArgument on out-of-range indices.
  double at(int l1, int m1, int l2, int m2, int l3, int m3) const;

  /// Nonzero entries of the (l1, l2, l3) block with offsets inside each degree block.
  std::span<const Entry> block(int l1, int l2, int l3) const;

  std::span<const double> values() const { return values_; }

 private:
  CgcTable(int max_degree, std::vector<double> values);

  int max_degree_;
  int extent_;
  std::vector<double> values_;
  std::vector<std::vector<Entry>> blocks_;
};

/// Builds all coefficients with degrees <= max_degree. Deterministic.
/// Throws CapacityError above max_supported_degree().
CgcTable build_cgc_table(int max_degree);

/// Checked coefficient lookup.
double cgc(const CgcTable& table, int l1, int m1, int l2, int m2, int l3, int m3);

/// Couples u (degree l1) and v (degree l2) into degree l3. Zero outside the
/// selection rule. Throws InvalidArgument on length mismatch.
std::vector<double> couple(const CgcTable& table, int l1, std::span<const double> u, int l2,
                           std::span<const double> v, int l3);

/// FNV-1a over the little-endian bytes of values().
std::uint64_t checksum(const CgcTable& table);

/// Rows l1,m1,l2,m2,l3,m3,value for every nonzero coefficient, 17 significant digits.
void write_csv(std::ostream& out, const CgcTable& table);

/// "CGCT", u32 version, u32 L, then the dense float64 array, little endian.
void write_blob(std::ostream& out, const CgcTable& table);
CgcTable read_blob(std::istream& in);

inline constexpr std::uint32_t kBlobVersion = 1;

}  // namespace irrepcore::cgc
