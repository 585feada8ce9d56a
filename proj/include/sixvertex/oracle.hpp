#pragma once

// Brute-force DWBC enumeration for small lattices.

#include <array>
#include <functional>
#include <map>
#include <vector>

#include <gmpxx.h>

#include "sixvertex/real.hpp"

namespace sixv {

/// Arrow orientations of an N x N lattice.
///   horizontal[i][j], j = 0..N: edge left of column j in row i; true = points right.
///   vertical[i][j],   i = 0..N: edge above row i in column j;  true = points up.
struct ArrowGrid {
  int n = 0;
  std::vector<std::vector<bool>> horizontal;
  std::vector<std::vector<bool>> vertical;
};

enum class VertexType { a, b, c };

/// Type of vertex (i, j).  a: both lines pass straight, pointing right/up or
/// left/down; b: straight, right/down or left/up; c: both lines reverse.
VertexType vertex_type(const ArrowGrid& g, int i, int j);

/// (n_a, n_b, n_c)
using Census = std::array<int, 3>;

struct EnumResult {
  int n = 0;
  std::map<Census, long> census;  ///< multiplicity of each vertex-type census
  long config_count = 0;
};

constexpr int kMaxEnumerationN = 6;

/// Calls visit for every DWBC configuration (outer horizontal arrows point
/// out, outer vertical arrows point in, two arrows in at every vertex).
void for_each_dwbc(int n, const std::function<void(const ArrowGrid&)>& visit);

/// All DWBC configurations, 1 <= N <= 6.  Throws InvalidInput outside that
/// range.  The a/b/c labeling is checked against Z_1 = c and
/// Z_2 = c^2 (a^2 + b^2) on first use.
EnumResult enumerate_dwbc(int n);

/// sum over configurations of a^{n_a} b^{n_b} c^{n_c}.
Real Z_bruteforce(int n, const Real& a, const Real& b, const Real& c, Precision p);
Real Z_bruteforce(const EnumResult& e, const Real& a, const Real& b, const Real& c, Precision p);

/// Number of DWBC states (= alternating sign matrices of size N).
long asm_count(int n);

}  // namespace sixv
