#include "sixvertex/oracle.hpp"

#include <mutex>
#include <string>

#include "sixvertex/error.hpp"

namespace sixv {

namespace {

void require_range(int n) {
  if (n < 1 || n > kMaxEnumerationN)
    throw InvalidInput("enumeration supports 1 <= N <= " + std::to_string(kMaxEnumerationN) + ", got " +
                       std::to_string(n));
}

class RowSweep {
 public:
  RowSweep(int n, const std::function<void(const ArrowGrid&)>& visit) : visit_(visit) {
    g_.n = n;
    g_.horizontal.assign(n, std::vector<bool>(n + 1, false));
    g_.vertical.assign(n + 1, std::vector<bool>(n, false));
    for (int i = 0; i < n; ++i) g_.horizontal[i][n] = true;  // right boundary points out
    // top boundary (vertical[0]) points down = false: incoming.
  }

  void run() { step(0, 0); }

 private:
  // Choose the right edge of vertex (i, j); the bottom edge then follows
  // from the ice rule.
  void step(int i, int j) {
    const int n = g_.n;
    if (i == n) {
      visit_(g_);
      return;
    }
    if (j == n) {
      if (!g_.horizontal[i][n]) return;
      step(i + 1, 0);
      return;
    }
    const bool left = g_.horizontal[i][j];
    const bool top = g_.vertical[i][j];
    const int fixed_in = (left ? 1 : 0) + (top ? 0 : 1);
    const bool right_fixed = j == n - 1;
    for (int r = 0; r < 2; ++r) {
      const bool right = r == 1;
      if (right_fixed && !right) continue;
      const int in = fixed_in + (right ? 0 : 1);
      // bottom edge points up (true) means it enters the vertex
      const int need = 2 - in;
      if (need < 0 || need > 1) continue;
      const bool bottom = need == 1;
      if (i == n - 1 && !bottom) continue;  // bottom boundary points up
      if (!right_fixed) g_.horizontal[i][j + 1] = right;
      g_.vertical[i + 1][j] = bottom;
      step(i, j + 1);
    }
    if (!right_fixed) g_.horizontal[i][j + 1] = false;
  }

  ArrowGrid g_;
  const std::function<void(const ArrowGrid&)>& visit_;
};

EnumResult enumerate_unchecked(int n) {
  EnumResult out;
  out.n = n;
  for_each_dwbc(n, [&](const ArrowGrid& g) {
    Census c{0, 0, 0};
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) ++c[static_cast<int>(vertex_type(g, i, j))];
    ++out.census[c];
    ++out.config_count;
  });
  return out;
}

// Z_1 = c and Z_2 = c^2 (a^2 + b^2) pin the labeling.
void check_labeling() {
  static std::once_flag once;
  std::call_once(once, [] {
    const auto one = enumerate_unchecked(1);
    const auto two = enumerate_unchecked(2);
    const std::map<Census, long> expect1{{{0, 0, 1}, 1}};
    const std::map<Census, long> expect2{{{2, 0, 2}, 1}, {{0, 2, 2}, 1}};
    if (one.census != expect1 || two.census != expect2)
      throw Error("vertex labeling fails the Z_1 / Z_2 consistency check");
  });
}

}  // namespace

VertexType vertex_type(const ArrowGrid& g, int i, int j) {
  const bool left = g.horizontal[i][j], right = g.horizontal[i][j + 1];
  const bool top = g.vertical[i][j], bottom = g.vertical[i + 1][j];
  if (left != right) return VertexType::c;
  if (top != bottom) throw Error("ice rule violated at (" + std::to_string(i) + ", " + std::to_string(j) + ")");
  return left == top ? VertexType::a : VertexType::b;
}

void for_each_dwbc(int n, const std::function<void(const ArrowGrid&)>& visit) {
  require_range(n);
  RowSweep(n, visit).run();
}

EnumResult enumerate_dwbc(int n) {
  require_range(n);
  check_labeling();
  return enumerate_unchecked(n);
}

Real Z_bruteforce(const EnumResult& e, const Real& a, const Real& b, const Real& c, Precision p) {
  const Precision w = p.widened(16);
  Real z(0, w);
  for (const auto& [census, count] : e.census)
    z += pow(a.at(w), census[0]) * pow(b.at(w), census[1]) * pow(c.at(w), census[2]) * count;
  return z.at(p);
}

Real Z_bruteforce(int n, const Real& a, const Real& b, const Real& c, Precision p) {
  return Z_bruteforce(enumerate_dwbc(n), a, b, c, p);
}

long asm_count(int n) { return enumerate_dwbc(n).config_count; }

}  // namespace sixv
