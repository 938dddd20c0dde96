#include "nlilab/constellation.hpp"

#include <cmath>
#include <limits>

#include "nlilab/errors.hpp"

namespace nlilab {

namespace {
double gray_level(unsigned two_bits) {
  switch (two_bits) {
    case 0b00: return 3.0;
    case 0b01: return 1.0;
    case 0b11: return -1.0;
    default: return -3.0;  // 0b10
  }
}
}  // namespace

Constellation pm16qam() {
  Constellation c;
  c.bits_per_symbol = 4;
  c.name = "16QAM";
  c.points.resize(16);
  const double s = 1.0 / std::sqrt(10.0);
  for (unsigned v = 0; v < 16; ++v) {
    const double i = gray_level((v >> 2) & 0x3);
    const double q = gray_level(v & 0x3);
    c.points[v] = cplx(i * s, q * s);
  }
  return c;
}

DualPolSymbols map_bits(const BitSeq& bits, const Constellation& c) {
  const std::size_t m = static_cast<std::size_t>(c.bits_per_symbol);
  if (bits.size() % (2 * m) != 0)
    throw InputError("map_bits: bit count must be a multiple of 2m");
  const std::size_t n = bits.size() / (2 * m);
  DualPolSymbols out(n);
  std::size_t pos = 0;
  for (std::size_t t = 0; t < n; ++t) {
    unsigned vx = 0, vy = 0;
    for (std::size_t b = 0; b < m; ++b) vx = (vx << 1) | (bits[pos++] & 1);
    for (std::size_t b = 0; b < m; ++b) vy = (vy << 1) | (bits[pos++] & 1);
    out.x[t] = c.points[vx];
    out.y[t] = c.points[vy];
  }
  return out;
}

namespace {
unsigned nearest_label(cplx v, const Constellation& c) {
  unsigned best = 0;
  double dmin = std::numeric_limits<double>::infinity();
  for (unsigned p = 0; p < c.points.size(); ++p) {
    const double d = std::norm(v - c.points[p]);
    if (d < dmin) {
      dmin = d;
      best = p;
    }
  }
  return best;
}
}  // namespace

BitSeq demap_hard(const DualPolSymbols& s, const Constellation& c) {
  const std::size_t m = static_cast<std::size_t>(c.bits_per_symbol);
  BitSeq bits;
  bits.reserve(s.size() * 2 * m);
  for (std::size_t t = 0; t < s.size(); ++t) {
    for (cplx v : {s.x[t], s.y[t]}) {
      const unsigned lab = nearest_label(v, c);
      for (std::size_t b = 0; b < m; ++b)
        bits.push_back(static_cast<std::uint8_t>((lab >> (m - 1 - b)) & 1));
    }
  }
  return bits;
}

}  // namespace nlilab
