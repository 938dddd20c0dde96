#ifndef NLILAB_CONSTELLATION_HPP
#define NLILAB_CONSTELLATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nlilab/types.hpp"

namespace nlilab {

using BitSeq = std::vector<std::uint8_t>;

/// Unit-energy constellation with an m-bit Gray labeling.
struct Constellation {
  std::vector<cplx> points;          // indexed by label value, MSB-first
  int bits_per_symbol = 0;
  std::string name;

  std::size_t size() const { return points.size(); }
};

/// Gray-labeled 16QAM, bits (b1 b2 b3 b4): (b1 b2) -> I, (b3 b4) -> Q,
/// per-quadrature Gray order 00 -> +3, 01 -> +1, 11 -> -1, 10 -> -3,
/// scaled by 1/sqrt(10) for unit average energy.
Constellation pm16qam();

/// Maps bits to dual-pol symbols: per time slot, first m bits give the
/// x-pol point, the next m the y-pol point.
DualPolSymbols map_bits(const BitSeq& bits, const Constellation& c);

/// Nearest-point hard decision back to bits, same ordering as map_bits.
BitSeq demap_hard(const DualPolSymbols& s, const Constellation& c);

}  // namespace nlilab

#endif
