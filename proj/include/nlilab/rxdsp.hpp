#ifndef NLILAB_RXDSP_HPP
#define NLILAB_RXDSP_HPP

#include <array>
#include <vector>

#include "nlilab/constellation.hpp"
#include "nlilab/kernels.hpp"
#include "nlilab/types.hpp"

namespace nlilab {

/// Genie interference cancellation: ytilde = y - frp_nli_sequence(a, K).
/// Traditional DSP is the degenerate call with an all-zero tensor.
DualPolSymbols genie_cancel(const DualPolSymbols& y, const DualPolSymbols& a,
                            const KernelTensor& k, double gamma, double es_joule);

struct EffectiveSnr {
  double x_db = 0.0;
  double y_db = 0.0;
  double combined_db = 0.0;
  cplx h_x{1.0, 0.0};  // fitted per-polarization scalar channel
  cplx h_y{1.0, 0.0};
};

/// Signal-to-distortion ratio after a per-polarization complex scalar fit
/// h^ = sum(y a*) / sum(|a|^2): SNR = |h|^2 sum|a|^2 / sum|y - h a|^2.
/// The combined value weighs both noise powers against combined signal
/// power. Capped at +200 dB.
EffectiveSnr effective_snr(const DualPolSymbols& ytilde, const DualPolSymbols& a);

/// Per polarization: conditional means per constellation point and one
/// pooled 2x2 real residual covariance.
struct GenieStats {
  struct Pol {
    std::vector<std::array<double, 2>> mean;  // per constellation point
    std::array<double, 4> cov{};              // row-major 2x2, pooled
    std::vector<std::size_t> counts;
  };
  Pol x, y;
};

GenieStats estimate_genie_stats(const DualPolSymbols& ytilde, const DualPolSymbols& a,
                                const Constellation& c);

/// Bit LLRs, sign convention L = ln P(y|b=0) - ln P(y|b=1), clamped to +-50.
/// Layout: symbol-major, x-pol bits then y-pol bits.
struct LlrBlock {
  std::vector<double> llr;  // size = n_symbols * 2 * bits_per_symbol
  int bits_per_symbol = 0;
  std::size_t n_symbols = 0;

  double at(std::size_t sym, int pol, int bit) const {
    return llr[(sym * 2 + static_cast<std::size_t>(pol)) * bits_per_symbol + bit];
  }
};

/// Exact bi-variate Gaussian LLRs (log-sum-exp over the labeled means with
/// the pooled covariance).
LlrBlock gaussian_llrs(const DualPolSymbols& ytilde, const GenieStats& stats,
                       const Constellation& c);

/// Generalized mutual information in bit/2D symbol:
/// m - mean over bits of log2(1 + e^{-(1-2b) L}).
double gmi(const LlrBlock& llrs, const BitSeq& tx_bits);

}  // namespace nlilab

#endif
