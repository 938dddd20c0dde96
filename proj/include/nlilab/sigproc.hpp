#ifndef NLILAB_SIGPROC_HPP
#define NLILAB_SIGPROC_HPP

#include <vector>

#include "nlilab/types.hpp"

namespace nlilab {

/// Root-raised-cosine amplitude response of a unit-energy pulse on the
/// given frequency grid: H(0) = 1/sqrt(Rs), int |H(f)|^2 df = 1, zero for
/// |f| > (1+roll_off) Rs / 2.
std::vector<double> rrc_spectrum(double roll_off, double rs_baud,
                                 const std::vector<double>& f_grid);

/// Circular pulse shaping on the periodic block: upsample by cfg.osf,
/// filter by the RRC spectrum, scale by sqrt(Es) so the mean power per
/// polarization is P/2.
DualPolWaveform modulate(const DualPolSymbols& a, const LinkConfig& cfg);

/// Conjugate-RRC filtering, symbol-aligned decimation and 1/sqrt(Es)
/// scaling; exact inverse of modulate on a noiseless circular block.
DualPolSymbols matched_filter_and_sample(const DualPolWaveform& w, const LinkConfig& cfg);

}  // namespace nlilab

#endif
