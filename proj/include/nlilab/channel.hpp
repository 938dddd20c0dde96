#ifndef NLILAB_CHANNEL_HPP
#define NLILAB_CHANNEL_HPP

#include "nlilab/rng.hpp"
#include "nlilab/types.hpp"

namespace nlilab {

/// Symmetric split-step integration of the attenuation-normalized Manakov
/// equation dA/dz = -j (beta2/2) d^2A/dt^2 + j (8/9) gamma e^{-alpha z}
/// (A+ A) A on the periodic block. Loss enters only through the decaying
/// weight on the nonlinearity; linear steps multiply the spectrum by
/// exp(+j (beta2/2) w^2 dz), the nonlinear step rotates pointwise by
/// (8/9) gamma w_eff ||A||^2 with w_eff the exact integral of e^{-alpha z}
/// over the step.
DualPolWaveform propagate_ssfm(const DualPolWaveform& w, const FiberParams& fp,
                               const StepPolicy& sp);

/// Chromatic dispersion compensation: spectral multiplication by
/// exp(-j (beta2/2) w^2 L), the exact inverse of the linear propagator.
DualPolWaveform cdc(const DualPolWaveform& w, double beta2_ps2_per_km, double length_km);

/// Adds circularly symmetric complex Gaussian noise of total variance
/// sigma_n_sq per complex dimension to each polarization of each symbol.
DualPolSymbols add_ase(const DualPolSymbols& s, double sigma_n_sq, GaussianSampler& rng);

/// ASE variance per complex dimension per polarization at the matched-filter
/// output after 1/sqrt(Es) scaling, for an EDFA fully compensating the span
/// loss: sigma_n^2 = (G - 1) h nu NF / Es with the noise PSD
/// N0 = (G - 1) h nu NF.
double sigma_from_nf(double nf_db, double gain_db, double center_freq_hz, double es_joule);

}  // namespace nlilab

#endif
