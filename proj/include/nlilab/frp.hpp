#ifndef NLILAB_FRP_HPP
#define NLILAB_FRP_HPP

#include "nlilab/kernels.hpp"
#include "nlilab/rng.hpp"
#include "nlilab/types.hpp"

namespace nlilab {

/// Nonlinear interference at index n0 from the first-order regular
/// perturbation triple sum
///   da_n0 = j (8/9) gamma Es sum_{(k,l,m) in [-M,M]^3} (a_k+ a_l) a_m S_klm
/// with indices relative to n0. With circular=false the window must lie
/// fully inside the sequence.
CVec2 frp_nli(const DualPolSymbols& a, const KernelTensor& k, double gamma,
              double es_joule, std::size_t n0, bool circular = true);

/// frp_nli at every index on the circular block; equals per-index calls
/// bit-exactly. OpenMP-parallel over output indices.
DualPolSymbols frp_nli_sequence(const DualPolSymbols& a, const KernelTensor& k,
                                double gamma, double es_joule);

/// Single-threaded reference of frp_nli_sequence (same arithmetic).
DualPolSymbols frp_nli_sequence_serial(const DualPolSymbols& a, const KernelTensor& k,
                                       double gamma, double es_joule);

/// Eq.-(1) surrogate: a + frp_nli_sequence(a) + circular Gaussian noise of
/// variance sigma_n_sq per complex dimension.
DualPolSymbols surrogate_channel(const DualPolSymbols& a, const KernelTensor& k,
                                 double gamma, double es_joule, double sigma_n_sq,
                                 GaussianSampler& rng);

}  // namespace nlilab

#endif
