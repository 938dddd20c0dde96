#ifndef NLILAB_FFT_HPP
#define NLILAB_FFT_HPP

#include <vector>

#include "nlilab/types.hpp"

namespace nlilab {

// Fourier convention fixed for the whole project:
//   analysis:  A^(w_k) = sum_t A(t) e^{+j w_k t} dt
//   synthesis: A(t)    = (1/(N dt)) sum_k A^(w_k) e^{-j w_k t}
// so "analysis" is an unnormalized inverse FFT scaled by dt.

/// FFT engine for one transform length. Owns FFTW plans and work buffers;
/// not thread-safe per instance, each thread uses its own.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }

  /// x_k <- sum_t x_t e^{+j 2 pi k t / N} (unnormalized analysis direction).
  void backward_inplace(std::vector<cplx>& x);
  /// x_t <- sum_k x_k e^{-j 2 pi k t / N} (unnormalized synthesis direction).
  void forward_inplace(std::vector<cplx>& x);

  /// Spectral filtering x <- synth(op .* analysis(x)); dt scaling cancels.
  void filter_inplace(std::vector<cplx>& x, const std::vector<cplx>& spectral_op);

  void analysis_inplace(std::vector<cplx>& x, double dt);
  void synthesis_inplace(std::vector<cplx>& x, double dt);

 private:
  std::size_t n_;
  void* plan_fwd_;   // fftw_plan
  void* plan_bwd_;
  cplx* buf_;
};

/// FFT bin frequencies in Hz for sample spacing dt (fftfreq layout).
std::vector<double> fft_frequencies(std::size_t n, double dt);

/// Angular frequencies 2*pi*f.
std::vector<double> fft_omega(std::size_t n, double dt);

}  // namespace nlilab

#endif
