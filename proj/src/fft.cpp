#include "nlilab/fft.hpp"

#include <fftw3.h>

#include <mutex>

namespace nlilab {

namespace {
// FFTW plan creation is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

Fft::Fft(std::size_t n) : n_(n) {
  buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n));
  std::lock_guard<std::mutex> lk(planner_mutex());
  auto* b = reinterpret_cast<fftw_complex*>(buf_);
  plan_fwd_ = fftw_plan_dft_1d(static_cast<int>(n), b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  plan_bwd_ = fftw_plan_dft_1d(static_cast<int>(n), b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

Fft::~Fft() {
  std::lock_guard<std::mutex> lk(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(plan_bwd_));
  fftw_free(buf_);
}

void Fft::forward_inplace(std::vector<cplx>& x) {
  std::copy(x.begin(), x.end(), buf_);
  fftw_execute(static_cast<fftw_plan>(plan_fwd_));
  std::copy(buf_, buf_ + n_, x.begin());
}

void Fft::backward_inplace(std::vector<cplx>& x) {
  std::copy(x.begin(), x.end(), buf_);
  fftw_execute(static_cast<fftw_plan>(plan_bwd_));
  std::copy(buf_, buf_ + n_, x.begin());
}

void Fft::filter_inplace(std::vector<cplx>& x, const std::vector<cplx>& spectral_op) {
  backward_inplace(x);
  const double inv_n = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) x[i] *= spectral_op[i] * inv_n;
  forward_inplace(x);
}

void Fft::analysis_inplace(std::vector<cplx>& x, double dt) {
  backward_inplace(x);
  for (auto& v : x) v *= dt;
}

void Fft::synthesis_inplace(std::vector<cplx>& x, double dt) {
  forward_inplace(x);
  const double s = 1.0 / (static_cast<double>(n_) * dt);
  for (auto& v : x) v *= s;
}

std::vector<double> fft_frequencies(std::size_t n, double dt) {
  std::vector<double> f(n);
  const double df = 1.0 / (static_cast<double>(n) * dt);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) f[i] = static_cast<double>(i) * df;
  for (std::size_t i = half; i < n; ++i)
    f[i] = (static_cast<double>(i) - static_cast<double>(n)) * df;
  return f;
}

std::vector<double> fft_omega(std::size_t n, double dt) {
  auto f = fft_frequencies(n, dt);
  for (auto& v : f) v *= 2.0 * M_PI;
  return f;
}

}  // namespace nlilab
