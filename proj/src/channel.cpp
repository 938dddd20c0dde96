#include "nlilab/channel.hpp"

#include <algorithm>
#include <cmath>

#include "nlilab/errors.hpp"
#include "nlilab/fft.hpp"

namespace nlilab {

namespace {

int choose_step_count(const DualPolWaveform& w, const FiberParams& fp,
                      const StepPolicy& sp) {
  if (sp.mode == StepPolicy::Mode::Fixed) {
    if (sp.fixed_step_km <= 0.0) throw ConfigError("ssfm: fixed_step_km must be > 0");
    const int n = static_cast<int>(std::ceil(fp.length_km / sp.fixed_step_km));
    if (n > sp.max_steps) throw ConfigError("ssfm: step policy exceeds max_steps");
    return std::max(1, n);
  }
  if (sp.max_phase_rad <= 0.0 || sp.max_phase_rad > 0.1)
    throw ConfigError("ssfm: max_phase_rad must be in (0, 0.1]");
  // bound the per-step nonlinear phase at the block-mean power
  double pmean = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    pmean += std::norm(w.x[i]) + std::norm(w.y[i]);
  pmean /= static_cast<double>(w.size());
  const double phase_total =
      (8.0 / 9.0) * fp.gamma * pmean * fp.effective_length_km();
  const int n = std::max(1, static_cast<int>(std::ceil(phase_total / sp.max_phase_rad)));
  if (n > sp.max_steps) throw ConfigError("ssfm: step policy exceeds max_steps");
  return n;
}

}  // namespace

DualPolWaveform propagate_ssfm(const DualPolWaveform& w, const FiberParams& fp,
                               const StepPolicy& sp) {
  if (w.size() == 0) throw InputError("ssfm: empty waveform");
  const int nsteps = choose_step_count(w, fp, sp);
  const double dz = fp.length_km / nsteps;
  const double alpha = fp.alpha_lin();
  const double g89 = (8.0 / 9.0) * fp.gamma;
  const std::size_t n = w.size();

  const auto omega = fft_omega(n, w.dt());
  std::vector<cplx> half_op(n);
  const double b2 = fp.beta2_s2_per_km();
  for (std::size_t i = 0; i < n; ++i) {
    const double ph = 0.5 * b2 * omega[i] * omega[i] * (dz / 2.0);
    half_op[i] = std::polar(1.0, ph);
  }

  DualPolWaveform out = w;
  Fft fft(n);
  double z = 0.0;
  for (int s = 0; s < nsteps; ++s) {
    fft.filter_inplace(out.x, half_op);
    fft.filter_inplace(out.y, half_op);
    const double weff = (alpha == 0.0)
                            ? dz
                            : (std::exp(-alpha * z) - std::exp(-alpha * (z + dz))) / alpha;
    for (std::size_t i = 0; i < n; ++i) {
      const double p = std::norm(out.x[i]) + std::norm(out.y[i]);
      const cplx rot = std::polar(1.0, g89 * weff * p);
      out.x[i] *= rot;
      out.y[i] *= rot;
    }
    fft.filter_inplace(out.x, half_op);
    fft.filter_inplace(out.y, half_op);
    z += dz;
  }
  return out;
}

DualPolWaveform cdc(const DualPolWaveform& w, double beta2_ps2_per_km, double length_km) {
  const std::size_t n = w.size();
  const auto omega = fft_omega(n, w.dt());
  const double b2 = beta2_ps2_per_km * 1e-24;
  std::vector<cplx> op(n);
  for (std::size_t i = 0; i < n; ++i)
    op[i] = std::polar(1.0, -0.5 * b2 * omega[i] * omega[i] * length_km);
  DualPolWaveform out = w;
  Fft fft(n);
  fft.filter_inplace(out.x, op);
  fft.filter_inplace(out.y, op);
  return out;
}

DualPolSymbols add_ase(const DualPolSymbols& s, double sigma_n_sq, GaussianSampler& rng) {
  if (sigma_n_sq < 0.0) throw ConfigError("add_ase: negative variance");
  DualPolSymbols out = s;
  if (sigma_n_sq == 0.0) return out;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out.x[i] += rng.complex_normal(sigma_n_sq);
    out.y[i] += rng.complex_normal(sigma_n_sq);
  }
  return out;
}

double sigma_from_nf(double nf_db, double gain_db, double center_freq_hz, double es_joule) {
  const double h_planck = 6.62607015e-34;
  const double g = db_to_lin(gain_db);
  const double nf = db_to_lin(nf_db);
  const double n0 = (g - 1.0) * h_planck * center_freq_hz * nf;
  return n0 / es_joule;
}

}  // namespace nlilab
