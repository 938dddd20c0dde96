#include "nlilab/sigproc.hpp"

#include <cmath>

#include "nlilab/errors.hpp"
#include "nlilab/fft.hpp"

namespace nlilab {

std::vector<double> rrc_spectrum(double roll_off, double rs_baud,
                                 const std::vector<double>& f_grid) {
  if (roll_off <= 0.0 || roll_off > 1.0)
    throw ConfigError("rrc_spectrum: roll_off must be in (0, 1]");
  const double T = 1.0 / rs_baud;
  const double f1 = (1.0 - roll_off) / (2.0 * T);
  const double f2 = (1.0 + roll_off) / (2.0 * T);
  std::vector<double> h(f_grid.size());
  for (std::size_t i = 0; i < f_grid.size(); ++i) {
    const double af = std::abs(f_grid[i]);
    double g = 0.0;
    if (af <= f1) {
      g = T;
    } else if (af <= f2) {
      g = 0.5 * T * (1.0 + std::cos(M_PI * T / roll_off * (af - f1)));
    }
    h[i] = std::sqrt(g);
  }
  return h;
}

DualPolWaveform modulate(const DualPolSymbols& a, const LinkConfig& cfg) {
  if (cfg.osf < 4) throw ConfigError("modulate: osf must be >= 4");
  const std::size_t n_sym = a.size();
  const std::size_t n = n_sym * static_cast<std::size_t>(cfg.osf);
  const double fs = cfg.osf * cfg.rs_baud;
  const double dt = 1.0 / fs;
  const double sqrt_es = std::sqrt(cfg.es_joule());

  const auto f = fft_frequencies(n, dt);
  const auto h = rrc_spectrum(cfg.roll_off, cfg.rs_baud, f);

  DualPolWaveform w;
  w.sample_rate = fs;
  w.osf = cfg.osf;
  Fft fft(n);
  for (int pol = 0; pol < 2; ++pol) {
    const auto& sym = (pol == 0) ? a.x : a.y;
    std::vector<cplx> buf(n, cplx(0.0, 0.0));
    for (std::size_t k = 0; k < n_sym; ++k) buf[k * cfg.osf] = sym[k];
    // delta-train spectrum (unit weights, no dt measure)
    fft.backward_inplace(buf);
    const double inv_ndt = 1.0 / (static_cast<double>(n) * dt);
    for (std::size_t i = 0; i < n; ++i) buf[i] *= sqrt_es * h[i] * inv_ndt;
    fft.forward_inplace(buf);
    ((pol == 0) ? w.x : w.y) = std::move(buf);
  }
  return w;
}

DualPolSymbols matched_filter_and_sample(const DualPolWaveform& w, const LinkConfig& cfg) {
  if (w.osf != cfg.osf)
    throw ConfigError("matched_filter_and_sample: waveform osf mismatch");
  if (w.sample_rate != cfg.osf * cfg.rs_baud)
    throw ConfigError("matched_filter_and_sample: sample rate mismatch");
  const std::size_t n = w.size();
  const std::size_t n_sym = n / static_cast<std::size_t>(cfg.osf);
  const double dt = w.dt();
  const double inv_sqrt_es = 1.0 / std::sqrt(cfg.es_joule());

  const auto f = fft_frequencies(n, dt);
  const auto h = rrc_spectrum(cfg.roll_off, cfg.rs_baud, f);

  DualPolSymbols out(n_sym);
  Fft fft(n);
  std::vector<cplx> buf(n);
  for (int pol = 0; pol < 2; ++pol) {
    buf = (pol == 0) ? w.x : w.y;
    fft.backward_inplace(buf);
    const double inv_n = 1.0 / static_cast<double>(n);
    // conj(H) = H: zero-phase real spectrum
    for (std::size_t i = 0; i < n; ++i) buf[i] *= h[i] * inv_n;
    fft.forward_inplace(buf);
    auto& sym = (pol == 0) ? out.x : out.y;
    for (std::size_t k = 0; k < n_sym; ++k)
      sym[k] = buf[k * cfg.osf] * inv_sqrt_es;
  }
  return out;
}

}  // namespace nlilab
