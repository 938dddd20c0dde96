#ifndef NLILAB_TYPES_HPP
#define NLILAB_TYPES_HPP

#include <complex>
#include <cstdint>
#include <vector>

namespace nlilab {

using cplx = std::complex<double>;

// Unit conventions used throughout: time in seconds, distance in km,
// beta2 in s^2/km, gamma in 1/(W km), power in W, pulse energy Es in J.

inline double dbm_to_watt(double p_dbm) { return 1e-3 * std::pow(10.0, p_dbm / 10.0); }
inline double watt_to_dbm(double p_w) { return 10.0 * std::log10(p_w / 1e-3); }
inline double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }
inline double lin_to_db(double lin) { return 10.0 * std::log10(lin); }

/// Jones vector: one complex amplitude per polarization.
struct CVec2 {
  cplx x{0.0, 0.0};
  cplx y{0.0, 0.0};
};

inline CVec2 operator+(const CVec2& a, const CVec2& b) { return {a.x + b.x, a.y + b.y}; }
inline CVec2 operator-(const CVec2& a, const CVec2& b) { return {a.x - b.x, a.y - b.y}; }

/// Time-indexed dual-polarization symbol sequence, unit average energy
/// per polarization.
struct DualPolSymbols {
  std::vector<cplx> x;
  std::vector<cplx> y;

  DualPolSymbols() = default;
  explicit DualPolSymbols(std::size_t n) : x(n), y(n) {}
  std::size_t size() const { return x.size(); }
  CVec2 at(std::size_t n) const { return {x[n], y[n]}; }
};

/// Oversampled dual-polarization complex baseband field.
struct DualPolWaveform {
  std::vector<cplx> x;
  std::vector<cplx> y;
  double sample_rate = 0.0;  // Hz, == osf * Rs
  int osf = 0;               // samples per symbol

  std::size_t size() const { return x.size(); }
  double dt() const { return 1.0 / sample_rate; }
};

struct FiberParams {
  double gamma = 1.2;           // 1/(W km)
  double alpha_db_per_km = 0.2;
  double beta2_ps2_per_km = -21.7;
  double length_km = 230.0;

  double beta2_s2_per_km() const { return beta2_ps2_per_km * 1e-24; }
  // power attenuation coefficient, 1/km
  double alpha_lin() const { return alpha_db_per_km * std::log(10.0) / 10.0; }
  double effective_length_km() const {
    const double a = alpha_lin();
    if (a == 0.0) return length_km;
    return (1.0 - std::exp(-a * length_km)) / a;
  }
};

struct StepPolicy {
  enum class Mode { Fixed, NonlinearPhaseBounded };
  Mode mode = Mode::NonlinearPhaseBounded;
  double fixed_step_km = 0.1;
  double max_phase_rad = 1e-3;
  int max_steps = 20000;
};

/// Link + signaling configuration shared by channel, kernels and learning.
struct LinkConfig {
  FiberParams fiber;
  double rs_baud = 60e9;
  double roll_off = 0.01;
  int osf = 8;
  int memory = 9;                 // FRP model memory M
  double power_dbm = 14.0;        // launch power P
  double sigma_n_sq = -1.0;       // ASE variance per complex dim; <0 = derive
  double nf_db = 4.0;             // EDFA noise figure for sigma_from_nf
  double center_freq_hz = 193.41e12;

  double symbol_period() const { return 1.0 / rs_baud; }
  double es_joule() const { return dbm_to_watt(power_dbm) / (2.0 * rs_baud); }
};

}  // namespace nlilab

#endif
