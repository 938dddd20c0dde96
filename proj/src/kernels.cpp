#include "nlilab/kernels.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "nlilab/errors.hpp"
#include "nlilab/fft.hpp"
#include "nlilab/sha256.hpp"
#include "nlilab/sigproc.hpp"

namespace nlilab {

std::array<std::uint8_t, 32> link_fingerprint(const LinkConfig& cfg, double power_dbm) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "gamma=%.17g;alpha_db=%.17g;beta2_ps2=%.17g;L_km=%.17g;"
                "rs=%.17g;roll=%.17g;M=%d;p_dbm=%.17g",
                cfg.fiber.gamma, cfg.fiber.alpha_db_per_km, cfg.fiber.beta2_ps2_per_km,
                cfg.fiber.length_km, cfg.rs_baud, cfg.roll_off, cfg.memory, power_dbm);
  return sha256(buf, std::strlen(buf));
}

int analytic_kernel_block_symbols(const LinkConfig& cfg, const FiberParams& fp, int memory) {
  // dispersed-pulse half width in symbols at z = L
  const double spread = std::abs(fp.beta2_s2_per_km()) * fp.length_km * 2.0 * M_PI *
                        0.5 * (1.0 + cfg.roll_off) * cfg.rs_baud * cfg.rs_baud;
  const int base = 4 * memory + 32;
  return base + 4 * static_cast<int>(std::ceil(spread));
}

KernelTensor analytic_kernels(const LinkConfig& cfg, const FiberParams& fp, int memory,
                              const AnalyticKernelOptions& opts) {
  if (memory < 0) throw ConfigError("analytic_kernels: memory must be >= 0");
  KernelTensor out(memory);
  out.origin = KernelOrigin::Analytic;
  out.fingerprint = link_fingerprint(cfg, std::numeric_limits<double>::quiet_NaN());
  if (fp.length_km <= 0.0) return out;  // empty integration interval

  const int osf = opts.osf > 0 ? opts.osf : cfg.osf;
  const int n_sym =
      opts.n_sym > 0 ? opts.n_sym : analytic_kernel_block_symbols(cfg, fp, memory);
  const std::size_t n = static_cast<std::size_t>(n_sym) * osf;
  const double dt = 1.0 / (osf * cfg.rs_baud);
  int nz = opts.z_nodes;
  if (nz < 3) nz = 3;
  if (nz % 2 == 0) ++nz;
  const double hz = fp.length_km / (nz - 1);
  const double alpha = fp.alpha_lin();
  const double b2 = fp.beta2_s2_per_km();

  // dispersed unit-energy pulse at every Simpson node
  const auto f = fft_frequencies(n, dt);
  const auto h = rrc_spectrum(cfg.roll_off, cfg.rs_baud, f);
  const auto omega = fft_omega(n, dt);
  std::vector<std::vector<cplx>> pulses(nz);
  {
    Fft fft(n);
    for (int zi = 0; zi < nz; ++zi) {
      const double z = zi * hz;
      std::vector<cplx> g(n);
      const double inv_ndt = 1.0 / (static_cast<double>(n) * dt);
      for (std::size_t i = 0; i < n; ++i)
        g[i] = h[i] * std::polar(inv_ndt, 0.5 * b2 * omega[i] * omega[i] * z);
      fft.forward_inplace(g);  // synthesis of the dispersed spectrum
      pulses[zi] = std::move(g);
    }
  }

  std::vector<double> zw(nz);  // Simpson weight * e^{-alpha z} * dt
  for (int zi = 0; zi < nz; ++zi) {
    double wq = (zi == 0 || zi == nz - 1) ? 1.0 : (zi % 2 == 1 ? 4.0 : 2.0);
    zw[zi] = wq * (hz / 3.0) * std::exp(-alpha * zi * hz) * dt;
  }

  const int side = 2 * memory + 1;
  const auto wrap = [&](int s) {
    return static_cast<std::size_t>(((s % static_cast<int>(n)) + static_cast<int>(n)) %
                                    static_cast<int>(n));
  };
  // delayed copy: dst[t] = src[t - off] on the circular block, done in two
  // contiguous runs to keep the hot loops modulo-free
  const auto delayed = [&](const std::vector<cplx>& src, std::size_t off,
                           std::vector<cplx>& dst) {
    std::copy(src.end() - off, src.end(), dst.begin());
    std::copy(src.begin(), src.end() - off, dst.begin() + off);
  };

#pragma omp parallel for collapse(2) schedule(dynamic)
  for (int ki = 0; ki < side; ++ki) {
    for (int li = 0; li < side; ++li) {
      const int k = ki - memory, l = li - memory;
      std::vector<cplx> acc(side, cplx(0, 0));
      std::vector<cplx> pkl(n), gk(n), gl(n), gm(n);
      for (int zi = 0; zi < nz; ++zi) {
        const auto& g = pulses[zi];
        delayed(g, wrap(k * osf), gk);
        delayed(g, wrap(l * osf), gl);
        for (std::size_t t = 0; t < n; ++t)
          pkl[t] = std::conj(g[t]) * std::conj(gk[t]) * gl[t];
        for (int mi = 0; mi < side; ++mi) {
          delayed(g, wrap((mi - memory) * osf), gm);
          cplx s(0, 0);
          for (std::size_t t = 0; t < n; ++t) s += pkl[t] * gm[t];
          acc[mi] += zw[zi] * s;
        }
      }
      for (int mi = 0; mi < side; ++mi) out.values[out.index(k, l, mi - memory)] = acc[mi];
    }
  }
  return out;
}

namespace {

template <typename T>
void put(std::ofstream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::ifstream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw FormatError("kernel file: truncated");
  return v;
}

}  // namespace

void kernel_io_write(const std::string& path, const KernelTensor& k) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw MissingArtifact("cannot open for writing: " + path);
  os.write("NBGK", 4);
  put<std::uint32_t>(os, 1u);
  put<std::uint16_t>(os, static_cast<std::uint16_t>(k.memory));
  put<std::uint8_t>(os, static_cast<std::uint8_t>(k.origin));
  put<double>(os, k.trained_power_dbm);
  os.write(reinterpret_cast<const char*>(k.fingerprint.data()), 32);
  for (const cplx& v : k.values) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
  if (!os) throw FormatError("kernel file: write failed: " + path);
}

KernelTensor kernel_io_read(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw MissingArtifact("kernel file not found: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "NBGK", 4) != 0)
    throw FormatError("kernel file: bad magic: " + path);
  const auto version = take<std::uint32_t>(is);
  if (version != 1u) throw FormatError("kernel file: unsupported version");
  const auto m = take<std::uint16_t>(is);
  const auto origin = take<std::uint8_t>(is);
  if (origin > 1) throw FormatError("kernel file: bad origin tag");
  KernelTensor k(static_cast<int>(m));
  k.origin = static_cast<KernelOrigin>(origin);
  k.trained_power_dbm = take<double>(is);
  is.read(reinterpret_cast<char*>(k.fingerprint.data()), 32);
  if (!is) throw FormatError("kernel file: truncated header");
  for (auto& v : k.values) {
    const double re = take<double>(is);
    const double im = take<double>(is);
    if (!std::isfinite(re) || !std::isfinite(im))
      throw FormatError("kernel file: non-finite entry");
    v = cplx(re, im);
  }
  // payload must end exactly at the header-declared size
  is.peek();
  if (!is.eof()) throw FormatError("kernel file: trailing bytes (M mismatch?)");
  return k;
}

}  // namespace nlilab
