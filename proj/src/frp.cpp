#include "nlilab/frp.hpp"

#include "nlilab/channel.hpp"
#include "nlilab/errors.hpp"

namespace nlilab {

namespace {

// Triple sum at one index, fixed (k, l, m) nesting order so parallel and
// serial paths produce identical floating-point results.
inline std::size_t wrap_index(std::size_t n0, std::size_t off, std::size_t n) {
  const std::size_t i = n0 + off;
  return i >= n ? i - n : i;
}

inline CVec2 nli_at(const cplx* ax, const cplx* ay, std::size_t n, const KernelTensor& kt,
                    double gamma, double es, std::size_t n0,
                    const std::size_t* offsets) {
  const int mem = kt.memory;
  const int side = 2 * mem + 1;
  cplx accx(0, 0), accy(0, 0);
  const cplx* s = kt.values.data();
  for (int ki = 0; ki < side; ++ki) {
    const std::size_t ik = wrap_index(n0, offsets[ki], n);
    for (int li = 0; li < side; ++li) {
      const std::size_t il = wrap_index(n0, offsets[li], n);
      const cplx q = std::conj(ax[ik]) * ax[il] + std::conj(ay[ik]) * ay[il];
      const cplx* srow = s + (static_cast<std::size_t>(ki) * side + li) * side;
      for (int mi = 0; mi < side; ++mi) {
        const std::size_t im = wrap_index(n0, offsets[mi], n);
        const cplx t = q * srow[mi];
        accx += t * ax[im];
        accy += t * ay[im];
      }
    }
  }
  const cplx j89(0.0, (8.0 / 9.0) * gamma * es);
  return {j89 * accx, j89 * accy};
}

// nonnegative circular offsets for relative shifts -M..M
std::vector<std::size_t> window_offsets(int mem, std::size_t n) {
  std::vector<std::size_t> off(2 * mem + 1);
  for (int j = -mem; j <= mem; ++j) {
    long long v = j % static_cast<long long>(n);
    if (v < 0) v += static_cast<long long>(n);
    off[j + mem] = static_cast<std::size_t>(v);
  }
  return off;
}

}  // namespace

CVec2 frp_nli(const DualPolSymbols& a, const KernelTensor& kt, double gamma,
              double es_joule, std::size_t n0, bool circular) {
  const std::size_t n = a.size();
  if (n0 >= n) throw InputError("frp_nli: index out of range");
  const int mem = kt.memory;
  if (!circular) {
    if (static_cast<std::size_t>(mem) > n0 || n0 + static_cast<std::size_t>(mem) >= n)
      throw InputError("frp_nli: window exceeds sequence; pass circular=true");
  }
  const auto off = window_offsets(mem, n);
  return nli_at(a.x.data(), a.y.data(), n, kt, gamma, es_joule, n0, off.data());
}

DualPolSymbols frp_nli_sequence(const DualPolSymbols& a, const KernelTensor& kt,
                                double gamma, double es_joule) {
  const std::size_t n = a.size();
  DualPolSymbols out(n);
  const cplx* ax = a.x.data();
  const cplx* ay = a.y.data();
  const auto off = window_offsets(kt.memory, n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    const CVec2 d =
        nli_at(ax, ay, n, kt, gamma, es_joule, static_cast<std::size_t>(i), off.data());
    out.x[i] = d.x;
    out.y[i] = d.y;
  }
  return out;
}

DualPolSymbols frp_nli_sequence_serial(const DualPolSymbols& a, const KernelTensor& kt,
                                       double gamma, double es_joule) {
  const std::size_t n = a.size();
  DualPolSymbols out(n);
  const auto off = window_offsets(kt.memory, n);
  for (std::size_t i = 0; i < n; ++i) {
    const CVec2 d = nli_at(a.x.data(), a.y.data(), n, kt, gamma, es_joule, i, off.data());
    out.x[i] = d.x;
    out.y[i] = d.y;
  }
  return out;
}

DualPolSymbols surrogate_channel(const DualPolSymbols& a, const KernelTensor& kt,
                                 double gamma, double es_joule, double sigma_n_sq,
                                 GaussianSampler& rng) {
  DualPolSymbols out = frp_nli_sequence(a, kt, gamma, es_joule);
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.x[i] += a.x[i];
    out.y[i] += a.y[i];
  }
  return add_ase(out, sigma_n_sq, rng);
}

}  // namespace nlilab
