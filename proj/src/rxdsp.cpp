#include "nlilab/rxdsp.hpp"

#include <cmath>

#include "nlilab/errors.hpp"
#include "nlilab/frp.hpp"

namespace nlilab {

DualPolSymbols genie_cancel(const DualPolSymbols& y, const DualPolSymbols& a,
                            const KernelTensor& k, double gamma, double es_joule) {
  if (y.size() != a.size()) throw InputError("genie_cancel: length mismatch");
  const DualPolSymbols d = frp_nli_sequence(a, k, gamma, es_joule);
  DualPolSymbols out(y.size());
  for (std::size_t i = 0; i < y.size(); ++i) {
    out.x[i] = y.x[i] - d.x[i];
    out.y[i] = y.y[i] - d.y[i];
  }
  return out;
}

namespace {

// pairwise summation for deterministic, accurate reductions
template <typename T, typename F>
T pairwise(std::size_t lo, std::size_t hi, const F& f) {
  if (hi - lo <= 16) {
    T acc{};
    for (std::size_t i = lo; i < hi; ++i) acc += f(i);
    return acc;
  }
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise<T>(lo, mid, f) + pairwise<T>(mid, hi, f);
}

}  // namespace

EffectiveSnr effective_snr(const DualPolSymbols& ytilde, const DualPolSymbols& a) {
  if (ytilde.size() != a.size() || a.size() == 0)
    throw InputError("effective_snr: shape mismatch or empty input");
  const double cap = 200.0;
  double sig[2], noise[2];
  cplx hfit[2];
  for (int pol = 0; pol < 2; ++pol) {
    const auto& yv = (pol == 0) ? ytilde.x : ytilde.y;
    const auto& av = (pol == 0) ? a.x : a.y;
    const std::size_t n = a.size();
    const cplx num = pairwise<cplx>(0, n, [&](std::size_t i) { return std::conj(av[i]) * yv[i]; });
    const double den = pairwise<double>(0, n, [&](std::size_t i) { return std::norm(av[i]); });
    if (den == 0.0) throw InputError("effective_snr: zero-energy reference");
    const cplx h = num / den;
    hfit[pol] = h;
    sig[pol] = std::norm(h) * den;
    noise[pol] =
        pairwise<double>(0, n, [&](std::size_t i) { return std::norm(yv[i] - h * av[i]); });
  }
  EffectiveSnr out;
  out.h_x = hfit[0];
  out.h_y = hfit[1];
  const auto to_db = [cap](double s, double e) {
    if (e <= 0.0) return cap;
    return std::min(cap, 10.0 * std::log10(s / e));
  };
  out.x_db = to_db(sig[0], noise[0]);
  out.y_db = to_db(sig[1], noise[1]);
  out.combined_db = to_db(sig[0] + sig[1], noise[0] + noise[1]);
  return out;
}

namespace {

GenieStats::Pol pol_stats(const std::vector<cplx>& yv, const std::vector<cplx>& av,
                          const Constellation& c) {
  const std::size_t npts = c.size();
  GenieStats::Pol p;
  p.mean.assign(npts, {0.0, 0.0});
  p.counts.assign(npts, 0);
  std::vector<std::size_t> lab(yv.size());
  for (std::size_t i = 0; i < yv.size(); ++i) {
    // transmitted symbols are exact constellation points; match by value
    std::size_t best = 0;
    double dmin = std::numeric_limits<double>::infinity();
    for (std::size_t q = 0; q < npts; ++q) {
      const double d = std::norm(av[i] - c.points[q]);
      if (d < dmin) {
        dmin = d;
        best = q;
      }
    }
    lab[i] = best;
    p.counts[best]++;
    p.mean[best][0] += yv[i].real();
    p.mean[best][1] += yv[i].imag();
  }
  for (std::size_t q = 0; q < npts; ++q) {
    if (p.counts[q] >= 2) {
      p.mean[q][0] /= static_cast<double>(p.counts[q]);
      p.mean[q][1] /= static_cast<double>(p.counts[q]);
    } else {
      // sparse class: fall back to the transmitted point itself
      p.mean[q][0] = c.points[q].real();
      p.mean[q][1] = c.points[q].imag();
    }
  }
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < yv.size(); ++i) {
    const double rx = yv[i].real() - p.mean[lab[i]][0];
    const double ry = yv[i].imag() - p.mean[lab[i]][1];
    sxx += rx * rx;
    sxy += rx * ry;
    syy += ry * ry;
  }
  const double denom = std::max<double>(1, yv.size());
  sxx /= denom;
  sxy /= denom;
  syy /= denom;
  // regularization keeps the covariance positive definite in noiseless tests
  const double eps = 1e-12 * (sxx + syy) + 1e-30;
  p.cov = {sxx + eps, sxy, sxy, syy + eps};
  return p;
}

}  // namespace

GenieStats estimate_genie_stats(const DualPolSymbols& ytilde, const DualPolSymbols& a,
                                const Constellation& c) {
  if (ytilde.size() != a.size() || a.size() == 0)
    throw InputError("estimate_genie_stats: shape mismatch or empty input");
  GenieStats s;
  s.x = pol_stats(ytilde.x, a.x, c);
  s.y = pol_stats(ytilde.y, a.y, c);
  return s;
}

namespace {

double logsumexp(const std::vector<double>& v, std::size_t n) {
  double mx = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) mx = std::max(mx, v[i]);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += std::exp(v[i] - mx);
  return mx + std::log(acc);
}

}  // namespace

LlrBlock gaussian_llrs(const DualPolSymbols& ytilde, const GenieStats& stats,
                       const Constellation& c) {
  const int m = c.bits_per_symbol;
  const std::size_t npts = c.size();
  LlrBlock out;
  out.bits_per_symbol = m;
  out.n_symbols = ytilde.size();
  out.llr.resize(ytilde.size() * 2 * static_cast<std::size_t>(m));

  for (int pol = 0; pol < 2; ++pol) {
    const auto& yv = (pol == 0) ? ytilde.x : ytilde.y;
    const auto& ps = (pol == 0) ? stats.x : stats.y;
    const double det = ps.cov[0] * ps.cov[3] - ps.cov[1] * ps.cov[2];
    if (det <= 0.0) throw NumericalError("gaussian_llrs: covariance not positive definite");
    const double i00 = ps.cov[3] / det, i01 = -ps.cov[1] / det, i11 = ps.cov[0] / det;

    std::vector<double> expo(npts);
    std::vector<double> grp0(npts), grp1(npts);
#pragma omp parallel for schedule(static) firstprivate(expo, grp0, grp1)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(yv.size()); ++ii) {
      const std::size_t i = static_cast<std::size_t>(ii);
      for (std::size_t q = 0; q < npts; ++q) {
        const double dx = yv[i].real() - ps.mean[q][0];
        const double dy = yv[i].imag() - ps.mean[q][1];
        expo[q] = -0.5 * (dx * (i00 * dx + i01 * dy) + dy * (i01 * dx + i11 * dy));
      }
      for (int b = 0; b < m; ++b) {
        std::size_t n0 = 0, n1 = 0;
        for (std::size_t q = 0; q < npts; ++q) {
          if ((q >> (m - 1 - b)) & 1)
            grp1[n1++] = expo[q];
          else
            grp0[n0++] = expo[q];
        }
        double l = logsumexp(grp0, n0) - logsumexp(grp1, n1);
        l = std::clamp(l, -50.0, 50.0);
        out.llr[(i * 2 + static_cast<std::size_t>(pol)) * m + b] = l;
      }
    }
  }
  return out;
}

double gmi(const LlrBlock& llrs, const BitSeq& tx_bits) {
  const std::size_t nbits = llrs.llr.size();
  if (tx_bits.size() != nbits) throw InputError("gmi: bit count mismatch");
  if (nbits == 0) throw InputError("gmi: empty input");
  const double inv_ln2 = 1.0 / std::log(2.0);
  const double loss = pairwise<double>(0, nbits, [&](std::size_t i) {
    const double l = tx_bits[i] ? llrs.llr[i] : -llrs.llr[i];
    return std::log1p(std::exp(l)) * inv_ln2;
  });
  const double n2d = static_cast<double>(2 * llrs.n_symbols);
  return static_cast<double>(llrs.bits_per_symbol) - loss / n2d;
}

}  // namespace nlilab
