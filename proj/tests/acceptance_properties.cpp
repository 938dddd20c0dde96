// Property acceptance suite: nine fast checks, one pass/fail line each.
// Exit code is the number of failed criteria.
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "nlilab/channel.hpp"
#include "nlilab/constellation.hpp"
#include "nlilab/errors.hpp"
#include "nlilab/experiment.hpp"
#include "nlilab/fec.hpp"
#include "nlilab/fft.hpp"
#include "nlilab/frp.hpp"
#include "nlilab/kernels.hpp"
#include "nlilab/learn.hpp"
#include "nlilab/rng.hpp"
#include "nlilab/rxdsp.hpp"
#include "nlilab/sigproc.hpp"

using namespace nlilab;

namespace {

int g_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  std::printf("[%s] criterion %d: %s (%s)\n", pass ? "PASS" : "FAIL", id, what.c_str(),
              detail.c_str());
  if (!pass) ++g_failures;
}

DualPolSymbols random_qam(std::size_t n, std::uint64_t seed) {
  const Constellation c = pm16qam();
  GaussianSampler rng(seed);
  DualPolSymbols a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.x[i] = c.points[rng.next_u64() & 15u];
    a.y[i] = c.points[rng.next_u64() & 15u];
  }
  return a;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b, c);
  return buf;
}

// 1. gamma = 0 chain is the identity after CDC and matched filtering
void criterion1() {
  LinkConfig cfg;
  cfg.power_dbm = 14.0;
  FiberParams fp;
  fp.gamma = 0.0;
  const auto a = random_qam(1 << 10, 101);
  StepPolicy sp;
  auto w = modulate(a, cfg);
  w = propagate_ssfm(w, fp, sp);
  w = cdc(w, fp.beta2_ps2_per_km, fp.length_km);
  const auto b = matched_filter_and_sample(w, cfg);
  double dmax = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    dmax = std::max(dmax, std::max(std::abs(b.x[i] - a.x[i]), std::abs(b.y[i] - a.y[i])));
  report(1, dmax < 1e-9, "linear-channel identity", fmt("max |err| = %.3g", dmax));
}

// 2. beta2 = 0 propagation has the closed-form SPM solution
void criterion2() {
  LinkConfig cfg;
  cfg.power_dbm = 15.0;
  FiberParams fp;
  fp.beta2_ps2_per_km = 0.0;
  fp.length_km = 80.0;
  const auto a = random_qam(512, 102);
  const auto w = modulate(a, cfg);
  StepPolicy sp;
  sp.mode = StepPolicy::Mode::Fixed;
  sp.fixed_step_km = 0.02;
  const auto out = propagate_ssfm(w, fp, sp);
  const double leff = fp.effective_length_km();
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double p = std::norm(w.x[i]) + std::norm(w.y[i]);
    const cplx rot = std::polar(1.0, (8.0 / 9.0) * fp.gamma * leff * p);
    num += std::norm(out.x[i] - rot * w.x[i]) + std::norm(out.y[i] - rot * w.y[i]);
    den += std::norm(w.x[i]) + std::norm(w.y[i]);
  }
  const double rel = std::sqrt(num / den);
  report(2, rel < 1e-8, "dispersion-free closed form", fmt("rel err = %.3g", rel));
}

// 3. frp_nli equals an in-test brute-force triple loop
void criterion3() {
  double worst = 0.0;
  for (int m : {1, 2, 3}) {
    const auto a = random_qam(64, 103 + m);
    GaussianSampler rng(203 + m);
    KernelTensor k(m);
    for (auto& v : k.values) v = rng.complex_normal(1.0);
    const double gamma = 1.2, es = 0.7;
    for (std::size_t n0 : {std::size_t(0), std::size_t(31), std::size_t(63)}) {
      cplx ax(0, 0), ay(0, 0);
      const long long n = 64;
      for (int kk = -m; kk <= m; ++kk)
        for (int ll = -m; ll <= m; ++ll)
          for (int mm = -m; mm <= m; ++mm) {
            const auto idx = [&](int off) {
              long long i = (static_cast<long long>(n0) + off) % n;
              return static_cast<std::size_t>(i < 0 ? i + n : i);
            };
            const cplx q = std::conj(a.x[idx(kk)]) * a.x[idx(ll)] +
                           std::conj(a.y[idx(kk)]) * a.y[idx(ll)];
            ax += q * a.x[idx(mm)] * k.at(kk, ll, mm);
            ay += q * a.y[idx(mm)] * k.at(kk, ll, mm);
          }
      const cplx pref(0.0, (8.0 / 9.0) * gamma * es);
      const CVec2 got = frp_nli(a, k, gamma, es, n0);
      worst = std::max(worst, std::abs(got.x - pref * ax));
      worst = std::max(worst, std::abs(got.y - pref * ay));
    }
  }
  report(3, worst < 1e-12, "FRP brute-force equivalence", fmt("max |diff| = %.3g", worst));
}

// 4. analytic kernel structure: l<->m symmetry, L -> 0, beta2 = 0 quadrature
void criterion4() {
  LinkConfig cfg;
  cfg.roll_off = 0.25;
  FiberParams fp;
  fp.length_km = 80.0;
  AnalyticKernelOptions opts;
  opts.n_sym = 2048;
  opts.z_nodes = 129;

  const int M = 2;
  const KernelTensor kt = analytic_kernels(cfg, fp, M, opts);
  double mx = 0.0, asym = 0.0;
  for (const auto& v : kt.values) mx = std::max(mx, std::abs(v));
  for (int k = -M; k <= M; ++k)
    for (int l = -M; l <= M; ++l)
      for (int m = -M; m <= M; ++m)
        asym = std::max(asym, std::abs(kt.at(k, l, m) - kt.at(k, m, l)));
  const bool sym_ok = asym < 1e-8 * mx;

  FiberParams fp0 = fp;
  fp0.length_km = 0.0;
  const KernelTensor z = analytic_kernels(cfg, fp0, 1, opts);
  double zmax = 0.0;
  for (const auto& v : z.values) zmax = std::max(zmax, std::abs(v));

  FiberParams fpn = fp;
  fpn.beta2_ps2_per_km = 0.0;
  const KernelTensor kn = analytic_kernels(cfg, fpn, M, opts);
  // direct quadrature with the closed-form time pulse
  const auto rrc_time = [&](double t) {
    const double T = 1.0 / cfg.rs_baud, beta = cfg.roll_off;
    const double x = t / T, fb = 4.0 * beta * x, s = 1.0 / std::sqrt(T);
    if (std::abs(x) < 1e-9) return s * (1.0 - beta + 4.0 * beta / M_PI);
    if (std::abs(std::abs(fb) - 1.0) < 1e-9)
      return s * beta / std::sqrt(2.0) *
             ((1.0 + 2.0 / M_PI) * std::sin(M_PI / (4.0 * beta)) +
              (1.0 - 2.0 / M_PI) * std::cos(M_PI / (4.0 * beta)));
    return s * (std::sin(M_PI * x * (1.0 - beta)) + fb * std::cos(M_PI * x * (1.0 + beta))) /
           (M_PI * x * (1.0 - fb * fb));
  };
  const int osf = 16, half = 512 * osf;
  const double dt = 1.0 / (osf * cfg.rs_baud);
  std::vector<double> h(2 * half);
  for (int i = 0; i < 2 * half; ++i) h[i] = rrc_time((i - half) * dt);
  double qerr = 0.0, qmax = 0.0;
  for (const auto& v : kn.values) qmax = std::max(qmax, std::abs(v));
  for (int k = -M; k <= M; ++k)
    for (int l = -M; l <= M; ++l)
      for (int m = -M; m <= M; ++m) {
        double acc = 0.0;
        const int ok = k * osf, ol = l * osf, om = m * osf;
        for (int i = 0; i < 2 * half; ++i) {
          const auto tap = [&](int off) {
            const int j = i - off;
            return (j >= 0 && j < 2 * half) ? h[j] : 0.0;
          };
          acc += h[i] * tap(ok) * tap(ol) * tap(om);
        }
        qerr = std::max(qerr,
                        std::abs(kn.at(k, l, m) - fpn.effective_length_km() * acc * dt));
      }
  const bool quad_ok = qerr < 1e-6 * qmax;
  report(4, sym_ok && zmax == 0.0 && quad_ok, "analytic-kernel structure",
         fmt("asym = %.3g max, L->0 max = %.3g, quadrature err = %.3g rel", asym / mx, zmax,
             qerr / qmax));
}

// 5. residual after removing the kernel-predicted first-order term scales
//    like a higher perturbation order on a scaled-down link
void criterion5() {
  LinkConfig cfg;
  cfg.rs_baud = 10e9;  // scaled-down link: memory M=5 covers the physics
  cfg.roll_off = 0.5;
  cfg.power_dbm = -10.0;
  FiberParams fp;
  fp.length_km = 80.0;
  const int M = 5;
  AnalyticKernelOptions opts;
  opts.z_nodes = 161;
  const KernelTensor kt = analytic_kernels(cfg, fp, M, opts);

  const auto a = random_qam(1 << 10, 105);
  StepPolicy sp;
  sp.mode = StepPolicy::Mode::Fixed;
  sp.fixed_step_km = 0.1;
  std::vector<double> logp, logr;
  for (double p_dbm : {-10.0, -7.0, -4.0}) {
    cfg.power_dbm = p_dbm;
    auto w = modulate(a, cfg);
    w = propagate_ssfm(w, fp, sp);
    w = cdc(w, fp.beta2_ps2_per_km, fp.length_km);
    const auto y = matched_filter_and_sample(w, cfg);
    const auto d = frp_nli_sequence(a, kt, fp.gamma, cfg.es_joule());
    double res = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
      res += std::norm(y.x[i] - a.x[i] - d.x[i]) + std::norm(y.y[i] - a.y[i] - d.y[i]);
    logp.push_back(p_dbm / 10.0);
    logr.push_back(std::log10(res));
  }
  // least-squares slope through the three points
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < 3; ++i) {
    sx += logp[i];
    sy += logr[i];
    sxx += logp[i] * logp[i];
    sxy += logp[i] * logr[i];
  }
  const double slope = (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
  report(5, slope >= 2.5, "first-order residual scaling",
         fmt("log-log slope = %.3f (need >= 2.5)", slope));
}

// 6. NBGD reaches the least-squares anchor; gradient matches finite
//    differences
void criterion6() {
  const double gamma = 1.0, es = 1.0;
  GaussianSampler rng(106);
  KernelTensor gen(1);
  for (auto& v : gen.values) v = rng.complex_normal(1.0);
  const auto a = random_qam(2000, 107);
  const auto d = frp_nli_sequence(a, gen, gamma, es);
  DualPolSymbols y(2000);
  for (std::size_t i = 0; i < 2000; ++i) {
    y.x[i] = a.x[i] + d.x[i];
    y.y[i] = a.y[i] + d.y[i];
  }
  TrainingSet ts;
  ts.memory = 1;
  ts.batch_count = 1;
  ts.samples_per_batch = 2000;
  append_training_block(ts, a, y);

  NbgdConfig ncfg;
  ncfg.epochs = 600;
  const NbgdResult res = nbgd_fit(ts, ncfg, gamma, es);
  const KernelTensor opt = ls_oracle(ts, 1, gamma, es, 0.0);
  const double l_ls = model_rms_loss(ts, opt, gamma, es);
  const bool anchor_ok = res.best_loss <= l_ls + 1e-4;

  KernelTensor probe(1);
  for (auto& v : probe.values) v = rng.complex_normal(0.5);
  std::vector<cplx> grad;
  loss_and_gradient(ts, probe, gamma, es, grad);
  double worst = 0.0;
  const double h = 1e-6;
  for (int t = 0; t < 20; ++t) {
    const std::size_t idx = rng.next_u64() % probe.values.size();
    for (int part = 0; part < 2; ++part) {
      KernelTensor kp = probe, km = probe;
      const cplx dh = part == 0 ? cplx(h, 0.0) : cplx(0.0, h);
      kp.values[idx] += dh;
      km.values[idx] -= dh;
      const double fd =
          (model_rms_loss(ts, kp, gamma, es) - model_rms_loss(ts, km, gamma, es)) / (2 * h);
      const double an = part == 0 ? grad[idx].real() : grad[idx].imag();
      worst = std::max(worst, std::abs(fd - an) / std::max(1e-12, std::abs(an)));
    }
  }
  report(6, anchor_ok && worst < 1e-5, "optimizer anchor",
         fmt("nbgd loss - ls loss = %.3g, worst grad rel err = %.3g",
             res.best_loss - l_ls, worst));
}

// 7. gamma = 0 pipeline GMI against an exact-density Monte-Carlo reference
//    computed entirely inside this test
void criterion7() {
  const Constellation c = pm16qam();
  LinkConfig cfg;
  cfg.power_dbm = 14.0;
  FiberParams fp;
  fp.gamma = 0.0;
  double worst = 0.0;
  for (double snr_db : {8.0, 12.0, 16.0}) {
    const double var = std::pow(10.0, -snr_db / 10.0);
    const std::size_t n = 1 << 17;
    GaussianSampler brng(107 + static_cast<std::uint64_t>(snr_db));
    BitSeq bits(n * 8);
    for (auto& b : bits) b = brng.bit();
    const auto a = map_bits(bits, c);

    // full pipeline at gamma = 0
    StepPolicy sp;
    auto w = modulate(a, cfg);
    w = propagate_ssfm(w, fp, sp);
    w = cdc(w, fp.beta2_ps2_per_km, fp.length_km);
    auto y = matched_filter_and_sample(w, cfg);
    GaussianSampler nrng(207 + static_cast<std::uint64_t>(snr_db));
    y = add_ase(y, var, nrng);
    const GenieStats st = estimate_genie_stats(y, a, c);
    const double g_pipe = gmi(gaussian_llrs(y, st, c), bits);

    // reference: exact AWGN densities and a locally computed GMI sum
    long double loss = 0.0L;
    const double inv = 1.0 / var;  // exponent scale: |d|^2 / var
    std::size_t nb = 0;
    for (std::size_t i = 0; i < n; ++i) {
      for (int pol = 0; pol < 2; ++pol) {
        const cplx yy = pol == 0 ? y.x[i] : y.y[i];
        long double dens[16];
        for (unsigned q = 0; q < 16; ++q)
          dens[q] = std::exp(-static_cast<long double>(inv * std::norm(yy - c.points[q])));
        for (int b = 0; b < 4; ++b) {
          long double p0 = 0.0L, p1 = 0.0L;
          for (unsigned q = 0; q < 16; ++q)
            ((q >> (3 - b)) & 1 ? p1 : p0) += dens[q];
          const std::uint8_t tx = bits[(i * 2 + pol) * 4 + b];
          const long double ptx = tx ? p1 : p0;
          loss += std::log((p0 + p1) / ptx) / std::log(2.0L);
          ++nb;
        }
      }
    }
    const double g_ref = 4.0 - static_cast<double>(loss) / (static_cast<double>(nb) / 4.0);
    worst = std::max(worst, std::abs(g_pipe - g_ref));
  }
  report(7, worst < 0.03, "GMI exact-density oracle", fmt("worst |diff| = %.4f bit", worst));
}

// 8. effective SNR calibration
void criterion8() {
  const std::size_t n = 1000000;
  const auto a = random_qam(n, 108);
  GaussianSampler rng(208);
  DualPolSymbols y = a;
  for (std::size_t i = 0; i < n; ++i) {
    y.x[i] += rng.complex_normal(0.1);
    y.y[i] += rng.complex_normal(0.1);
  }
  const double s = effective_snr(y, a).combined_db;
  report(8, std::abs(s - 10.0) < 0.05, "effective-SNR calibration",
         fmt("measured %.4f dB (want 10.00 +- 0.05)", s));
}

// 9. LDPC encoder parity, noiseless decode, FER monotonicity
void criterion9() {
  const LdpcCode code = LdpcCode::load(default_ldpc_matrix_path());
  GaussianSampler rng(109);
  bool parity = true;
  for (int t = 0; t < 1000; ++t) {
    BitSeq info(code.k());
    for (auto& b : info) b = rng.bit();
    if (!code.parity_ok(code.encode(info))) parity = false;
  }
  bool exact = true;
  {
    BitSeq info(code.k());
    for (auto& b : info) b = rng.bit();
    const BitSeq cw = code.encode(info);
    std::vector<double> llr(code.n());
    for (int i = 0; i < code.n(); ++i) llr[i] = cw[i] ? -25.0 : 25.0;
    const auto dec = code.decode(llr);
    exact = dec.converged && dec.info == info;
  }
  std::vector<double> fer;
  for (double snr_db : {4.6, 4.93, 5.26, 5.6}) {  // 1 dB sweep
    const double sigma2 = std::pow(10.0, -snr_db / 10.0);
    std::size_t errors = 0;
    const int frames = 200;
    for (int f = 0; f < frames; ++f) {
      BitSeq info(code.k());
      for (auto& b : info) b = rng.bit();
      const BitSeq cw = code.encode(info);
      std::vector<double> llr(code.n());
      for (int i = 0; i < code.n(); ++i) {
        const double yv = (cw[i] ? -1.0 : 1.0) + std::sqrt(sigma2) * rng.normal();
        llr[i] = 2.0 * yv / sigma2;
      }
      if (code.decode(llr).info != info) ++errors;
    }
    fer.push_back(static_cast<double>(errors) / frames);
  }
  bool mono = true;
  for (std::size_t i = 1; i < fer.size(); ++i)
    if (fer[i] > fer[i - 1]) mono = false;
  report(9, parity && exact && mono, "LDPC sanity",
         fmt("fer sweep %.3f -> %.3f -> %.3f", fer[0], fer[1], fer[3]));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  std::printf("%d of 9 criteria passed\n", 9 - g_failures);
  return g_failures;
}
