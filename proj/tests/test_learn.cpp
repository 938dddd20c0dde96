#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlilab/errors.hpp"
#include "nlilab/frp.hpp"
#include "nlilab/learn.hpp"
#include "nlilab/rng.hpp"

using namespace nlilab;

namespace {

DualPolSymbols random_symbols(std::size_t n, std::uint64_t seed) {
  GaussianSampler rng(seed);
  DualPolSymbols a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.x[i] = rng.complex_normal(1.0);
    a.y[i] = rng.complex_normal(1.0);
  }
  return a;
}

KernelTensor random_kernel(int m, std::uint64_t seed, double scale = 1.0) {
  GaussianSampler rng(seed);
  KernelTensor k(m);
  for (auto& v : k.values) v = rng.complex_normal(scale * scale);
  return k;
}

// synthetic noiseless set: targets generated by frp_nli from a known tensor
TrainingSet synthetic_set(const KernelTensor& gen, std::size_t n, double gamma, double es,
                          std::uint64_t seed) {
  const auto a = random_symbols(n, seed);
  const auto d = frp_nli_sequence(a, gen, gamma, es);
  DualPolSymbols y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y.x[i] = a.x[i] + d.x[i];
    y.y[i] = a.y[i] + d.y[i];
  }
  TrainingSet ts;
  ts.memory = gen.memory;
  ts.batch_count = 1;
  ts.samples_per_batch = n;
  append_training_block(ts, a, y);
  return ts;
}

}  // namespace

TEST_CASE("gradient of the RMS loss matches central finite differences") {
  const double gamma = 1.0, es = 1.0;
  const auto gen = random_kernel(1, 51);
  auto ts = synthetic_set(gen, 200, gamma, es, 52);
  const auto k0 = random_kernel(1, 53);

  std::vector<cplx> grad;
  const double l0 = loss_and_gradient(ts, k0, gamma, es, grad);
  CHECK(l0 > 0.0);

  GaussianSampler pick(54);
  const double h = 1e-6;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t idx = pick.next_u64() % k0.values.size();
    for (int part = 0; part < 2; ++part) {
      KernelTensor kp = k0, km = k0;
      const cplx dh = part == 0 ? cplx(h, 0) : cplx(0, h);
      kp.values[idx] += dh;
      km.values[idx] -= dh;
      const double fd =
          (model_rms_loss(ts, kp, gamma, es) - model_rms_loss(ts, km, gamma, es)) / (2 * h);
      const double an = part == 0 ? grad[idx].real() : grad[idx].imag();
      CHECK(std::abs(fd - an) < 1e-5 * std::max(1.0, std::abs(an)));
    }
  }
}

TEST_CASE("ls_oracle recovers the generator exactly on noiseless data") {
  const double gamma = 1.0, es = 1.0;
  const auto gen = random_kernel(1, 61);
  auto ts = synthetic_set(gen, 2000, gamma, es, 62);
  const KernelTensor fit = ls_oracle(ts, 1, gamma, es, 0.0);
  double dmax = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < fit.values.size(); ++i) {
    dmax = std::max(dmax, std::abs(fit.values[i] - gen.values[i]));
    ref = std::max(ref, std::abs(gen.values[i]));
  }
  CHECK(dmax < 1e-9 * ref);

  // normal-equation residual orthogonal to the regressors: ls loss cannot
  // be beaten by the generator or by random perturbations
  const double l_opt = model_rms_loss(ts, fit, gamma, es);
  CHECK(l_opt < 1e-9);
  auto probe = fit;
  probe.values[3] += cplx(1e-3, -2e-3);
  CHECK(model_rms_loss(ts, probe, gamma, es) > l_opt);
}

TEST_CASE("ls_oracle ridge limit and singular detection") {
  const double gamma = 1.0, es = 1.0;
  const auto gen = random_kernel(1, 71);
  auto ts = synthetic_set(gen, 500, gamma, es, 72);

  const KernelTensor big = ls_oracle(ts, 1, gamma, es, 1e12);
  double mx = 0.0;
  for (const auto& v : big.values) mx = std::max(mx, std::abs(v));
  CHECK(mx < 1e-6);

  // 3 samples for 27 unknowns: singular without ridge
  auto tiny = synthetic_set(gen, 3, gamma, es, 73);
  CHECK_THROWS_AS(ls_oracle(tiny, 1, gamma, es, 0.0), NumericalError);
  CHECK_NOTHROW(ls_oracle(tiny, 1, gamma, es, 1e-6));
}

TEST_CASE("nbgd reaches the least-squares optimum on the anchor instance") {
  const double gamma = 1.0, es = 1.0;
  const auto gen = random_kernel(1, 81);
  auto ts = synthetic_set(gen, 2000, gamma, es, 82);

  NbgdConfig cfg;
  cfg.epochs = 600;
  const NbgdResult res = nbgd_fit(ts, cfg, gamma, es);
  const KernelTensor opt = ls_oracle(ts, 1, gamma, es, 0.0);
  const double l_ls = model_rms_loss(ts, opt, gamma, es);
  CHECK(res.best_loss <= l_ls + 1e-4);

  // recovered tensor close to the generator
  double dmax = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < gen.values.size(); ++i) {
    dmax = std::max(dmax, std::abs(res.kernel.values[i] - gen.values[i]));
    ref = std::max(ref, std::abs(gen.values[i]));
  }
  CHECK(dmax < 1e-3 * ref);

  CHECK(res.kernel.origin == KernelOrigin::Nbgd);
  CHECK(res.kernel.trained_power_dbm == ts.power_dbm);

  // best recorded loss is non-increasing by construction
  double best = res.loss_per_epoch.front();
  for (double l : res.loss_per_epoch) {
    CHECK(l <= best + 1e-15);
    best = std::min(best, l);
  }
}

TEST_CASE("nbgd with a small step strictly decreases the loss initially") {
  const double gamma = 1.0, es = 1.0;
  const auto gen = random_kernel(1, 91);
  auto ts = synthetic_set(gen, 400, gamma, es, 92);
  NbgdConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 10;
  const NbgdResult res = nbgd_fit(ts, cfg, gamma, es);
  double prev = model_rms_loss(ts, KernelTensor(1), gamma, es);
  for (double l : res.loss_per_epoch) {
    CHECK(l < prev);
    prev = l;
  }
}

TEST_CASE("model_nmse conventions") {
  const double gamma = 1.0, es = 1.0;
  const auto gen = random_kernel(1, 95);
  auto ts = synthetic_set(gen, 300, gamma, es, 96);
  CHECK(model_nmse_db(ts, gen, gamma, es) == -150.0);
  const KernelTensor zero(1);
  CHECK(model_nmse_db(ts, zero, gamma, es) == doctest::Approx(0.0).epsilon(1e-12));

  TrainingSet empty_targets = ts;
  for (auto& t : empty_targets.targets) t = CVec2{};
  CHECK_THROWS_AS(model_nmse_db(empty_targets, zero, gamma, es), NumericalError);
}

TEST_CASE("training set split by batches and determinism of the builder") {
  LinkConfig cfg;
  cfg.memory = 2;
  cfg.power_dbm = 10.0;
  cfg.fiber.length_km = 20.0;
  const auto ts1 = build_training_set(cfg, 128, 5, 1234);
  const auto ts2 = build_training_set(cfg, 128, 5, 1234);
  REQUIRE(ts1.count() == 5 * 128);
  CHECK(ts1.win_x == ts2.win_x);
  CHECK(ts1.targets.size() == ts2.targets.size());
  for (std::size_t i = 0; i < ts1.count(); ++i) {
    CHECK(ts1.targets[i].x == ts2.targets[i].x);
    CHECK(ts1.targets[i].y == ts2.targets[i].y);
  }

  const auto tr = ts1.train_split();
  const auto va = ts1.validation_split();
  CHECK(tr.batch_count == 4);
  CHECK(va.batch_count == 1);
  CHECK(tr.count() + va.count() == ts1.count());
  CHECK(tr.targets[0].x == ts1.targets[0].x);
  CHECK(va.targets[0].x == ts1.targets[4 * 128].x);
}

TEST_CASE("gamma=0 training targets vanish; target power grows with launch power") {
  LinkConfig cfg;
  cfg.memory = 1;
  cfg.fiber.length_km = 40.0;
  cfg.power_dbm = 12.0;

  LinkConfig lin = cfg;
  lin.fiber.gamma = 0.0;
  const auto ts0 = build_training_set(lin, 64, 1, 7);
  for (const auto& t : ts0.targets) {
    CHECK(std::abs(t.x) < 1e-8);
    CHECK(std::abs(t.y) < 1e-8);
  }

  const auto lo = build_training_set(cfg, 256, 1, 7);
  LinkConfig hi = cfg;
  hi.power_dbm = 15.0;
  const auto hi_ts = build_training_set(hi, 256, 1, 7);
  double elo = 0.0, ehi = 0.0;
  for (std::size_t i = 0; i < lo.count(); ++i) {
    elo += std::norm(lo.targets[i].x) + std::norm(lo.targets[i].y);
    ehi += std::norm(hi_ts.targets[i].x) + std::norm(hi_ts.targets[i].y);
  }
  CHECK(ehi > elo);
}
