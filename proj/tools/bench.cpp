// Timing comparison of the OpenMP kernels against their serial references.
#include <omp.h>

#include <cstdio>
#include <cstring>

#include "nlilab/frp.hpp"
#include "nlilab/kernels.hpp"
#include "nlilab/learn.hpp"
#include "nlilab/rng.hpp"

using namespace nlilab;

namespace {

DualPolSymbols random_block(std::size_t n, std::uint64_t seed) {
  GaussianSampler rng(seed);
  DualPolSymbols a(n);
  for (std::size_t i = 0; i < n; ++i) {
    a.x[i] = rng.complex_normal(1.0);
    a.y[i] = rng.complex_normal(1.0);
  }
  return a;
}

KernelTensor random_kernel(int m, std::uint64_t seed) {
  GaussianSampler rng(seed);
  KernelTensor k(m);
  for (auto& v : k.values) v = rng.complex_normal(1.0);
  return k;
}

}  // namespace

int main(int argc, char** argv) {
  int mem = 9;
  std::size_t n = 4096;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--memory") && i + 1 < argc) mem = std::atoi(argv[++i]);
    if (!std::strcmp(argv[i], "--symbols") && i + 1 < argc)
      n = std::strtoull(argv[++i], nullptr, 10);
  }
  const int threads = omp_get_max_threads();
  std::printf("threads=%d  M=%d  N=%zu\n", threads, mem, n);

  const auto a = random_block(n, 11);
  const auto k = random_kernel(mem, 12);
  const double gamma = 1.2, es = 2e-13;

  double t0 = omp_get_wtime();
  const auto ref = frp_nli_sequence_serial(a, k, gamma, es);
  double t_serial = omp_get_wtime() - t0;

  t0 = omp_get_wtime();
  const auto par = frp_nli_sequence(a, k, gamma, es);
  double t_par = omp_get_wtime() - t0;

  double dmax = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    dmax = std::max(dmax, std::abs(par.x[i] - ref.x[i]) + std::abs(par.y[i] - ref.y[i]));
  std::printf("frp_nli_sequence   serial %8.3f ms   omp %8.3f ms   speedup %.2fx   maxdiff %g\n",
              1e3 * t_serial, 1e3 * t_par, t_serial / t_par, dmax);

  // gradient assembly (chunked deterministic reduction inside)
  TrainingSet ts;
  ts.memory = mem;
  DualPolSymbols y = a;
  for (std::size_t i = 0; i < n; ++i) {
    y.x[i] += 0.01 * a.x[i];
    y.y[i] += 0.01 * a.y[i];
  }
  append_training_block(ts, a, y);
  std::vector<cplx> grad;
  omp_set_num_threads(1);
  t0 = omp_get_wtime();
  loss_and_gradient(ts, k, gamma, es, grad);
  t_serial = omp_get_wtime() - t0;
  omp_set_num_threads(threads);
  t0 = omp_get_wtime();
  loss_and_gradient(ts, k, gamma, es, grad);
  t_par = omp_get_wtime() - t0;
  std::printf("loss_and_gradient  serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n",
              1e3 * t_serial, 1e3 * t_par, t_serial / t_par);

  // analytic kernels at a reduced size
  LinkConfig cfg;
  cfg.memory = std::min(mem, 3);
  FiberParams fp;
  fp.length_km = 80.0;
  AnalyticKernelOptions opt;
  opt.z_nodes = 81;
  omp_set_num_threads(1);
  t0 = omp_get_wtime();
  analytic_kernels(cfg, fp, cfg.memory, opt);
  t_serial = omp_get_wtime() - t0;
  omp_set_num_threads(threads);
  t0 = omp_get_wtime();
  analytic_kernels(cfg, fp, cfg.memory, opt);
  t_par = omp_get_wtime() - t0;
  std::printf("analytic_kernels   serial %8.3f ms   omp %8.3f ms   speedup %.2fx\n",
              1e3 * t_serial, 1e3 * t_par, t_serial / t_par);
  return 0;
}
