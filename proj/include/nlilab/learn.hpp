#ifndef NLILAB_LEARN_HPP
#define NLILAB_LEARN_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlilab/kernels.hpp"
#include "nlilab/types.hpp"

namespace nlilab {

/// Windows of 2M+1 symbols centered on each index with targets y_n - a_n.
/// Sample-major flat storage: sample i occupies [i*(2M+1), (i+1)*(2M+1)).
struct TrainingSet {
  int memory = 0;
  std::vector<cplx> win_x;
  std::vector<cplx> win_y;
  std::vector<CVec2> targets;

  // provenance
  double power_dbm = 0.0;
  std::vector<std::uint64_t> seeds;
  int batch_count = 0;
  std::size_t samples_per_batch = 0;
  std::string link_config_json;

  int window_len() const { return 2 * memory + 1; }
  std::size_t count() const { return targets.size(); }

  /// Contiguous batch range [first, last) as an independent set.
  TrainingSet subset_batches(int first, int last) const;
  /// First max(1, floor(0.8 b)) batches.
  TrainingSet train_split() const;
  /// Remaining batches; empty set when batch_count == 1.
  TrainingSet validation_split() const;
};

/// Adds one circular block: for every index n, window a_{n-M..n+M} and
/// target y_n - a_n.
void append_training_block(TrainingSet& ts, const DualPolSymbols& a, const DualPolSymbols& y);

/// Noiseless modulate -> ssfm -> cdc -> matched filter chain per batch;
/// targets isolate the NLI.
TrainingSet build_training_set(const LinkConfig& cfg, std::size_t n_symbols, int n_batches,
                               std::uint64_t master_seed);

// Binary format "NBTS": magic, u32 version = 1, u16 M, u64 sample count,
// u32 config blob length, blob, then per sample 2(2M+1)+2 complex f64
// pairs (x window, y window, target).
void training_set_write(const std::string& path, const TrainingSet& ts);
TrainingSet training_set_read(const std::string& path);

struct NbgdConfig {
  double learning_rate = 0.05;
  int epochs = 500;
  std::size_t batch_size = 0;  // 0 = full batch
  enum class Init { Zeros, Tensor } init = Init::Zeros;
  std::optional<KernelTensor> init_tensor;  // used when init == Tensor
  double ridge_lambda = 0.0;                // ls_oracle regularization
  double stop_rel_tol = 0.0;                // on accepted-step loss change
  double grad_norm_floor = 1e-12;
};

struct NbgdResult {
  KernelTensor kernel;
  std::vector<double> loss_per_epoch;  // full-train RMS loss after each epoch
  double best_loss = 0.0;
  int epochs_run = 0;
};

/// RMS loss sqrt(mean_n ||t_n - da_n(S)||^2) over the set.
double model_rms_loss(const TrainingSet& ts, const KernelTensor& k, double gamma,
                      double es_joule);

/// Loss and its gradient with respect to the kernel entries, as complex
/// numbers combining d/dRe + j d/dIm. The model is linear in S with
/// regressors c_klm(n) = j (8/9) gamma Es (a_k+ a_l) a_m, so the MSE
/// gradient is -2 mean_n c_klm(n)+ r_n and the RMS gradient is that over
/// 2 L.
double loss_and_gradient(const TrainingSet& ts, const KernelTensor& k, double gamma,
                         double es_joule, std::vector<cplx>& grad);

/// Normalized batch gradient descent: S <- S - eta G / max(||G||, eps),
/// halving eta whenever a step does not decrease the loss. Returns the
/// kernel with the lowest recorded loss.
NbgdResult nbgd_fit(const TrainingSet& ts, const NbgdConfig& cfg, double gamma,
                    double es_joule);

/// Exact regularized least-squares minimizer of the same loss (the model is
/// linear in S); both target components enter as separate scalar equations.
KernelTensor ls_oracle(const TrainingSet& ts, int memory, double gamma, double es_joule,
                       double ridge_lambda);

/// 10 log10( sum ||t - da||^2 / sum ||t||^2 ), capped below at -150 dB.
double model_nmse_db(const TrainingSet& ts, const KernelTensor& k, double gamma,
                     double es_joule);

}  // namespace nlilab

#endif
