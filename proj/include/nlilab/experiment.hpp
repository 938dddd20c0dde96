#ifndef NLILAB_EXPERIMENT_HPP
#define NLILAB_EXPERIMENT_HPP

#include <map>
#include <string>
#include <vector>

#include "nlilab/config.hpp"
#include "nlilab/fec.hpp"
#include "nlilab/kernels.hpp"

namespace nlilab {

struct MetricsRecord {
  double power_dbm = 0.0;
  std::string scheme;
  std::string kernel_origin;  // "none", "analytic", "nbgd"
  double kernel_trained_dbm = std::numeric_limits<double>::quiet_NaN();
  double snr_eff_db = 0.0;
  double gmi_b2d = 0.0;
  double ber_pre = 0.0;
  double fer = 0.0;
  double fer_ci_lo = 0.0;
  double fer_ci_hi = 0.0;
  std::size_t frames = 0;
  std::uint64_t seed = 0;
  std::string config_hash;
  double wall_s = 0.0;
};

std::string metrics_csv(const std::vector<MetricsRecord>& rows);
void write_metrics(const std::string& out_dir, const std::vector<MetricsRecord>& rows);
std::vector<MetricsRecord> read_metrics_csv(const std::string& path);

struct TrainReport {
  double power_dbm = 0.0;
  double final_loss = 0.0;
  int epochs = 0;
  double val_nmse_db = 0.0;       // -inf-capped validation NMSE of the fit
  double analytic_nmse_db = 0.0;  // same data, analytic tensor
  std::string kernel_path;
  std::string log_path;
};

struct MismatchResult {
  std::vector<double> train_powers;
  std::vector<double> eval_powers;
  // snr[e][t]: genie cancellation at eval power e with the tensor trained
  // at power t; column t == train_powers.size() holds the traditional
  // baseline
  std::vector<std::vector<double>> snr_db;
  std::string csv() const;
};

struct CalibrationResult {
  double nf_db = 0.0;
  double target_dbm = 0.0;
  double achieved_opt_dbm = 0.0;
  std::vector<double> powers_dbm;
  std::vector<double> snr_nli_db;   // NLI-only traditional effective SNR
  std::vector<double> snr_trad_db;  // predicted full-chain curve at nf_db
};

/// Experiment orchestration built on the primary modules. All randomness
/// derives from (seed, power value, block index, purpose) so results do
/// not depend on scheduling or on which schemes run together.
class Experiment {
 public:
  explicit Experiment(const ExperimentConfig& cfg);

  const ExperimentConfig& config() const { return cfg_; }

  std::vector<MetricsRecord> run_sweep();
  std::vector<TrainReport> train_kernels(const std::vector<double>& powers);
  MismatchResult mismatch_study(const std::vector<double>& train_powers,
                                const std::vector<double>& eval_powers);
  CalibrationResult calibrate_noise(double target_dbm);
  /// Computes and stores the analytic tensor for the configured link.
  std::string make_analytic_kernels();

 private:
  ExperimentConfig cfg_;
  LdpcCode code_;
  std::map<long long, KernelTensor> nbgd_cache_;  // key: round(power*100)
  KernelTensor analytic_;
  bool have_analytic_ = false;

  struct ChainOutput {
    DualPolSymbols tx;
    BitSeq tx_bits;
    DualPolSymbols rx;      // full nonlinear chain, no noise
    DualPolSymbols rx_lin;  // gamma = 0 chain, no noise (lazy)
    bool have_lin = false;
  };

  ChainOutput run_chain(double power_dbm, std::size_t block, bool need_full,
                        bool need_lin) const;
  const KernelTensor& nbgd_kernel(double power_dbm);
  const KernelTensor& analytic_kernel();
  KernelTensor load_or_build_analytic();
};

std::string default_ldpc_matrix_path();

}  // namespace nlilab

#endif
