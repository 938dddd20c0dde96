#ifndef NLILAB_CONFIG_HPP
#define NLILAB_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "nlilab/types.hpp"

namespace nlilab {

enum class Scheme {
  Traditional,
  GenieAnalytic,
  GenieNbgd,
  AseOnly,
  NliOnly,
  GenieNbgdNliOnly,
  GenieAnalyticNliOnly,
};

std::string scheme_name(Scheme s);
Scheme scheme_from_name(const std::string& name);

/// Full experiment description; defaults follow the Table-1 link.
struct ExperimentConfig {
  LinkConfig link;
  StepPolicy step;
  std::vector<double> powers_dbm = {12.0, 13.0, 14.0, 15.0, 16.0, 17.0, 18.0};
  std::vector<Scheme> schemes = {Scheme::Traditional, Scheme::AseOnly, Scheme::NliOnly};
  std::size_t symbols_per_block = 8192;
  int blocks_per_point = 4;
  std::uint64_t seed = 1;
  int frame_symbols = 81;  // one LDPC codeword per 81 4D symbols

  // kernel training
  std::size_t train_symbols = 4096;
  int train_batches = 5;
  int nbgd_epochs = 400;
  double nbgd_learning_rate = 0.05;
  std::string nbgd_init = "zeros";  // zeros | analytic

  int analytic_z_nodes = 465;

  std::string kernel_dir = "kernels";
  std::string out_dir = "out";
  int threads = 0;  // 0 = library default

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  static ExperimentConfig load(const std::string& path);
  void save(const std::string& path) const;

  /// SHA-256 hex of the canonical (sorted-key) JSON form.
  std::string hash() const;

  /// ASE variance per complex dimension at launch power p.
  double sigma_n_sq_at(double p_dbm) const;

  std::string nbgd_kernel_path(double power_dbm) const;
  std::string analytic_kernel_path() const;
};

/// "a:b:step" inclusive range or a comma-separated list.
std::vector<double> parse_power_list(const std::string& text);

}  // namespace nlilab

#endif
