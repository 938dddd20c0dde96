// Command-line front end: power sweeps, kernel training, mismatch and
// calibration studies, and plots.
#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "nlilab/errors.hpp"
#include "nlilab/experiment.hpp"
#include "nlilab/plot.hpp"

using namespace nlilab;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::string kernel_dir;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string powers;
  std::vector<std::string> schemes;
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "JSON config file");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--kernels", args.kernel_dir, "kernel directory");
  cmd->add_option("--seed", args.seed, "master seed")->each([&](const std::string&) {
    args.seed_set = true;
  });
  cmd->add_option("--powers", args.powers, "power list, a:b:step or comma separated");
  cmd->add_option("--schemes", args.schemes, "scheme names")->delimiter(',');
  cmd->add_option("--threads", args.threads, "worker threads")
      ->envname("NLILAB_THREADS");
}

ExperimentConfig resolve(const CommonArgs& args) {
  ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = ExperimentConfig::load(args.config_path);
  if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
  if (!args.kernel_dir.empty()) cfg.kernel_dir = args.kernel_dir;
  if (args.seed_set) cfg.seed = args.seed;
  if (!args.powers.empty()) cfg.powers_dbm = parse_power_list(args.powers);
  if (!args.schemes.empty()) {
    cfg.schemes.clear();
    for (const auto& s : args.schemes) cfg.schemes.push_back(scheme_from_name(s));
  }
  if (args.threads > 0) cfg.threads = args.threads;
  std::filesystem::create_directories(cfg.out_dir);
  cfg.save(cfg.out_dir + "/config_resolved.json");
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"single-span NLI cancellation laboratory"};
  app.require_subcommand(1);

  CommonArgs args;
  std::string train_powers, eval_powers, metrics_path;
  double cal_target = 14.0;

  auto* sweep = app.add_subcommand("sweep", "run the power/scheme sweep");
  add_common(sweep, args);

  auto* train = app.add_subcommand("train", "fit NBGD kernels per launch power");
  add_common(train, args);

  auto* mismatch = app.add_subcommand("mismatch", "trained-power robustness study");
  add_common(mismatch, args);
  mismatch->add_option("--train-powers", train_powers, "kernel training powers")
      ->required();
  mismatch->add_option("--eval-powers", eval_powers, "evaluation powers");

  auto* plot = app.add_subcommand("plot", "render SNR/GMI/FER panels from metrics");
  add_common(plot, args);
  plot->add_option("--metrics", metrics_path, "metrics.csv path")->required();

  auto* cal = app.add_subcommand("calibrate-noise", "choose NF for a target optimum");
  add_common(cal, args);
  cal->add_option("--target-dbm", cal_target, "target traditional optimum");

  auto* kan = app.add_subcommand("kernels-analytic", "compute and store analytic kernels");
  add_common(kan, args);

  CLI11_PARSE(app, argc, argv);

  try {
    if (plot->parsed()) {
      ExperimentConfig cfg;
      if (!args.config_path.empty()) cfg = ExperimentConfig::load(args.config_path);
      if (!args.out_dir.empty()) cfg.out_dir = args.out_dir;
      const auto rows = read_metrics_csv(metrics_path);
      for (const auto& p : plot_metrics(rows, cfg.out_dir))
        std::printf("wrote %s\n", p.c_str());
      return 0;
    }

    const ExperimentConfig cfg = resolve(args);
    Experiment exp(cfg);

    if (sweep->parsed()) {
      const auto rows = exp.run_sweep();
      write_metrics(cfg.out_dir, rows);
      std::printf("%s", metrics_csv(rows).c_str());
      std::printf("wrote %s/metrics.csv and metrics.json\n", cfg.out_dir.c_str());
    } else if (train->parsed()) {
      const auto reports = exp.train_kernels(cfg.powers_dbm);
      for (const auto& r : reports)
        std::printf(
            "P=%+06.2f dBm: loss %.6g after %d epochs, val NMSE %.2f dB "
            "(analytic %.2f dB) -> %s\n",
            r.power_dbm, r.final_loss, r.epochs, r.val_nmse_db, r.analytic_nmse_db,
            r.kernel_path.c_str());
    } else if (mismatch->parsed()) {
      const auto tp = parse_power_list(train_powers);
      const auto ep = eval_powers.empty() ? cfg.powers_dbm : parse_power_list(eval_powers);
      const auto res = exp.mismatch_study(tp, ep);
      const std::string path = cfg.out_dir + "/mismatch.csv";
      std::ofstream os(path);
      os << res.csv();
      std::printf("%s", res.csv().c_str());
      std::printf("wrote %s\n", path.c_str());
    } else if (cal->parsed()) {
      const auto res = exp.calibrate_noise(cal_target);
      std::printf("calibrated nf_db = %.4f (traditional optimum at %.2f dBm, target %.2f)\n",
                  res.nf_db, res.achieved_opt_dbm, res.target_dbm);
      std::ofstream os(cfg.out_dir + "/calibration.json");
      os << "{\n  \"nf_db\": " << res.nf_db << ",\n  \"achieved_opt_dbm\": "
         << res.achieved_opt_dbm << ",\n  \"powers_dbm\": [";
      for (std::size_t i = 0; i < res.powers_dbm.size(); ++i)
        os << (i ? ", " : "") << res.powers_dbm[i];
      os << "],\n  \"snr_nli_db\": [";
      for (std::size_t i = 0; i < res.snr_nli_db.size(); ++i)
        os << (i ? ", " : "") << res.snr_nli_db[i];
      os << "],\n  \"snr_trad_db\": [";
      for (std::size_t i = 0; i < res.snr_trad_db.size(); ++i)
        os << (i ? ", " : "") << res.snr_trad_db[i];
      os << "]\n}\n";
      std::printf("wrote %s/calibration.json\n", cfg.out_dir.c_str());
    } else if (kan->parsed()) {
      const std::string path = exp.make_analytic_kernels();
      std::printf("wrote %s\n", path.c_str());
    }
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const MissingArtifact& e) {
    std::fprintf(stderr, "missing artifact: %s\n", e.what());
    return 3;
  } catch (const FormatError& e) {
    std::fprintf(stderr, "format error: %s\n", e.what());
    return 3;
  } catch (const NumericalError& e) {
    std::fprintf(stderr, "numerical failure: %s\n", e.what());
    return 4;
  }
  return 0;
}
