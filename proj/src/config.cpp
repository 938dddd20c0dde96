#include "nlilab/config.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nlilab/channel.hpp"
#include "nlilab/errors.hpp"
#include "nlilab/sha256.hpp"

namespace nlilab {

using json = nlohmann::json;

std::string scheme_name(Scheme s) {
  switch (s) {
    case Scheme::Traditional: return "traditional";
    case Scheme::GenieAnalytic: return "genie-analytic";
    case Scheme::GenieNbgd: return "genie-nbgd";
    case Scheme::AseOnly: return "ase-only";
    case Scheme::NliOnly: return "nli-only";
    case Scheme::GenieNbgdNliOnly: return "genie-nbgd-nli-only";
    case Scheme::GenieAnalyticNliOnly: return "genie-analytic-nli-only";
  }
  return "?";
}

Scheme scheme_from_name(const std::string& name) {
  for (Scheme s : {Scheme::Traditional, Scheme::GenieAnalytic, Scheme::GenieNbgd,
                   Scheme::AseOnly, Scheme::NliOnly, Scheme::GenieNbgdNliOnly,
                   Scheme::GenieAnalyticNliOnly})
    if (scheme_name(s) == name) return s;
  throw ConfigError("unknown scheme: " + name);
}

namespace {

json link_to_json(const LinkConfig& l) {
  return json{{"gamma", l.fiber.gamma},
              {"alpha_db_per_km", l.fiber.alpha_db_per_km},
              {"beta2_ps2_per_km", l.fiber.beta2_ps2_per_km},
              {"length_km", l.fiber.length_km},
              {"rs_baud", l.rs_baud},
              {"roll_off", l.roll_off},
              {"osf", l.osf},
              {"memory", l.memory},
              {"sigma_n_sq", l.sigma_n_sq},
              {"nf_db", l.nf_db},
              {"center_freq_hz", l.center_freq_hz}};
}

void link_from_json(const json& j, LinkConfig& l) {
  l.fiber.gamma = j.value("gamma", l.fiber.gamma);
  l.fiber.alpha_db_per_km = j.value("alpha_db_per_km", l.fiber.alpha_db_per_km);
  l.fiber.beta2_ps2_per_km = j.value("beta2_ps2_per_km", l.fiber.beta2_ps2_per_km);
  l.fiber.length_km = j.value("length_km", l.fiber.length_km);
  l.rs_baud = j.value("rs_baud", l.rs_baud);
  l.roll_off = j.value("roll_off", l.roll_off);
  l.osf = j.value("osf", l.osf);
  l.memory = j.value("memory", l.memory);
  l.sigma_n_sq = j.value("sigma_n_sq", l.sigma_n_sq);
  l.nf_db = j.value("nf_db", l.nf_db);
  l.center_freq_hz = j.value("center_freq_hz", l.center_freq_hz);
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  j["link"] = link_to_json(link);
  j["step"] = {{"mode", step.mode == StepPolicy::Mode::Fixed ? "fixed" : "phase"},
               {"fixed_step_km", step.fixed_step_km},
               {"max_phase_rad", step.max_phase_rad},
               {"max_steps", step.max_steps}};
  j["powers_dbm"] = powers_dbm;
  std::vector<std::string> sn;
  for (Scheme s : schemes) sn.push_back(scheme_name(s));
  j["schemes"] = sn;
  j["symbols_per_block"] = symbols_per_block;
  j["blocks_per_point"] = blocks_per_point;
  j["seed"] = seed;
  j["frame_symbols"] = frame_symbols;
  j["train_symbols"] = train_symbols;
  j["train_batches"] = train_batches;
  j["nbgd_epochs"] = nbgd_epochs;
  j["nbgd_learning_rate"] = nbgd_learning_rate;
  j["nbgd_init"] = nbgd_init;
  j["analytic_z_nodes"] = analytic_z_nodes;
  j["kernel_dir"] = kernel_dir;
  j["out_dir"] = out_dir;
  j["threads"] = threads;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  ExperimentConfig c;
  if (j.contains("link")) link_from_json(j["link"], c.link);
  if (j.contains("step")) {
    const auto& s = j["step"];
    const std::string mode = s.value("mode", "phase");
    if (mode == "fixed")
      c.step.mode = StepPolicy::Mode::Fixed;
    else if (mode == "phase")
      c.step.mode = StepPolicy::Mode::NonlinearPhaseBounded;
    else
      throw ConfigError("step.mode must be 'fixed' or 'phase'");
    c.step.fixed_step_km = s.value("fixed_step_km", c.step.fixed_step_km);
    c.step.max_phase_rad = s.value("max_phase_rad", c.step.max_phase_rad);
    c.step.max_steps = s.value("max_steps", c.step.max_steps);
  }
  if (j.contains("powers_dbm")) c.powers_dbm = j["powers_dbm"].get<std::vector<double>>();
  if (j.contains("schemes")) {
    c.schemes.clear();
    for (const auto& n : j["schemes"]) c.schemes.push_back(scheme_from_name(n));
  }
  c.symbols_per_block = j.value("symbols_per_block", c.symbols_per_block);
  c.blocks_per_point = j.value("blocks_per_point", c.blocks_per_point);
  c.seed = j.value("seed", c.seed);
  c.frame_symbols = j.value("frame_symbols", c.frame_symbols);
  c.train_symbols = j.value("train_symbols", c.train_symbols);
  c.train_batches = j.value("train_batches", c.train_batches);
  c.nbgd_epochs = j.value("nbgd_epochs", c.nbgd_epochs);
  c.nbgd_learning_rate = j.value("nbgd_learning_rate", c.nbgd_learning_rate);
  c.nbgd_init = j.value("nbgd_init", c.nbgd_init);
  c.analytic_z_nodes = j.value("analytic_z_nodes", c.analytic_z_nodes);
  c.kernel_dir = j.value("kernel_dir", c.kernel_dir);
  c.out_dir = j.value("out_dir", c.out_dir);
  c.threads = j.value("threads", c.threads);

  if (c.powers_dbm.empty()) throw ConfigError("powers_dbm must be nonempty");
  if (c.schemes.empty()) throw ConfigError("schemes must be nonempty");
  if (c.link.memory < 0) throw ConfigError("memory must be >= 0");
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("config file not found: " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return from_json(ss.str());
}

void ExperimentConfig::save(const std::string& path) const {
  std::ofstream os(path);
  if (!os) throw ConfigError("cannot write config: " + path);
  os << to_json() << "\n";
}

std::string ExperimentConfig::hash() const {
  // nlohmann::json orders keys; the dump is canonical. Execution-only
  // fields (threads, output locations) do not identify the experiment.
  json j = json::parse(to_json());
  j.erase("threads");
  j.erase("out_dir");
  j.erase("kernel_dir");
  return sha256_hex(j.dump());
}

double ExperimentConfig::sigma_n_sq_at(double p_dbm) const {
  if (link.sigma_n_sq >= 0.0) return link.sigma_n_sq;
  const double gain_db = link.fiber.alpha_db_per_km * link.fiber.length_km;
  const double es = dbm_to_watt(p_dbm) / (2.0 * link.rs_baud);
  return sigma_from_nf(link.nf_db, gain_db, link.center_freq_hz, es);
}

std::string ExperimentConfig::nbgd_kernel_path(double power_dbm) const {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "/nbgd_p%+07.2f.nbgk", power_dbm);
  return kernel_dir + buf;
}

std::string ExperimentConfig::analytic_kernel_path() const {
  return kernel_dir + "/analytic.nbgk";
}

std::vector<double> parse_power_list(const std::string& text) {
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    double a, b, st;
    if (std::sscanf(text.c_str(), "%lf:%lf:%lf", &a, &b, &st) != 3 || st <= 0.0)
      throw ConfigError("power range must be a:b:step with step > 0");
    for (double p = a; p <= b + 1e-9; p += st) out.push_back(p);
  } else {
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (tok.empty()) continue;
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        throw ConfigError("bad power value: " + tok);
      }
    }
  }
  if (out.empty()) throw ConfigError("empty power list");
  return out;
}

}  // namespace nlilab
