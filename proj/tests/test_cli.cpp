// End-to-end tests of the command-line tool: exit codes, determinism,
// scheme algebra, plot round trip.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <sys/wait.h>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "nlilab/experiment.hpp"
#include "nlilab/kernels.hpp"

using namespace nlilab;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  fs::path dir;
  Workspace() {
    dir = fs::temp_directory_path() / ("nlilab_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Workspace() { fs::remove_all(dir); }
  std::string path(const std::string& n) const { return (dir / n).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(NLILAB_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

std::string slurp(const std::string& p) {
  std::ifstream is(p);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

// drop the wall_s column (last) from every CSV line
std::string strip_wall(const std::string& csv) {
  std::stringstream in(csv), out;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.rfind(',');
    out << line.substr(0, pos) << "\n";
  }
  return out.str();
}

void write_config(const std::string& path, const Workspace& ws, const std::string& extra) {
  std::ofstream os(path);
  os << R"({
  "link": {"length_km": 60.0, "memory": 1, "nf_db": 14.0},
  "powers_dbm": [12.0, 14.0],
  "schemes": ["traditional", "ase-only"],
  "symbols_per_block": 486,
  "blocks_per_point": 2,
  "seed": 11,
  "train_symbols": 256,
  "train_batches": 2,
  "nbgd_epochs": 40,
  "analytic_z_nodes": 33,
  "kernel_dir": ")" << ws.path("kernels")
     << R"(",
  "out_dir": ")" << ws.path("out") << R"(")" << extra << "\n}\n";
}

}  // namespace

TEST_CASE("sweep writes deterministic metrics with the canonical schema") {
  Workspace ws;
  const std::string cfg = ws.path("cfg.json");
  write_config(cfg, ws, "");
  REQUIRE(run("sweep --config " + cfg) == 0);
  const std::string m1 = slurp(ws.path("out/metrics.csv"));
  CHECK(m1.rfind("power_dbm,scheme,kernel_origin,kernel_trained_dbm,snr_eff_db,gmi_b2d,"
                 "ber_pre,fer,fer_ci_lo,fer_ci_hi,frames,seed,config_hash,wall_s\n",
                 0) == 0);
  CHECK(std::count(m1.begin(), m1.end(), '\n') == 1 + 2 * 2);
  CHECK(fs::exists(ws.path("out/metrics.json")));
  CHECK(fs::exists(ws.path("out/config_resolved.json")));

  REQUIRE(run("sweep --config " + cfg) == 0);
  const std::string m2 = slurp(ws.path("out/metrics.csv"));
  CHECK(strip_wall(m1) == strip_wall(m2));

  // the recorded hash matches the resolved config's canonical hash
  const auto cfg_resolved = ExperimentConfig::load(ws.path("out/config_resolved.json"));
  CHECK(m1.find(cfg_resolved.hash()) != std::string::npos);
}

TEST_CASE("genie scheme with an all-zero tensor equals traditional exactly") {
  Workspace ws;
  const std::string cfg = ws.path("cfg.json");
  write_config(cfg, ws, "");
  fs::create_directories(ws.path("kernels"));
  ExperimentConfig c = ExperimentConfig::load(cfg);
  for (double p : {12.0, 14.0}) {
    KernelTensor z(1);
    z.origin = KernelOrigin::Nbgd;
    z.trained_power_dbm = p;
    kernel_io_write(c.nbgd_kernel_path(p), z);
  }
  REQUIRE(run("sweep --config " + cfg + " --schemes traditional,genie-nbgd") == 0);
  const auto rows = read_metrics_csv(ws.path("out/metrics.csv"));
  REQUIRE(rows.size() == 4);
  for (std::size_t i = 0; i < rows.size(); i += 2) {
    CHECK(rows[i].scheme == "traditional");
    CHECK(rows[i + 1].scheme == "genie-nbgd");
    CHECK(rows[i].snr_eff_db == rows[i + 1].snr_eff_db);
    CHECK(rows[i].gmi_b2d == rows[i + 1].gmi_b2d);
    CHECK(rows[i].ber_pre == rows[i + 1].ber_pre);
    CHECK(rows[i].fer == rows[i + 1].fer);
  }
}

TEST_CASE("exit codes: config error 2, missing artifact 3") {
  Workspace ws;
  const std::string cfg = ws.path("cfg.json");
  write_config(cfg, ws, "");
  CHECK(run("sweep --config " + ws.path("nonexistent.json")) == 2);
  CHECK(run("sweep --config " + cfg + " --schemes not-a-scheme") == 2);
  CHECK(run("sweep --config " + cfg + " --schemes genie-nbgd") == 3);
  {
    std::ofstream os(ws.path("broken.json"));
    os << "{ not json";
  }
  CHECK(run("sweep --config " + ws.path("broken.json")) == 2);
}

TEST_CASE("train is deterministic and mismatch matches the sweep bit-exactly") {
  Workspace ws;
  const std::string cfg = ws.path("cfg.json");
  write_config(cfg, ws, "");
  REQUIRE(run("train --config " + cfg + " --powers 14") == 0);
  ExperimentConfig c = ExperimentConfig::load(cfg);
  const std::string kpath = c.nbgd_kernel_path(14.0);
  REQUIRE(fs::exists(kpath));
  const std::string k1 = slurp(kpath);
  REQUIRE(run("train --config " + cfg + " --powers 14") == 0);
  CHECK(k1 == slurp(kpath));
  const KernelTensor kt = kernel_io_read(kpath);
  CHECK(kt.origin == KernelOrigin::Nbgd);
  CHECK(kt.trained_power_dbm == 14.0);
  CHECK(fs::exists(ws.path("out/train_log_p+014.00.csv")));

  REQUIRE(run("sweep --config " + cfg + " --powers 14 --schemes genie-nbgd") == 0);
  const auto sweep_rows = read_metrics_csv(ws.path("out/metrics.csv"));
  REQUIRE(run("mismatch --config " + cfg + " --train-powers 14 --eval-powers 14") == 0);
  const std::string mm = slurp(ws.path("out/mismatch.csv"));
  std::stringstream ss(mm);
  std::string header, row;
  std::getline(ss, header);
  std::getline(ss, row);
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", sweep_rows[0].snr_eff_db);
  CHECK(row.find(buf) != std::string::npos);
}

TEST_CASE("plot renders three panels and embeds a recoverable data table") {
  Workspace ws;
  const std::string cfg = ws.path("cfg.json");
  write_config(cfg, ws, "");
  REQUIRE(run("sweep --config " + cfg) == 0);
  REQUIRE(run("plot --metrics " + ws.path("out/metrics.csv") + " --out " +
              ws.path("plots")) == 0);
  for (const char* f : {"snr.svg", "gmi.svg", "fer.svg"}) {
    const std::string svg = slurp(ws.path(std::string("plots/") + f));
    CHECK(svg.find("<svg") != std::string::npos);
    const auto s = svg.find("<metadata");
    REQUIRE(s != std::string::npos);
    const auto e = svg.find("</metadata>");
    const std::string table = svg.substr(s, e - s);
    // one row per (scheme, power): 2 schemes x 2 powers
    CHECK(std::count(table.begin(), table.end(), '\n') >= 1 + 4);
    CHECK(table.find("traditional,12") != std::string::npos);
    CHECK(table.find("traditional,14") != std::string::npos);
  }

  // empty series: header-only metrics must fail without writing files
  {
    std::ofstream os(ws.path("empty.csv"));
    os << "power_dbm,scheme,kernel_origin,kernel_trained_dbm,snr_eff_db,gmi_b2d,"
          "ber_pre,fer,fer_ci_lo,fer_ci_hi,frames,seed,config_hash,wall_s\n";
  }
  CHECK(run("plot --metrics " + ws.path("empty.csv") + " --out " + ws.path("plots2")) == 2);
  CHECK(!fs::exists(ws.path("plots2/snr.svg")));

  // schema mismatch names the offending column
  {
    std::ofstream os(ws.path("bad.csv"));
    os << "power_dbm,scheme,oops\n1,2,3\n";
  }
  CHECK(run("plot --metrics " + ws.path("bad.csv") + " --out " + ws.path("plots3")) == 3);
}

TEST_CASE("calibrate-noise reports an NF and writes calibration.json") {
  Workspace ws;
  const std::string cfg = ws.path("cfg.json");
  write_config(cfg, ws, "");
  REQUIRE(run("calibrate-noise --config " + cfg + " --target-dbm 13") == 0);
  const std::string cal = slurp(ws.path("out/calibration.json"));
  CHECK(cal.find("nf_db") != std::string::npos);
  CHECK(cal.find("snr_trad_db") != std::string::npos);
}
