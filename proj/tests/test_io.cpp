#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <unistd.h>
#include <fstream>

#include "nlilab/errors.hpp"
#include "nlilab/kernels.hpp"
#include "nlilab/learn.hpp"
#include "nlilab/rng.hpp"
#include "nlilab/sha256.hpp"

using namespace nlilab;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("nlilab_test_" + std::to_string(::getpid()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("sha256 known vectors") {
  CHECK(sha256_hex("") ==
        "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq") ==
        "248d6a61d20638b8e5c026930c3e6039a33ce45964ff2167f6ecedd419db06c1");
}

TEST_CASE("kernel file round trip is bit identical") {
  TempDir tmp;
  GaussianSampler rng(1);
  KernelTensor k(3);
  for (auto& v : k.values) v = rng.complex_normal(2.0);
  k.origin = KernelOrigin::Nbgd;
  k.trained_power_dbm = 15.5;
  k.fingerprint = link_fingerprint(LinkConfig{}, 15.5);

  const auto path = tmp.file("k.nbgk");
  kernel_io_write(path, k);
  const KernelTensor r = kernel_io_read(path);
  CHECK(r.memory == 3);
  CHECK(r.origin == KernelOrigin::Nbgd);
  CHECK(r.trained_power_dbm == 15.5);
  CHECK(r.fingerprint == k.fingerprint);
  REQUIRE(r.values.size() == k.values.size());
  for (std::size_t i = 0; i < k.values.size(); ++i) CHECK(r.values[i] == k.values[i]);

  // NaN trained power survives
  k.trained_power_dbm = std::numeric_limits<double>::quiet_NaN();
  kernel_io_write(path, k);
  CHECK(std::isnan(kernel_io_read(path).trained_power_dbm));
}

TEST_CASE("kernel file corruption is rejected") {
  TempDir tmp;
  KernelTensor k(1);
  const auto path = tmp.file("k.nbgk");
  kernel_io_write(path, k);

  // bad magic
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    f.write("XXXX", 4);
  }
  CHECK_THROWS_AS(kernel_io_read(path), FormatError);

  // truncation
  kernel_io_write(path, k);
  std::filesystem::resize_file(path, std::filesystem::file_size(path) - 9);
  CHECK_THROWS_AS(kernel_io_read(path), FormatError);

  // header/payload mismatch: extend with trailing bytes
  kernel_io_write(path, k);
  {
    std::ofstream f(path, std::ios::app | std::ios::binary);
    const double junk = 0.0;
    f.write(reinterpret_cast<const char*>(&junk), sizeof(junk));
  }
  CHECK_THROWS_AS(kernel_io_read(path), FormatError);

  // non-finite payload: header is 51 bytes, first value follows
  kernel_io_write(path, k);
  {
    std::fstream f(path, std::ios::in | std::ios::out | std::ios::binary);
    const double bad = std::numeric_limits<double>::infinity();
    f.seekp(51);
    f.write(reinterpret_cast<const char*>(&bad), sizeof(bad));
  }
  CHECK_THROWS_AS(kernel_io_read(path), FormatError);

  CHECK_THROWS_AS(kernel_io_read(tmp.file("missing.nbgk")), MissingArtifact);
}

TEST_CASE("training set file round trip") {
  TempDir tmp;
  GaussianSampler rng(2);
  TrainingSet ts;
  ts.memory = 1;
  ts.link_config_json = "{\"rs_baud\":6e10}";
  DualPolSymbols a(16), y(16);
  for (std::size_t i = 0; i < 16; ++i) {
    a.x[i] = rng.complex_normal(1.0);
    a.y[i] = rng.complex_normal(1.0);
    y.x[i] = a.x[i] + rng.complex_normal(0.01);
    y.y[i] = a.y[i] + rng.complex_normal(0.01);
  }
  append_training_block(ts, a, y);

  const auto path = tmp.file("t.nbts");
  training_set_write(path, ts);
  const TrainingSet r = training_set_read(path);
  CHECK(r.memory == 1);
  CHECK(r.count() == 16);
  CHECK(r.link_config_json == ts.link_config_json);
  CHECK(r.win_x == ts.win_x);
  CHECK(r.win_y == ts.win_y);
  for (std::size_t i = 0; i < r.count(); ++i) {
    CHECK(r.targets[i].x == ts.targets[i].x);
    CHECK(r.targets[i].y == ts.targets[i].y);
  }
}
