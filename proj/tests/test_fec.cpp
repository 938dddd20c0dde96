#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "nlilab/errors.hpp"
#include "nlilab/fec.hpp"
#include "nlilab/rng.hpp"

using namespace nlilab;

namespace {

const LdpcCode& code() {
  static const LdpcCode c = LdpcCode::load(std::string(NLILAB_DATA_DIR) +
                                           "/ldpc_80211_n648_r34_z27.txt");
  return c;
}

BitSeq random_info(GaussianSampler& rng, int k) {
  BitSeq b(k);
  for (auto& v : b) v = rng.bit();
  return b;
}

}  // namespace

TEST_CASE("code dimensions follow the 802.11 n=648 rate-3/4 table") {
  CHECK(code().n() == 648);
  CHECK(code().k() == 486);
  CHECK(code().z() == 27);
}

TEST_CASE("encoder parity and linearity") {
  GaussianSampler rng(1);
  const BitSeq zero(486, 0);
  const BitSeq czero = code().encode(zero);
  for (auto b : czero) CHECK(b == 0);

  BitSeq u = random_info(rng, 486);
  BitSeq v = random_info(rng, 486);
  const BitSeq cu = code().encode(u);
  const BitSeq cv = code().encode(v);
  CHECK(code().parity_ok(cu));
  CHECK(code().parity_ok(cv));

  BitSeq w(486);
  for (int i = 0; i < 486; ++i) w[i] = u[i] ^ v[i];
  const BitSeq cw = code().encode(w);
  for (int i = 0; i < 648; ++i) CHECK(cw[i] == (cu[i] ^ cv[i]));

  // systematic prefix
  for (int i = 0; i < 486; ++i) CHECK(cu[i] == u[i]);

  CHECK_THROWS_AS(code().encode(BitSeq(485, 0)), InputError);
}

TEST_CASE("encoder parity holds over many random frames") {
  GaussianSampler rng(2);
  for (int t = 0; t < 1000; ++t) CHECK(code().parity_ok(code().encode(random_info(rng, 486))));
}

TEST_CASE("noiseless decode converges immediately and is idempotent") {
  GaussianSampler rng(3);
  const BitSeq info = random_info(rng, 486);
  const BitSeq cw = code().encode(info);
  std::vector<double> llr(648);
  for (int i = 0; i < 648; ++i) llr[i] = cw[i] ? -20.0 : 20.0;
  const auto res = code().decode(llr);
  CHECK(res.converged);
  CHECK(res.iterations == 0);
  CHECK(res.info == info);
}

TEST_CASE("single flipped LLR is corrected") {
  GaussianSampler rng(4);
  const BitSeq info = random_info(rng, 486);
  const BitSeq cw = code().encode(info);
  std::vector<double> llr(648);
  for (int i = 0; i < 648; ++i) llr[i] = cw[i] ? -8.0 : 8.0;
  llr[123] = -llr[123] * 0.5;  // moderate wrong-sign belief
  const auto res = code().decode(llr);
  CHECK(res.converged);
  CHECK(res.info == info);
  CHECK(res.iterations >= 1);
}

TEST_CASE("decoder determinism") {
  GaussianSampler rng(5);
  const BitSeq info = random_info(rng, 486);
  const BitSeq cw = code().encode(info);
  std::vector<double> llr(648);
  for (int i = 0; i < 648; ++i) llr[i] = (cw[i] ? -1.0 : 1.0) * (0.5 + 3.0 * rng.uniform());
  llr[7] = -llr[7];
  llr[400] = -llr[400];
  const auto r1 = code().decode(llr);
  const auto r2 = code().decode(llr);
  CHECK(r1.info == r2.info);
  CHECK(r1.iterations == r2.iterations);
  CHECK(r1.converged == r2.converged);
}

TEST_CASE("FER is monotone over an AWGN sweep") {
  // BPSK-style Gaussian LLRs: L = 2 y / sigma^2 with y = +-1 + noise
  GaussianSampler rng(6);
  const int frames = 200;
  std::vector<double> fer;
  for (double snr_db : {4.5, 5.0, 5.5, 6.0}) {
    const double sigma2 = std::pow(10.0, -snr_db / 10.0);
    std::size_t errors = 0;
    for (int f = 0; f < frames; ++f) {
      const BitSeq info = random_info(rng, 486);
      const BitSeq cw = code().encode(info);
      std::vector<double> llr(648);
      for (int i = 0; i < 648; ++i) {
        const double y = (cw[i] ? -1.0 : 1.0) + std::sqrt(sigma2) * rng.normal();
        llr[i] = 2.0 * y / sigma2;
      }
      if (code().decode(llr).info != info) ++errors;
    }
    fer.push_back(static_cast<double>(errors) / frames);
  }
  for (std::size_t i = 1; i < fer.size(); ++i) CHECK(fer[i] <= fer[i - 1] + 1e-12);
  CHECK(fer.front() > fer.back());  // the sweep actually crosses the waterfall
}

TEST_CASE("frame error rate accounting with Wilson interval") {
  CHECK(frame_error_rate(0, 100).rate == 0.0);
  CHECK(frame_error_rate(100, 100).rate == 1.0);
  const auto f = frame_error_rate(4, 100);
  CHECK(f.rate == doctest::Approx(0.04));
  CHECK(f.ci_lo > 0.0);
  CHECK(f.ci_lo < 0.04);
  CHECK(f.ci_hi > 0.04);
  CHECK(f.ci_hi < 0.12);
  // FER = 0 still has a positive upper bound
  CHECK(frame_error_rate(0, 2000).ci_hi > 0.0);
  CHECK(frame_error_rate(0, 2000).ci_hi < 3e-3);
  CHECK_THROWS_AS(frame_error_rate(0, 0), InputError);

  std::vector<std::pair<BitSeq, BitSeq>> pairs;
  pairs.push_back({BitSeq{1, 0, 1}, BitSeq{1, 0, 1}});
  pairs.push_back({BitSeq{1, 0, 0}, BitSeq{1, 0, 1}});
  CHECK(frame_error_rate(pairs).rate == doctest::Approx(0.5));
}
