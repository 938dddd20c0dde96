#ifndef NLILAB_FEC_HPP
#define NLILAB_FEC_HPP

#include <string>
#include <vector>

#include "nlilab/constellation.hpp"  // BitSeq
#include "nlilab/types.hpp"

namespace nlilab {

/// Quasi-cyclic LDPC code from a lifted prototype matrix with the 802.11
/// dual-diagonal parity structure.
class LdpcCode {
 public:
  /// Loads a plain-text prototype matrix (see data/ldpc_80211_n648_r34_z27.txt).
  static LdpcCode load(const std::string& path);

  int n() const { return n_; }
  int k() const { return k_; }
  int z() const { return z_; }

  /// Systematic encoding by dual-diagonal back-substitution; H c = 0.
  BitSeq encode(const BitSeq& info) const;

  /// H c over GF(2) is all-zero.
  bool parity_ok(const BitSeq& codeword) const;

  struct DecodeResult {
    BitSeq info;
    bool converged = false;
    int iterations = 0;
  };

  /// Flooding sum-product belief propagation, exact tanh rule, early exit
  /// on a parity-satisfying hard decision. LLR > 0 means bit 0.
  DecodeResult decode(const std::vector<double>& llrs, int max_iter = 40) const;

 private:
  int z_ = 0, n_ = 0, k_ = 0;
  int brows_ = 0, bcols_ = 0;
  std::vector<int> proto_;  // brows x bcols shift values, -1 = zero block
  // expanded Tanner graph
  std::vector<std::vector<int>> check_vars_;  // per check: variable indices
  std::vector<int> var_degree_;

  void expand_graph();
  void check_parity_structure() const;
};

struct FrameErrorRate {
  double rate = 0.0;
  double ci_lo = 0.0;  // Wilson 95%
  double ci_hi = 0.0;
  std::size_t frames = 0;
  std::size_t errors = 0;
};

FrameErrorRate frame_error_rate(const std::vector<std::pair<BitSeq, BitSeq>>& decoded_vs_true);
FrameErrorRate frame_error_rate(std::size_t errors, std::size_t frames);

}  // namespace nlilab

#endif
