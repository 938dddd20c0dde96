#include "nlilab/fec.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "nlilab/errors.hpp"

namespace nlilab {

namespace {

using ZVec = std::vector<std::uint8_t>;  // one bit per entry, length z

// (P^s x)_i = x_{(i+s) mod z}
ZVec rot(const ZVec& x, int s) {
  const int z = static_cast<int>(x.size());
  ZVec y(z);
  for (int i = 0; i < z; ++i) y[i] = x[(i + s) % z];
  return y;
}

void xor_into(ZVec& dst, const ZVec& src) {
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] ^= src[i];
}

}  // namespace

LdpcCode LdpcCode::load(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw MissingArtifact("LDPC prototype matrix not found: " + path);
  LdpcCode code;
  std::string line;
  std::vector<int> entries;
  while (std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tok;
    if (line[0] == 'z') {
      std::string kw;
      ss >> kw >> code.z_ >> kw >> code.brows_ >> kw >> code.bcols_;
      continue;
    }
    int v;
    while (ss >> v) entries.push_back(v);
  }
  if (code.z_ <= 0 || code.brows_ <= 0 || code.bcols_ <= 0)
    throw FormatError("LDPC prototype: missing or bad header line");
  if (entries.size() != static_cast<std::size_t>(code.brows_ * code.bcols_))
    throw FormatError("LDPC prototype: entry count does not match header");
  code.proto_ = std::move(entries);
  code.n_ = code.z_ * code.bcols_;
  code.k_ = code.z_ * (code.bcols_ - code.brows_);
  code.check_parity_structure();
  code.expand_graph();
  return code;
}

void LdpcCode::check_parity_structure() const {
  // first parity column: three entries, two equal shifts and one zero;
  // remaining parity columns: the dual-diagonal staircase
  const int pc0 = bcols_ - brows_;
  std::vector<std::pair<int, int>> nz;  // (row, shift)
  for (int r = 0; r < brows_; ++r) {
    const int s = proto_[r * bcols_ + pc0];
    if (s >= 0) nz.emplace_back(r, s);
  }
  bool ok = nz.size() == 3;
  if (ok) {
    std::vector<int> shifts;
    int zeros = 0;
    for (auto& [r, s] : nz) {
      if (s == 0)
        ++zeros;
      else
        shifts.push_back(s);
    }
    ok = zeros == 1 && shifts.size() == 2 && shifts[0] == shifts[1];
  }
  for (int c = pc0 + 1; ok && c < bcols_; ++c) {
    for (int r = 0; r < brows_; ++r) {
      const int s = proto_[r * bcols_ + c];
      const int off = c - pc0;
      const bool expect = (r == off - 1 || r == off);
      if (expect && s != 0) ok = false;
      if (!expect && s != -1) ok = false;
    }
  }
  if (!ok) throw FormatError("LDPC prototype: not an 802.11 dual-diagonal structure");
}

void LdpcCode::expand_graph() {
  const int m = brows_ * z_;
  check_vars_.assign(m, {});
  var_degree_.assign(n_, 0);
  for (int br = 0; br < brows_; ++br) {
    for (int bc = 0; bc < bcols_; ++bc) {
      const int s = proto_[br * bcols_ + bc];
      if (s < 0) continue;
      for (int i = 0; i < z_; ++i) {
        // check (br, i) involves variable (bc, (i + s) mod z)
        const int chk = br * z_ + i;
        const int var = bc * z_ + (i + s) % z_;
        check_vars_[chk].push_back(var);
        var_degree_[var]++;
      }
    }
  }
}

BitSeq LdpcCode::encode(const BitSeq& info) const {
  if (static_cast<int>(info.size()) != k_)
    throw InputError("ldpc_encode: expected " + std::to_string(k_) + " info bits");
  const int icols = bcols_ - brows_;
  std::vector<ZVec> s(icols, ZVec(z_, 0));
  for (int c = 0; c < icols; ++c)
    for (int i = 0; i < z_; ++i) s[c][i] = info[c * z_ + i] & 1;

  // lambda_r = sum_c P^{a_rc} s_c
  std::vector<ZVec> lam(brows_, ZVec(z_, 0));
  for (int r = 0; r < brows_; ++r)
    for (int c = 0; c < icols; ++c) {
      const int sh = proto_[r * bcols_ + c];
      if (sh >= 0) xor_into(lam[r], rot(s[c], sh));
    }

  // p0 from the column sum: the staircase cancels pairwise and the first
  // parity column leaves P^0 p0
  ZVec p0(z_, 0);
  for (int r = 0; r < brows_; ++r) xor_into(p0, lam[r]);

  const int pc0 = bcols_ - brows_;
  std::vector<ZVec> p(brows_, ZVec(z_, 0));
  p[0] = p0;
  for (int r = 0; r + 1 < brows_; ++r) {
    ZVec acc = lam[r];
    const int sh0 = proto_[r * bcols_ + pc0];
    if (sh0 >= 0) xor_into(acc, rot(p0, sh0));
    if (r >= 1) xor_into(acc, p[r]);
    p[r + 1] = acc;
  }

  BitSeq cw(n_);
  std::copy(info.begin(), info.end(), cw.begin());
  for (int r = 0; r < brows_; ++r)
    for (int i = 0; i < z_; ++i) cw[(pc0 + r) * z_ + i] = p[r][i];
  return cw;
}

bool LdpcCode::parity_ok(const BitSeq& codeword) const {
  if (static_cast<int>(codeword.size()) != n_) return false;
  for (const auto& vars : check_vars_) {
    std::uint8_t par = 0;
    for (int v : vars) par ^= codeword[v] & 1;
    if (par) return false;
  }
  return true;
}

LdpcCode::DecodeResult LdpcCode::decode(const std::vector<double>& llrs, int max_iter) const {
  if (static_cast<int>(llrs.size()) != n_)
    throw InputError("ldpc_decode: expected " + std::to_string(n_) + " LLRs");
  const int m = brows_ * z_;

  // edge arrays per check
  std::vector<std::vector<double>> c2v(m);
  for (int chk = 0; chk < m; ++chk) c2v[chk].assign(check_vars_[chk].size(), 0.0);

  std::vector<double> post(llrs.begin(), llrs.end());
  BitSeq hard(n_);
  DecodeResult res;

  const auto harden = [&]() {
    for (int v = 0; v < n_; ++v) hard[v] = post[v] < 0.0 ? 1 : 0;
  };
  harden();
  if (parity_ok(hard)) {
    res.converged = true;
    res.iterations = 0;
    res.info.assign(hard.begin(), hard.begin() + k_);
    return res;
  }

  const double tcap = 1.0 - 1e-12;
  std::vector<double> t;
  for (int it = 1; it <= max_iter; ++it) {
    for (int chk = 0; chk < m; ++chk) {
      const auto& vars = check_vars_[chk];
      const std::size_t deg = vars.size();
      t.resize(deg);
      double prod = 1.0;
      for (std::size_t e = 0; e < deg; ++e) {
        const double msg = post[vars[e]] - c2v[chk][e];  // var-to-check
        double th = std::tanh(0.5 * msg);
        th = std::clamp(th, -tcap, tcap);
        t[e] = th;
        prod *= th;
      }
      for (std::size_t e = 0; e < deg; ++e) {
        const double ex = std::clamp(prod / t[e], -tcap, tcap);
        c2v[chk][e] = 2.0 * std::atanh(ex);
      }
    }
    // posterior update
    std::fill(post.begin(), post.end(), 0.0);
    for (int v = 0; v < n_; ++v) post[v] = llrs[v];
    for (int chk = 0; chk < m; ++chk) {
      const auto& vars = check_vars_[chk];
      for (std::size_t e = 0; e < vars.size(); ++e) post[vars[e]] += c2v[chk][e];
    }
    harden();
    res.iterations = it;
    if (parity_ok(hard)) {
      res.converged = true;
      break;
    }
  }
  res.info.assign(hard.begin(), hard.begin() + k_);
  return res;
}

FrameErrorRate frame_error_rate(std::size_t errors, std::size_t frames) {
  if (frames == 0) throw InputError("frame_error_rate: no frames");
  FrameErrorRate f;
  f.frames = frames;
  f.errors = errors;
  f.rate = static_cast<double>(errors) / static_cast<double>(frames);
  const double zq = 1.959963984540054;  // 95%
  const double n = static_cast<double>(frames);
  const double ph = f.rate;
  const double den = 1.0 + zq * zq / n;
  const double ctr = ph + zq * zq / (2.0 * n);
  const double rad = zq * std::sqrt(ph * (1.0 - ph) / n + zq * zq / (4.0 * n * n));
  f.ci_lo = std::max(0.0, (ctr - rad) / den);
  f.ci_hi = std::min(1.0, (ctr + rad) / den);
  return f;
}

FrameErrorRate frame_error_rate(const std::vector<std::pair<BitSeq, BitSeq>>& decoded_vs_true) {
  std::size_t errors = 0;
  for (const auto& [dec, ref] : decoded_vs_true) {
    if (dec.size() != ref.size()) throw InputError("frame_error_rate: length mismatch");
    if (!std::equal(dec.begin(), dec.end(), ref.begin())) ++errors;
  }
  return frame_error_rate(errors, decoded_vs_true.size());
}

}  // namespace nlilab
