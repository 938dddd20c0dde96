#ifndef NLILAB_KERNELS_HPP
#define NLILAB_KERNELS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "nlilab/types.hpp"

namespace nlilab {

enum class KernelOrigin : std::uint8_t { Analytic = 0, Nbgd = 1 };

/// Complex perturbation coefficients S_klm on the cube [-M, M]^3,
/// row-major with k outermost.
struct KernelTensor {
  int memory = 0;
  std::vector<cplx> values;
  KernelOrigin origin = KernelOrigin::Analytic;
  double trained_power_dbm = std::numeric_limits<double>::quiet_NaN();
  std::array<std::uint8_t, 32> fingerprint{};

  KernelTensor() = default;
  explicit KernelTensor(int m)
      : memory(m), values(static_cast<std::size_t>(2 * m + 1) * (2 * m + 1) * (2 * m + 1)) {}

  int side() const { return 2 * memory + 1; }
  std::size_t index(int k, int l, int m) const {
    const int s = side();
    return (static_cast<std::size_t>(k + memory) * s + (l + memory)) * s + (m + memory);
  }
  cplx at(int k, int l, int m) const { return values[index(k, l, m)]; }
  cplx& at(int k, int l, int m) { return values[index(k, l, m)]; }
};

/// Fingerprint over the kernel-relevant link fields (fiber, Rs, roll-off,
/// M) plus the training power; analytic tensors hash power as NaN.
std::array<std::uint8_t, 32> link_fingerprint(const LinkConfig& cfg, double power_dbm);

struct AnalyticKernelOptions {
  int n_sym = 0;      // t-integration block length in symbols; 0 = auto
  int osf = 8;
  int z_nodes = 465;  // composite-Simpson nodes (forced odd)
};

/// Kernels from the first-order regular-perturbation integral
///   S_klm = int_0^L dz e^{-alpha z} int dt g*(z,t) g*(z,t-kT) g(z,t-lT) g(z,t-mT)
/// with g(z,.) the unit-energy RRC pulse dispersed over z. The t-integral is
/// a Riemann sum on an oversampled periodic block, the z-integral composite
/// Simpson. The block auto-extends past 4M+32 symbols to fit the dispersed
/// pulse support.
KernelTensor analytic_kernels(const LinkConfig& cfg, const FiberParams& fp, int memory,
                              const AnalyticKernelOptions& opts = {});

/// Block length (symbols) used by analytic_kernels when opts.n_sym == 0.
int analytic_kernel_block_symbols(const LinkConfig& cfg, const FiberParams& fp, int memory);

// Kernel file format "NBGK" (little-endian): magic, u32 version = 1, u16 M,
// u8 origin, f64 trained_power_dbm (NaN if unset), 32-byte fingerprint,
// then (2M+1)^3 complex f64 pairs in row-major (k, l, m) order.
void kernel_io_write(const std::string& path, const KernelTensor& k);
KernelTensor kernel_io_read(const std::string& path);

}  // namespace nlilab

#endif
