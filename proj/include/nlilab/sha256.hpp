#ifndef NLILAB_SHA256_HPP
#define NLILAB_SHA256_HPP

#include <array>
#include <cstdint>
#include <string>

namespace nlilab {

std::array<std::uint8_t, 32> sha256(const void* data, std::size_t len);
std::array<std::uint8_t, 32> sha256(const std::string& s);
std::string sha256_hex(const std::string& s);

}  // namespace nlilab

#endif
