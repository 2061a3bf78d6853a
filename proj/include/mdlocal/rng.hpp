#pragma once

#include <cstddef>
#include <cstdint>

// Counter-based randomness: every draw is a pure function of
// (seed, stream, index), so results never depend on evaluation order or
// thread count.
namespace mdlocal::rng {

constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent sub-seed for a named purpose.
constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ splitmix64(stream + 0x51afd6c3a2b7e411ULL));
}

constexpr std::uint64_t draw(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index));
}

// Top 53 bits as a double in [0, 1).
constexpr double to_unit(std::uint64_t bits) {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// Maps 64 random bits to [0, n) by multiply-high.
inline std::uint64_t to_index(std::uint64_t bits, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(bits) * n) >> 64);
}

}  // namespace mdlocal::rng
