#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace got {

using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FNV-1a, used only to turn stream names into stable 64-bit tags.
constexpr std::uint64_t stream_tag(std::string_view name) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char ch : name) {
    h ^= static_cast<unsigned char>(ch);
    h *= 0x100000001b3ULL;
  }
  return h;
}

/// Derives independent named generators from one master seed.
///
/// Every stream is a pure function of (master seed, name, index), so adding a
/// new consumer never shifts the draws seen by existing ones.
class SeedTree {
 public:
  explicit SeedTree(std::uint64_t master) : master_(master) {}

  std::uint64_t seed_for(std::string_view name, std::uint64_t index = 0) const {
    std::uint64_t s = splitmix64(master_ ^ splitmix64(stream_tag(name)));
    return splitmix64(s + splitmix64(index + 0x632be59bd9b4e019ULL));
  }

  Rng stream(std::string_view name, std::uint64_t index = 0) const {
    return Rng(seed_for(name, index));
  }

  std::uint64_t master() const { return master_; }

 private:
  std::uint64_t master_;
};

inline double uniform01(Rng& rng) {
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
}

inline int uniform_arm(Rng& rng, int arms) {
  return std::uniform_int_distribution<int>(0, arms - 1)(rng);
}

}  // namespace got
