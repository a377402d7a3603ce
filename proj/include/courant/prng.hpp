#pragma once

#include <cstdint>
#include <initializer_list>

namespace courant {

// splitmix64 finalizer; the whole generator is built out of this one mixer so
// that streams can be split by key material instead of by shared state
inline std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// counter-based stream: key = fold(seed, path...), draws are mix(key, counter).
// Two streams with different paths never share draws, and a stream's n-th draw
// does not depend on how many draws other streams made (trial order freedom).
class Rng {
 public:
  static Rng from(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
    std::uint64_t k = mix64(seed ^ 0x6a09e667f3bcc909ull);
    for (std::uint64_t p : path) k = mix64(k ^ mix64(p ^ 0xbb67ae8584caa73bull));
    return Rng(k);
  }

  std::uint64_t next() { return mix64(key_ ^ counter_++); }

  // inclusive bounds; modulo bias is irrelevant here, determinism is not
  long long range(long long lo, long long hi) {
    return lo + static_cast<long long>(next() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool chance(int num, int den) { return range(1, den) <= num; }

 private:
  explicit Rng(std::uint64_t key) : key_(key), counter_(0) {}
  std::uint64_t key_;
  std::uint64_t counter_;
};

}  // namespace courant
