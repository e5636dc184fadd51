#pragma once
// Deterministic seeded randomness. One master seed; independent streams are
// derived by (label, index) splitting so pipelines can consume randomness in
// any order without perturbing each other. Distribution helpers are
// hand-rolled (std:: distributions are not bit-stable across library
// versions).

#include <cstdint>
#include <string_view>

namespace geo {

inline uint64_t splitmix64(uint64_t& s) {
  uint64_t z = (s += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline uint64_t fnv1a(std::string_view s) {
  uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// xoshiro256** — small, fast, reproducible.
class Rng {
 public:
  explicit Rng(uint64_t seed = 1) {
    uint64_t s = seed;
    for (auto& w : st_) w = splitmix64(s);
  }

  uint64_t next() {
    auto rotl = [](uint64_t x, int k) { return (x << k) | (x >> (64 - k)); };
    uint64_t r = rotl(st_[1] * 5, 7) * 9;
    uint64_t t = st_[1] << 17;
    st_[2] ^= st_[0];
    st_[3] ^= st_[1];
    st_[1] ^= st_[2];
    st_[0] ^= st_[3];
    st_[2] ^= t;
    st_[3] = rotl(st_[3], 45);
    return r;
  }

  // uniform in [0,1)
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  // uniform in [lo,hi)
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // uniform integer in [0, n)
  uint64_t uniform_index(uint64_t n) { return n ? next() % n : 0; }
  // uniform integer in [lo, hi] inclusive
  int64_t uniform_int(int64_t lo, int64_t hi) {
    return lo + static_cast<int64_t>(uniform_index(static_cast<uint64_t>(hi - lo + 1)));
  }
  bool coin() { return next() & 1; }

 private:
  uint64_t st_[4];
};

// Derive an independent stream from (seed, label, index).
inline Rng derive_rng(uint64_t seed, std::string_view label, uint64_t index = 0) {
  uint64_t s = seed ^ (fnv1a(label) * 0x9e3779b97f4a7c15ULL) ^ (index + 0x632be59bd9b4e019ULL);
  return Rng(splitmix64(s));
}

}  // namespace geo
