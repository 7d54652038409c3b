#pragma once
// Counter-based random number generation (Philox-4x32-10), so that ensembles
// are bit-identical for a given (seed, stream) on every platform and under
// any parallel schedule.
//
// Algorithm statement, for portability of the reproducibility claim: the
// state is a 128-bit counter (c0,c1,c2,c3) and a 64-bit key (k0,k1), all
// 32-bit words.  One block applies the round
//
//   p0 = 0xD2511F53 * c0,  p1 = 0xCD9E8D57 * c2   (64-bit products)
//   (c0,c1,c2,c3) <- (hi(p1)^c1^k0, lo(p1), hi(p0)^c3^k1, lo(p0))
//
// ten times, bumping the key by (0x9E3779B9, 0xBB67AE85) before each round
// after the first, and yields the final counter as four 32-bit outputs.
// Blocks are indexed by (c0,c1); the stream id occupies (c2,c3); the seed is
// the initial key.  Distinct (seed, stream) pairs give statistically
// independent sequences, so per-path substreams can be generated in any
// order or in parallel without changing the ensemble.
//
// Derived variates: uniforms use 53 random bits offset to (0,1); Gaussians
// are the trigonometric Box-Muller pair (second value cached); exponentials
// are -log(uniform).
#include <cmath>
#include <cstdint>

namespace levyh {

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0) {
    key_[0] = static_cast<std::uint32_t>(seed);
    key_[1] = static_cast<std::uint32_t>(seed >> 32);
    ctr_[0] = 0;
    ctr_[1] = 0;
    ctr_[2] = static_cast<std::uint32_t>(stream);
    ctr_[3] = static_cast<std::uint32_t>(stream >> 32);
  }

  std::uint32_t nextU32() {
    if (idx_ == 4) block();
    return out_[idx_++];
  }

  std::uint64_t nextU64() {
    const std::uint64_t lo = nextU32();
    const std::uint64_t hi = nextU32();
    return lo | (hi << 32);
  }

  // uniform on the open interval (0,1), 53-bit resolution
  double uniform() {
    return (static_cast<double>(nextU64() >> 11) + 0.5) * 0x1.0p-53;
  }

  double gaussian() {
    if (haveSpare_) {
      haveSpare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double th = 2.0 * 3.14159265358979323846 * uniform();
    spare_ = r * std::sin(th);
    haveSpare_ = true;
    return r * std::cos(th);
  }

  double exponential() { return -std::log(uniform()); }

 private:
  static void round(std::uint32_t c[4], const std::uint32_t k[2]) {
    const std::uint64_t p0 = 0xD2511F53ull * c[0];
    const std::uint64_t p1 = 0xCD9E8D57ull * c[2];
    const std::uint32_t n0 =
        static_cast<std::uint32_t>(p1 >> 32) ^ c[1] ^ k[0];
    const std::uint32_t n1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n2 =
        static_cast<std::uint32_t>(p0 >> 32) ^ c[3] ^ k[1];
    const std::uint32_t n3 = static_cast<std::uint32_t>(p0);
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
  }

  void block() {
    std::uint32_t c[4] = {ctr_[0], ctr_[1], ctr_[2], ctr_[3]};
    std::uint32_t k[2] = {key_[0], key_[1]};
    round(c, k);
    for (int r = 1; r < 10; ++r) {
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
      round(c, k);
    }
    out_[0] = c[0];
    out_[1] = c[1];
    out_[2] = c[2];
    out_[3] = c[3];
    idx_ = 0;
    if (++ctr_[0] == 0) ++ctr_[1];  // next block
  }

  std::uint32_t key_[2];
  std::uint32_t ctr_[4];
  std::uint32_t out_[4] = {0, 0, 0, 0};
  int idx_ = 4;
  double spare_ = 0.0;
  bool haveSpare_ = false;
};

}  // namespace levyh
