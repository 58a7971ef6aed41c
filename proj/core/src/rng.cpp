#include "pdmp/rng.hpp"

namespace pdmp {
namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(p >> 32);
  lo = static_cast<std::uint32_t>(p);
}

}  // namespace

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kMul0, ctr[0], hi0, lo0);
    mulhilo(kMul1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

double uniform_open(std::uint64_t bits) noexcept {
  // 52 random bits, shifted half a step off both ends.
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

double VariateStream::at(Substream sub, std::uint32_t event, std::uint32_t draw) const noexcept {
  const PhiloxKey key{static_cast<std::uint32_t>(seed_), static_cast<std::uint32_t>(seed_ >> 32)};
  const PhiloxCounter ctr{static_cast<std::uint32_t>(replication_),
                          static_cast<std::uint32_t>(replication_ >> 32), event,
                          (static_cast<std::uint32_t>(sub) << 28) | (draw >> 1)};
  const PhiloxCounter out = philox4x32(ctr, key);
  const std::uint64_t bits = (draw & 1u)
                                 ? (static_cast<std::uint64_t>(out[2]) << 32) | out[3]
                                 : (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
  return uniform_open(bits);
}

}  // namespace pdmp
