#pragma once

#include <array>
#include <cstdint>

#include "pdmp/kernel.hpp"

namespace pdmp {

// Philox4x32-10 block function (Salmon et al., Random123).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32(PhiloxCounter ctr, PhiloxKey key) noexcept;

// Uniform on the open interval (0, 1) from 64 random bits.
double uniform_open(std::uint64_t bits) noexcept;

enum class Substream : std::uint32_t { holding = 0, destination = 1, auxiliary = 2 };

// Uniform variates keyed by (seed, replication, substream, event, draw). Every
// value is a pure function of its key, so results do not depend on scheduling.
class VariateStream {
 public:
  VariateStream(std::uint64_t seed, std::uint64_t replication) noexcept
      : seed_(seed), replication_(replication) {}

  double at(Substream sub, std::uint32_t event, std::uint32_t draw) const noexcept;

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t replication() const noexcept { return replication_; }

 private:
  std::uint64_t seed_;
  std::uint64_t replication_;
};

// Sequential draws 0, 1, 2, ... of one (substream, event) cell.
class StreamCursor final : public UniformSource {
 public:
  StreamCursor(const VariateStream& stream, Substream sub, std::uint32_t event) noexcept
      : stream_(stream), sub_(sub), event_(event) {}

  double next() override { return stream_.at(sub_, event_, draw_++); }

 private:
  const VariateStream& stream_;
  Substream sub_;
  std::uint32_t event_;
  std::uint32_t draw_ = 0;
};

}  // namespace pdmp
