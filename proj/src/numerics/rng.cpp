#include "cltlab/rng.hpp"

#include <cmath>

#include "cltlab/errors.hpp"
#include "cltlab/special_functions.hpp"

namespace cltlab {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

}  // namespace

RngStream RngStream::substream(std::uint64_t k) const {
  return {seed, splitmix64(stream_id ^ splitmix64(k + 0x632BE59BD9B4E019ULL))};
}

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr, std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

Generator::Generator(RngStream stream, std::uint64_t position) : stream_(stream), position_(position) {}

void Generator::refill() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(stream_.stream_id), static_cast<std::uint32_t>(stream_.stream_id >> 32),
      static_cast<std::uint32_t>(position_), static_cast<std::uint32_t>(position_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(stream_.seed),
                                            static_cast<std::uint32_t>(stream_.seed >> 32)};
  buffer_ = philox4x32(ctr, key);
  ++position_;
  used_ = 0;
}

std::uint64_t Generator::next_u64() {
  if (used_ > 2) refill();
  const std::uint64_t v = (static_cast<std::uint64_t>(buffer_[used_]) << 32) | buffer_[used_ + 1];
  used_ += 2;
  return v;
}

double Generator::uniform() {
  // (k + 0.5) / 2^53 never hits 0 or 1.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Generator::normal() { return gauss_quantile(uniform()); }

double Generator::exponential() { return -std::log(uniform()); }

double Generator::gamma(double shape) {
  if (!(shape > 0.0)) throw DomainError("gamma: shape must be > 0");
  if (shape < 1.0) {
    const double g = gamma(shape + 1.0);
    return g * std::pow(uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    double x;
    double v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

}  // namespace cltlab
