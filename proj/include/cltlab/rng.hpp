#pragma once

#include <array>
#include <cstdint>

namespace cltlab {

/// Immutable descriptor of a random stream. Draws are a pure function of
/// (seed, stream_id, position), so streams can be handed to threads freely.
struct RngStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;

  /// A child stream, statistically independent of this one and of siblings
  /// with a different k.
  RngStream substream(std::uint64_t k) const;

  friend bool operator==(const RngStream&, const RngStream&) = default;
};

/// Philox4x32-10 block function (Salmon et al., SC'11).
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter, std::array<std::uint32_t, 2> key);

/// Sequential cursor over one stream. Not thread safe; make one per thread.
class Generator {
 public:
  explicit Generator(RngStream stream, std::uint64_t position = 0);

  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1) with 53 random bits.
  double uniform();
  /// Standard normal by inversion (one uniform per draw, keeps streams aligned).
  double normal();
  /// Exp(1) by inversion.
  double exponential();
  /// Gamma(shape, 1). Marsaglia-Tsang, boosted for shape < 1.
  double gamma(double shape);

  std::uint64_t position() const { return position_; }

 private:
  void refill();

  RngStream stream_;
  std::uint64_t position_;  // index of the next 128-bit block
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;  // 32-bit words consumed from buffer_
};

}  // namespace cltlab
