#pragma once

#include <boost/random/normal_distribution.hpp>
#include <cstdint>
#include <random>

namespace ssgauss {

/// Stream salts separate independent uses of one master seed.
enum class StreamSalt : std::uint64_t {
  white_noise = 0x5eed0001,
  fbm_noise = 0x5eed0002,
  cholesky = 0x5eed0003,
  aux_y = 0x5eed0004,
  bootstrap = 0x5eed0005,
  scaling_a = 0x5eed0006,
  scaling_b = 0x5eed0007,
  synthetic = 0x5eed0008,
};

/// Counter-based derivation of a per-stream seed from (master, salt, ids).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt, std::uint64_t stream,
                          std::uint64_t substream = 0);

inline std::uint64_t derive_seed(std::uint64_t master, StreamSalt salt, std::uint64_t stream,
                                 std::uint64_t substream = 0) {
  return derive_seed(master, static_cast<std::uint64_t>(salt), stream, substream);
}

/// Random source for one stream.  Normal variates come from the Boost
/// ziggurat so values are identical across standard libraries.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t seed) : engine_(seed) {}

  double normal() { return normal_(engine_); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

}  // namespace ssgauss
