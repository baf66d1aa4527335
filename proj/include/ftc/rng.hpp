#pragma once

#include <cmath>
#include <cstdint>

namespace ftc {

// Purpose tags keeping the derived streams of one root seed apart.
enum StreamTag : std::uint64_t {
  kStreamProblemA = 0xA1,
  kStreamProblemXtilde = 0xA2,
  kStreamProblemZ = 0xA3,
  kStreamGradNoise = 0xB1,
  kStreamInitX = 0xC1,
  kStreamConsensusX = 0xC2,
};

// Counter-based deterministic RNG: the state is a pure function of up to
// four key words (root seed, tag, agent, round), so any (agent, round)
// query reproduces the same draws regardless of evaluation order or
// threading. Core is the splitmix64 sequence.
class StreamRng {
 public:
  explicit StreamRng(std::uint64_t root, std::uint64_t k1 = 0, std::uint64_t k2 = 0,
                     std::uint64_t k3 = 0) {
    state_ = mix(root);
    state_ = mix(state_ ^ k1);
    state_ = mix(state_ ^ k2);
    state_ = mix(state_ ^ k3);
  }

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [0, 1)
  double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // standard normal, Marsaglia polar method
  double next_gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * next_unit() - 1.0;
      v = 2.0 * next_unit() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace ftc
