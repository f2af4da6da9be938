#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cfplace {

// Seeded generator with pinned normal-draw algorithm. std::normal_distribution
// is not specified bit-for-bit across standard libraries, so normals come from
// an explicit Box-Muller transform; reruns with the same seed are identical.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t raw() { return engine_(); }

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    // u1 in (0, 1] keeps the log finite.
    const double u1 = static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double t = 6.283185307179586476925286766559 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// One splitmix64 round; used only for seed derivation.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// Independent substream seed for (master, salt). Salts are module-local
// constants; trial/restart indices ride on top of them.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t salt) {
  return mix64(master ^ mix64(salt));
}

namespace seed_salt {
constexpr std::uint64_t kTraining = 0x7261696e01ull;
constexpr std::uint64_t kEvaluation = 0x6576616c01ull;
constexpr std::uint64_t kValidation = 0x76616c6401ull;
constexpr std::uint64_t kRestartBase = 0x7265737401ull;
constexpr std::uint64_t kTrialBase = 0x747269616cull;
constexpr std::uint64_t kInit = 0x696e697401ull;
}  // namespace seed_salt

}  // namespace cfplace
