#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace cocycle_lab {

// Child seeds are a hash of (root, label, index) so that results do not depend
// on the order in which independent jobs are scheduled.
std::uint64_t derive_seed(std::uint64_t root, std::string_view label, std::uint64_t index = 0);

// Deterministic generator. std::normal_distribution is implementation-defined,
// so normals are produced here from the raw mt19937_64 stream (Box-Muller).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform();  // [0, 1)
  double normal();
  std::complex<double> complex_normal();  // E|z|^2 = 1
  std::size_t index(std::size_t n);       // uniform in [0, n)

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace cocycle_lab
