#pragma once

#include "cocycle_lab/linalg.hpp"

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace cocycle_lab {

using FrequencySymbol = std::function<cplx(double)>;

// Samples of a function on the discrete circle Z_N, N a power of two.
struct GridSignal {
  std::vector<cplx> samples;

  std::size_t size() const { return samples.size(); }
  // (1/N sum |x_j|^p)^{1/p}; p = inf gives max |x_j|.
  double norm(double p) const;
};

bool is_power_of_two(std::size_t n);
void require_power_of_two(std::size_t n);

// Signed integer frequency of DFT bin k, in (-N/2, N/2].
long long signed_frequency(std::size_t k, std::size_t n);

// Forward/backward complex DFT of a fixed length, with reusable plans.
class Fft {
 public:
  explicit Fft(std::size_t n);
  ~Fft();
  Fft(const Fft&) = delete;
  Fft& operator=(const Fft&) = delete;

  std::size_t size() const { return n_; }
  // X_k = sum_j x_j exp(-2 pi i j k / N)
  std::vector<cplx> forward(const std::vector<cplx>& x);
  // x_j = (1/N) sum_k X_k exp(2 pi i j k / N)
  std::vector<cplx> inverse(const std::vector<cplx>& x);

 private:
  struct Impl;
  std::size_t n_;
  std::unique_ptr<Impl> impl_;
};

// xi -> (sin^2(alpha xi) + sin^2(beta xi))^gamma. `warning` is set when gamma
// lies outside (0, 1); the symbol stays evaluable.
FrequencySymbol donut_symbol(double alpha, double beta, double gamma, std::string* warning = nullptr);

// Multiplies the DFT coefficient of signed frequency k by symbol(k * scale).
// scale <= 0 selects 1/N.
GridSignal fft_apply(const FrequencySymbol& symbol, const GridSignal& signal, double scale = 0.0);
GridSignal fft_apply(const FrequencySymbol& symbol, const GridSignal& signal, Fft& fft, double scale = 0.0);

// max over grid frequencies of |symbol(k * scale)|: the exact L_2 norm.
double grid_supremum(const FrequencySymbol& symbol, std::size_t n, double scale = 0.0);

struct SweepRow {
  std::size_t n = 0;
  double p = 2.0;
  double lower_bound = 0.0;
  double exact_l2 = 0.0;
  int trials = 0;
};

// Per N, a randomized-ascent lower bound on ‖T_s‖_{L_p -> L_p} over grid signals.
// Starts include the pure frequency at the symbol's maximum and a delta.
std::vector<SweepRow> empirical_norm_sweep(const FrequencySymbol& symbol, double p, const std::vector<std::size_t>& sizes,
                                           int trials, int steps, std::uint64_t seed, double scale = 0.0);

struct RestrictionComparison {
  double coarse = 0.0;  // symbol sampled at step h
  double fine = 0.0;    // symbol sampled at step h / 2
  double drift = 0.0;   // |coarse - fine|
  double relative_drift = 0.0;
};

RestrictionComparison restriction_compare(const FrequencySymbol& symbol, double h, double p, std::size_t n, int trials,
                                          int steps, std::uint64_t seed);

// Raw little-endian float64 (re, im) pairs.
void write_signal_binary(const std::string& path, const GridSignal& s);
GridSignal read_signal_binary(const std::string& path);
// CSV with header "re,im".
void write_signal_csv(const std::string& path, const GridSignal& s);
GridSignal read_signal_csv(const std::string& path);

}  // namespace cocycle_lab
