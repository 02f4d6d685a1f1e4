#pragma once

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/cocycle.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cocycle_lab {

using Bump = std::function<double(double)>;

// delta(s) = eta(s) - eta(2s) with eta = 1 on [0, 1], 0 on [2, inf).
// Supported in [1/2, 2].
double default_bump(double s);

// h_m(x) = rho(2^-m sqrt(x)) for m in [m_min, m_max], x >= 0, and h_m(0) = 0.
// Normalized families divide by (sum_k |h_k(x)|^2)^{1/2} pointwise.
class DyadicFamily {
 public:
  DyadicFamily(Bump bump, std::string description, int m_min, int m_max, bool normalized);

  double raw(int m, double x) const;
  double operator()(int m, double x) const;
  // sum_m raw(m, x)^2, before normalization.
  double sum_squares(double x) const;

  int m_min() const { return m_min_; }
  int m_max() const { return m_max_; }
  int size() const { return m_max_ - m_min_ + 1; }
  bool normalized() const { return normalized_; }
  const std::string& description() const { return description_; }
  const Bump& bump() const { return bump_; }

  // Set when the requested range did not cover the psi values.
  bool extended = false;
  std::string note;

 private:
  Bump bump_;
  std::string description_;
  int m_min_ = 0;
  int m_max_ = 0;
  bool normalized_ = false;
};

// Range m with 2^m spanning [sqrt(min+ psi)/2, 2 sqrt(max psi)]. A requested
// range that misses some positive psi value is widened and the fact recorded.
DyadicFamily dyadic_family(const LengthFunction& psi, bool normalize, std::optional<std::pair<int, int>> range = {},
                           Bump bump = default_bump, std::string description = "default");

// T_m f with symbol h_m(psi(g)).
AlgebraElement dyadic_piece(const LengthFunction& psi, const DyadicFamily& family, int m, const AlgebraElement& f);

struct SquareFunctionNorms {
  double column = 0.0;
  double row = 0.0;
  double rc = 0.0;
  double column_min_eig = 0.0;  // of sum (T_m f)^* (T_m f) before the square root
  double row_min_eig = 0.0;
};

// Requires p >= 2 (p = inf allowed).
SquareFunctionNorms square_function_norms(const LengthFunction& psi, const DyadicFamily& family,
                                          const AlgebraElement& f, double p);

struct Reconstruction {
  double lhs = 0.0;  // ‖J f‖_p
  double rhs = 0.0;  // rc square-function norm
  double ratio = 1.0;
};

Reconstruction reconstruction_check(const LengthFunction& psi, const DyadicFamily& family, const AlgebraElement& f,
                                    double p);

struct EnvelopeReport {
  std::vector<double> constants;  // c_k = sup_x x^{2k} sum_m |d^k h_m / dx^k (x)|^2
  double x_min = 0.0;
  double x_max = 0.0;
  int points = 0;
};

EnvelopeReport derivative_envelope(const DyadicFamily& family, int k_max = 2, int points = 200);

}  // namespace cocycle_lab
