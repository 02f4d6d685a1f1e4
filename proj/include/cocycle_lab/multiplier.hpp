#pragma once

#include "cocycle_lab/algebra.hpp"
#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/group.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cocycle_lab {

enum class SymbolKind { lifted, radial, riesz, imaginary_power, explicit_values };
const char* to_string(SymbolKind kind);

using RadialProfile = std::function<cplx(double)>;
using LiftedProfile = std::function<cplx(std::span<const double>)>;

// T_m: sum f^(g) lambda(g) -> sum m_g f^(g) lambda(g)
struct MultiplierSymbol {
  GroupCarrier group;
  Eigen::VectorXcd m;
  SymbolKind kind = SymbolKind::explicit_values;
  std::map<std::string, double> params;
  std::string description;

  Index order() const { return static_cast<Index>(m.size()); }
};

MultiplierSymbol explicit_symbol(GroupCarrier group, Eigen::VectorXcd values);

AlgebraElement apply(const MultiplierSymbol& m, const AlgebraElement& f);

// m_g = -i <b(g), eta> / sqrt(psi(g)), and 0 where psi vanishes.
MultiplierSymbol riesz_symbol(const Cocycle& c, const Eigen::VectorXd& eta);

// m_g = h(psi(g)). Throws Error{symbol_evaluation} naming g on a non-finite value.
MultiplierSymbol radial_symbol(const LengthFunction& psi, const RadialProfile& h, std::string description = {});

// m_g = psi(g)^{is} off G_0 and 0 on G_0.
MultiplierSymbol imaginary_power_symbol(const LengthFunction& psi, double s);

// m_g = m~(b(g)).
MultiplierSymbol lifted_symbol(const Cocycle& c, const LiftedProfile& profile, std::string description = {});

// Exact L_2 -> L_2 norm: max |m_g|.
double l2_norm_exact(const MultiplierSymbol& m);

struct LpSearchResult {
  double lower_bound = 0.0;
  double best_start = 0.0;  // best ratio among the random starting points
  std::vector<double> per_trial;
  std::optional<AlgebraElement> witness;
};

// Lower bound for ‖T_m‖_{L_p -> L_p} by randomized coordinate ascent over f^.
// Starts include the character at the peak of |m|. Only a lower bound: there
// is no matching upper estimate.
LpSearchResult lp_norm_search(const MultiplierSymbol& m, double p, int trials, int steps, std::uint64_t seed);

// max over unit xi and all g of |<alpha_g xi, eta> - <xi, alpha_{g^-1} eta>|.
double schur_riesz_residual(const Cocycle& c, const Eigen::VectorXd& eta, int samples = 64, std::uint64_t seed = 0);

// Structural situations in which the loss in the lifting exponent is known to vanish.
struct EpsilonFreeConditions {
  bool abelian = false;
  bool lattice = false;
  bool finite_action = false;
  bool radial = false;
  Index distinct_actions = 0;
};
EpsilonFreeConditions epsilon_free_conditions(const Cocycle& c, const MultiplierSymbol* m = nullptr);

// Is m constant on the level sets of psi?
bool is_radial(const MultiplierSymbol& m, const LengthFunction& psi, double tol = 1e-10);

struct MihlinOptions {
  int order = -1;  // -1 selects [n/2] + 1
  double eps = 0.1;
  int shells = 25;
  int directions = 16;
  double r_min = 1e-3;
  double r_max = 1e3;
  double relative_step = 1e-4;
  double threshold = 0.0;  // <= 0 disables the pass/fail verdict
  bool epsilon_mode = false;
};

struct MihlinOrderStats {
  int order = 0;
  double sup = 0.0;        // sup |xi|^{|beta|} |d^beta m|
  double sup_minus = 0.0;  // sup |xi|^{|beta|-eps} |d^beta m|
  double sup_plus = 0.0;   // sup |xi|^{|beta|+eps} |d^beta m|
  double sup_eps = 0.0;    // sup |d^beta m| / min(|xi|^{-|beta|+eps}, |xi|^{-|beta|-eps})
  double step = 0.0;       // relative finite-difference step
};

struct MihlinReport {
  int n = 0;
  int order = 0;
  double eps = 0.0;
  int shells = 0;
  int directions = 0;
  double r_min = 0.0;
  double r_max = 0.0;
  std::vector<MihlinOrderStats> per_order;
  bool finite = true;
  std::vector<double> bad_point;  // first point with a non-finite sample
  double threshold = 0.0;
  bool pass = true;
};

MihlinReport mihlin_check(const LiftedProfile& profile, int n, const MihlinOptions& opt = {});

// Finite-difference step used for derivatives of total order k.
double mihlin_step(int k, double relative_step);

}  // namespace cocycle_lab
