#pragma once

#include "cocycle_lab/group.hpp"

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <vector>

namespace cocycle_lab {

inline constexpr double kDefaultTol = 1e-10;

// Candidate length function psi: G -> R_+. Construction enforces psi(e) = 0,
// psi >= 0 and psi(g) = psi(g^-1); conditional negativity is certified
// separately by is_conditionally_negative.
class LengthFunction {
 public:
  LengthFunction(GroupCarrier group, std::vector<double> values);

  const GroupCarrier& group() const { return group_; }
  const std::vector<double>& values() const { return values_; }
  double operator[](Index g) const { return values_[g]; }
  Index size() const { return values_.size(); }
  double max_value() const;
  // Threshold below which psi(g) is treated as zero (membership in G_0).
  double zero_threshold() const { return 1e-9 * (1.0 + max_value()); }
  bool vanishes_at(Index g) const { return values_[g] <= zero_threshold(); }

 private:
  GroupCarrier group_;
  std::vector<double> values_;
};

enum class Side { left, right };

const char* to_string(Side side);

// K(g,h) = (psi(g) + psi(h) - psi(g^-1 h)) / 2 (left) or with psi(g h^-1) (right).
Eigen::MatrixXd gromov_form(const LengthFunction& psi, Side side = Side::left);

struct NegativityCertificate {
  bool pass = false;
  // Smallest eigenvalue of -PMP with M(g,h) = psi(g^-1 h), P = I - J/N.
  double min_eig = 0.0;
};

NegativityCertificate is_conditionally_negative(const LengthFunction& psi, double tol = kDefaultTol);

struct SchoenbergVerdict {
  double t = 0.0;
  double min_eig = 0.0;
  bool psd = false;
};

std::vector<SchoenbergVerdict> schoenberg_check(const LengthFunction& psi, std::span<const double> t_list,
                                                double tol = 1e-8);

// 13 points, 10^-3 .. 10^3 in half-decade steps.
std::vector<double> schoenberg_grid();

// Finite-dimensional cocycle (H = R^d, alpha, b) on a carrier.
//   left:  b(gh) = alpha_g b(h) + b(g)
//   right: alpha_g b(h) = b(h g^-1) - b(g^-1)
// `alpha` is empty for Gram-level cocycles (Haagerup on a word ball).
struct Cocycle {
  GroupCarrier group;
  Side side = Side::left;
  Index dim = 0;
  Eigen::MatrixXd b;                   // order x dim
  std::vector<Eigen::MatrixXd> alpha;  // per element, dim x dim
  Eigen::MatrixXd gram;                // order x order
  double tol = kDefaultTol;
  bool partial = false;                // multiplication of the carrier is partial
  std::string kind = "constructed";

  Index order() const { return static_cast<Index>(b.rows()); }
  Eigen::VectorXd vec(Index g) const { return b.row(static_cast<Eigen::Index>(g)).transpose(); }
  bool has_action() const { return !alpha.empty(); }
  // psi(g) = |b(g)|^2
  std::vector<double> lengths() const;
};

// Realizes the Gromov form as a Gram matrix (eigenvalues <= tol * max are
// dropped) and solves each alpha_g by least squares on span{b(h)}.
Cocycle build_cocycle(const LengthFunction& psi, Side side = Side::left, double tol = kDefaultTol);

// Length function induced by a cocycle on a complete carrier.
LengthFunction induced_length(const Cocycle& c);

struct CocycleResiduals {
  double gram = 0.0;            // max |<b(g), b(h)> - K(g,h)|
  double length = 0.0;          // max |‖b(g)-b(h)‖^2 - psi(g^-1 h)| (right: psi(g h^-1)), where defined
  double law = 0.0;             // max ‖alpha_g b(h) - (b(gh) - b(g))‖ (or isometry form without alpha)
  double orthogonality = 0.0;   // max ‖alpha_g^T alpha_g - I‖_F
  double representation = 0.0;  // max ‖alpha_g alpha_h - alpha_gh‖_F (sampled for large groups)
  double coverage = 1.0;        // fraction of pairs with a defined product
};

// psi defaults to |b|^2 when not supplied.
CocycleResiduals cocycle_residuals(const Cocycle& c, const LengthFunction* psi = nullptr);

double left_right_isometry_residual(const Cocycle& left, const Cocycle& right);

struct SeparationReport {
  double delta = 0.0;
  bool injective = false;
  bool well_separated = false;
  bool standard = false;
};

SeparationReport separation_report(const Cocycle& c);

struct BallCount {
  double radius = 0.0;
  Index count = 0;
  double bound = 0.0;
  bool pass = false;
};

// Counts distinct cocycle vectors with |b(g)| <= R against (1 + 2R/Delta)^d.
std::vector<BallCount> ball_count_check(const Cocycle& c, std::span<const double> radii);

// b(gh) = b(g) + b(h) wherever gh is defined.
bool is_additive(const Cocycle& c, double tol = 1e-9);

// Number of distinct action matrices.
Index distinct_actions(const Cocycle& c, double tol = 1e-9);

}  // namespace cocycle_lab
