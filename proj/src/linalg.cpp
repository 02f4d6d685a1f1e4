#include "cocycle_lab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cocycle_lab::linalg {

Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a) {
  if (a.size() == 0) return {};
  const Eigen::MatrixXd h = 0.5 * (a + a.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return {};
  if (a.rows() <= 16) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
    return svd.singularValues();
  }
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues();
}

Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& a) {
  const Eigen::MatrixXcd h = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h);
  Eigen::VectorXd roots = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * roots.asDiagonal() * solver.eigenvectors().adjoint();
}

double normalized_schatten(const Eigen::VectorXd& s, double p) {
  if (s.size() == 0) return 0.0;
  if (std::isinf(p)) return s.cwiseAbs().maxCoeff();
  // Scale by the largest value before powering to avoid overflow at large p.
  const double top = s.cwiseAbs().maxCoeff();
  if (top == 0.0) return 0.0;
  double acc = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) acc += std::pow(std::abs(s[i]) / top, p);
  return top * std::pow(acc / static_cast<double>(s.size()), 1.0 / p);
}

double normalized_schatten(const Eigen::MatrixXcd& a, double p) {
  if (p == 2.0) {
    return std::sqrt(a.squaredNorm() / static_cast<double>(a.rows()));
  }
  return normalized_schatten(singular_values(a), p);
}

}  // namespace cocycle_lab::linalg
