#pragma once

#include <Eigen/Dense>

#include <complex>

namespace cocycle_lab {

using cplx = std::complex<double>;

namespace linalg {

// Eigenvalues of the Hermitian part (A + A^*)/2, ascending.
Eigen::VectorXd hermitian_eigenvalues(const Eigen::MatrixXcd& a);
Eigen::VectorXd symmetric_eigenvalues(const Eigen::MatrixXd& a);

Eigen::VectorXd singular_values(const Eigen::MatrixXcd& a);

// Square root of a Hermitian PSD matrix; negative eigenvalues are clamped to 0.
Eigen::MatrixXcd psd_sqrt(const Eigen::MatrixXcd& a);

// ((1/n) sum s_i^p)^{1/p}; p = +inf gives max s_i.
double normalized_schatten(const Eigen::VectorXd& singular_values, double p);

// Matrix of the normalized-trace Schatten p-norm of a square complex matrix.
double normalized_schatten(const Eigen::MatrixXcd& a, double p);

}  // namespace linalg
}  // namespace cocycle_lab
