#pragma once

#include "cocycle_lab/cocycle.hpp"
#include "cocycle_lab/random.hpp"

#include <Eigen/Dense>

#include <memory>
#include <span>
#include <string>
#include <vector>

// Explicit cocycles with closed-form b and alpha. All are left cocycles.
namespace cocycle_lab::catalog {

// Z_n, b(k) = (cos(2 pi k/n) - 1, sin(2 pi k/n)), alpha_k = rotation by 2 pi k/n.
Cocycle zn_roots(Index n);

// Donut helix R -> R^4 tabulated at xi = step * k, |k| <= radius:
// b(xi) = (cos 2 pi a xi - 1, sin 2 pi a xi, cos 2 pi b xi - 1, sin 2 pi b xi).
Cocycle helix(double alpha, double beta, double step, int radius);
Eigen::Vector4d helix_vector(double alpha, double beta, double xi);

// b(k) = sum_j gamma_j k_j on the box [-radius, radius]^n of Z^n, trivial action.
Cocycle directional(std::span<const double> gamma, int radius);

inline constexpr double kDefaultFreeAngle = 1.2309594173407747;  // arccos(1/3)

// F_2 word ball mapped into SO(3) by a1 -> A1(theta), a2 -> A2(theta);
// b(w) = (W e1 - e1) + (W e2 - e2) + (W e3 - e3) in R^9, alpha = W + W + W.
// `warning` is set when sin(theta) = 0 (the representation is then not faithful).
Cocycle free_so3(double theta, int radius, std::string* warning = nullptr);
Eigen::Matrix3d so3_generator(int letter, double theta);

// Haagerup cocycle on a word ball with psi(w) = |w|, realized in the prefix
// basis so that <b(g), b(h)> = |min(g, h)|. Gram-level only: no action matrices.
Cocycle haagerup(int generators, int radius);

// b_G = b_H o hom, alpha_G = alpha_H o hom. `hom` lists hom(g) for every g in G
// and is checked to be a homomorphism.
Cocycle pullback(std::shared_ptr<const FiniteGroup> group, std::span<const Index> hom, const Cocycle& target);

// b(g1, g2) = b1(g1) + b2(g2) on the product group (index g1 * |G2| + g2).
Cocycle direct_sum(std::shared_ptr<const FiniteGroup> product, const Cocycle& first, const Cocycle& second);

// Heisenberg surrogate mod n with psi(a,b,c) = psi_roots(b) + psi_roots(c),
// pulled back along the quotient (a,b,c) -> (b,c). The centre is the kernel.
Cocycle heisenberg_roots(Index n);
std::vector<Index> heisenberg_quotient(Index n);

// b(g) = pi(g) v - v for an orthogonal representation pi.
Cocycle linear_coboundary(std::shared_ptr<const FiniteGroup> group, std::vector<Eigen::MatrixXd> rep,
                          const Eigen::VectorXd& v);

// Coboundary of the left regular representation, b(g) = lambda(g) v - v.
Cocycle regular_coboundary(std::shared_ptr<const FiniteGroup> group, const Eigen::VectorXd& v);

// Symmetries of the regular n-gon in the plane, matching build_dihedral's labels.
std::vector<Eigen::MatrixXd> dihedral_plane_rep(Index n);

// A random conditionally negative length: a positive combination of
// regular-representation coboundary lengths, scaled to max psi = scale.
LengthFunction random_length(std::shared_ptr<const FiniteGroup> group, Rng& rng, int terms = 2,
                             double scale = 4.0);

}  // namespace cocycle_lab::catalog
