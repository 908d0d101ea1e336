#pragma once

#include <Eigen/Dense>

#include "proplab/halfplane.hpp"

namespace proplab::symrep {

/// Matrix of the action of g on homogeneous polynomials of the given degree in
/// two variables, basis x^{deg-j} y^j (j = 0..deg), action (g.P)(v) = P(g^-1 v).
/// This is a homomorphism in g for every degree.
Eigen::MatrixXd sym_power_matrix(const halfplane::Moebius& g, int degree);

/// Image of g in the irreducible (2n+1)-dimensional representation (degree 2n).
struct RepMatrix {
  int n;
  Eigen::MatrixXd mat;
};
RepMatrix sym_power_rep(const halfplane::Moebius& g, int n);

/// The symmetric bilinear form induced by the symplectic form on R^2:
/// B(x^{2n-i} y^i, x^i y^{2n-i}) = (-1)^i / binom(2n, i), zero off the
/// antidiagonal. Invariant under sym_power_rep; eigenvalue signs count to the
/// unordered pair {n, n+1} (which side gets n depends on the parity of n).
struct InvariantForm {
  int n;
  Eigen::MatrixXd gram;
  int positives;
  int negatives;
};
InvariantForm invariant_form(int n);

/// Character oracle for hyperbolic g with eigenvalues a^{+-1}:
/// sum_{j=-n}^{n} a^{2j}. Equals the trace of sym_power_rep(g, n).
double character(const halfplane::Moebius& g, int n);

}  // namespace proplab::symrep
