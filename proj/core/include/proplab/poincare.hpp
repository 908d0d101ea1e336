#pragma once

#include <complex>
#include <span>
#include <vector>

#include "proplab/fuchsian.hpp"
#include "proplab/halfplane.hpp"

namespace proplab::cocycle {

using halfplane::Complex;

/// Truncated Poincare theta series modelling a holomorphic q-differential on
/// the quotient surface: in the disk model,
///   phi(w) = sum over group elements of word length <= depth of
///            (gamma w)^m (gamma'(w))^q,
/// pulled back to the half-plane by the Cayley transform. Elements are
/// enumerated once, deduplicated in PSL(2,R) (g and -g act identically).
class PoincareSeries {
 public:
  /// Requires q >= 2 and a certified group (ping-pong certificate, the fixed
  /// cocompact construction, or the trivial group).
  PoincareSeries(const fuchsian::GroupPresentation& grp, int q, int seed_degree, int depth);

  int q() const { return q_; }
  int seed_degree() const { return seed_degree_; }
  int depth() const { return depth_; }
  std::size_t element_count() const { return alpha_.size(); }

  /// Coefficient of omega = phi(z) dz^q on the half-plane.
  Complex phi(Complex z) const;

  /// Disk-model coefficient (the raw theta series before the Cayley pullback).
  Complex phi_disk_model(Complex w) const { return phi_disk(w); }

  /// Batch evaluation, parallel over points; results are identical to
  /// pointwise phi() calls regardless of thread count.
  std::vector<Complex> phi_many(std::span<const Complex> zs) const;

  /// |phi(g z) g'(z)^q - phi(z)|; decreasing in depth for a convergent series.
  double equivariance_residual(Complex z, const halfplane::Moebius& g) const;

  /// Cauchy-Riemann residual of phi by central finite differences.
  double holomorphicity_residual(Complex z, double h = 1e-5) const;

 private:
  Complex phi_disk(Complex w) const;

  int q_;
  int seed_degree_;
  int depth_;
  std::vector<Complex> alpha_, beta_;  // SU(1,1) rows (alpha, beta)
};

/// Equivariance residuals of truncations at the given depths (diagnostic for
/// the divergence warning: the profile should decrease).
std::vector<double> depth_residual_profile(const fuchsian::GroupPresentation& grp, int q,
                                           int seed_degree, std::span<const int> depths,
                                           Complex z);

}  // namespace proplab::cocycle
