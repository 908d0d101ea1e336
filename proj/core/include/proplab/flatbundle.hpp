#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <vector>

#include "proplab/halfplane.hpp"
#include "proplab/symrep.hpp"

namespace proplab::flatbundle {

using halfplane::Complex;

/// Fiber coordinates of E = R + L_1 + ... + L_n in the global unit frame
/// e(z) = Im(z) d/dx: one real component and n complex ones (slot k holds the
/// coordinate relative to e(z)^{tensor k}).
struct SectionCoords {
  double c0 = 0.0;
  std::vector<Complex> ck;

  SectionCoords() = default;
  SectionCoords(double real_part, std::vector<Complex> higher)
      : c0(real_part), ck(std::move(higher)) {}
  static SectionCoords zero(int n) { return SectionCoords(0.0, std::vector<Complex>(n)); }

  int n() const { return static_cast<int>(ck.size()); }
};

/// Real coordinates (c0, Re c1, Im c1, ..., Re cn, Im cn), dimension 2n+1.
Eigen::VectorXd pack(const SectionCoords& s);
SectionCoords unpack(const Eigen::VectorXd& v);

/// Weights a_0 = 1, a_{k+1} = 2^{-(2k+1)} prod_{j=0}^{k} (n+j+1)/(n-j);
/// so a_1 = (n+1)/(2n) and a_{k+1}/a_k = (n+k+1)/(4(n-k)) for k >= 1.
struct MetricWeights {
  int n;
  std::vector<double> a;
};
MetricWeights metric_weights(int n);

/// <Y,Z> = -Y0 Z0 + sum_k (-1)^{k+1} a_k Re(y_k conj(z_k)). Signature counts
/// over the 2n+1 real coordinates form the pair {n, n+1}.
double bundle_metric(const SectionCoords& y, const SectionCoords& z);

/// Gram matrix of bundle_metric in packed coordinates.
Eigen::MatrixXd bundle_metric_gram(int n);

/// One smooth parametrized piece of a path in the half-plane.
struct ParamCurve {
  std::function<Complex(double)> pos;
  std::function<Complex(double)> vel;
  double t0 = 0.0;
  double t1 = 0.0;
};
ParamCurve from_geodesic(const halfplane::GeodesicPath& path);

/// A chain of smooth pieces integrated with classical RK4 at fixed stepsize.
/// The constructor enforces stepsize <= 1e-2 * (hyperbolic length).
struct PathTransport {
  std::vector<ParamCurve> pieces;
  double stepsize = 1e-3;

  PathTransport(std::vector<ParamCurve> ps, double step);
  double hyperbolic_length() const { return length_; }
  Complex start() const;
  Complex end() const;

 private:
  double length_ = 0.0;
};

PathTransport transport_along(const halfplane::GeodesicPath& path, double step);

/// Zeroth-order part of the covariant derivative in frame coordinates:
/// nabla_X s = (plain derivative of the coordinates along X) + connection_term.
/// X is in Euclidean coordinates (dz applied to the tangent vector).
SectionCoords connection_term(int n, Complex z, Complex x_euclid, const SectionCoords& s);

/// Solves nabla_{c'} Y = 0 along the path; the result is linear in Y.
SectionCoords parallel_transport(int n, const PathTransport& path, const SectionCoords& y);

/// Transport matrix in packed coordinates, built column by column.
Eigen::MatrixXd transport_matrix(int n, const PathTransport& path);

/// Operator norm of Hol(loop) - I for a closed loop (endpoints equal to 1e-12);
/// zero for a flat connection up to integrator error.
double flatness_residual(int n, const PathTransport& loop);

/// Control experiment: holonomy of the Levi-Civita connection alone on L_1
/// around a loop, exp(-i * integral of Re z' / Im z). For a contractible loop
/// the rotation angle is the enclosed hyperbolic area.
Complex levi_civita_holonomy(const PathTransport& loop);

/// Fiberwise action of g at z: multiplication by frame_cocycle(g,z)^k on L_k,
/// identity on the R factor; returned in packed real coordinates.
Eigen::MatrixXd fiber_action(const halfplane::Moebius& g, Complex z, int n);

/// Holonomy of the flat SL(2,R)-equivariant connection: fiber action of g at
/// the basepoint composed with parallel transport from g*basepoint back along
/// the geodesic. A homomorphism in g up to integrator error, conjugate to
/// sym_power_rep.
symrep::RepMatrix holonomy_rep(const halfplane::Moebius& g, int n, halfplane::Point basepoint,
                               double step = 1e-3);

/// Complexified spectrum of holonomy_rep of the rotation-by-theta stabilizer
/// at x0; equals {1} union {e^{+-ik theta}} for the flat connection.
std::vector<Complex> circle_weights(double theta, int n, halfplane::Point x0);

/// Closed piecewise-geodesic quadrilateral: three sides of the given length
/// with left right-angle turns, closed up by a fourth geodesic.
PathTransport square_loop(halfplane::Point z, double side, double step);

/// Hyperbolic area of a piecewise-geodesic loop by the angle-defect formula
/// (sum of exterior angles minus 2 pi).
double polygon_area(const PathTransport& loop);

}  // namespace proplab::flatbundle
