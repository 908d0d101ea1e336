#pragma once

#include <complex>
#include <stdexcept>

namespace proplab::halfplane {

using Complex = std::complex<double>;

inline constexpr double kConstructionTol = 1e-12;

struct NonHyperbolicError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A point of the upper half-plane, Im(z) > 0.
struct Point {
  Complex z;
  explicit Point(Complex value) : z(value) {
    if (!(z.imag() > 0.0)) throw std::invalid_argument("Point: Im(z) must be positive");
  }
  explicit Point(double x, double y) : Point(Complex(x, y)) {}
};

/// Real 2x2 unit-determinant matrix acting on the half-plane by z -> (az+b)/(cz+d).
///
/// The determinant is checked on construction to 1e-12, relative to the size of
/// the products a*d and b*c (the check itself cannot be sharper in doubles).
struct Moebius {
  double a, b, c, d;

  Moebius(double a_, double b_, double c_, double d_) : a(a_), b(b_), c(c_), d(d_) {
    const double scale = std::max(1.0, std::abs(a * d) + std::abs(b * c));
    if (std::abs(det() - 1.0) > kConstructionTol * scale)
      throw std::invalid_argument("Moebius: determinant must be 1");
  }

  /// Skips the determinant check; for arithmetic on already-validated elements,
  /// where roundoff may exceed the construction tolerance.
  static Moebius raw(double a_, double b_, double c_, double d_) {
    Moebius m = identity();
    m.a = a_; m.b = b_; m.c = c_; m.d = d_;
    return m;
  }

  static Moebius identity() { return {1, 0, 0, 1}; }

  double det() const { return a * d - b * c; }
  double trace() const { return a + d; }
  Moebius inverse() const { return raw(d, -b, -c, a); }

  /// Rescales entries by 1/sqrt(det); keeps long products from drifting off SL(2,R).
  Moebius normalized() const;

  Complex operator()(Complex z) const { return (a * z + b) / (c * z + d); }
  /// Complex derivative 1/(cz+d)^2.
  Complex derivative(Complex z) const {
    const Complex den = c * z + d;
    return 1.0 / (den * den);
  }

  bool is_hyperbolic(double margin = 1e-10) const { return std::abs(trace()) > 2.0 + margin; }
};

Moebius operator*(const Moebius& g, const Moebius& h);

/// Unit tangent vector: base point plus direction as a unit complex number in
/// the global frame e(z) = Im(z) d/dx.
struct UnitTangent {
  Point base;
  Complex dir;
  UnitTangent(Point p, Complex direction) : base(p), dir(direction) {
    if (std::abs(std::abs(dir) - 1.0) > kConstructionTol)
      throw std::invalid_argument("UnitTangent: |dir| must be 1");
  }
};

Point moebius_act(const Moebius& g, Point z);

/// Unit complex u = g'(z) Im(z) / Im(gz); the action of g on the L_k coordinate
/// in the global frame is multiplication by u^k.
Complex frame_cocycle(const Moebius& g, Complex z);

/// Hyperbolic distance, arccosh(1 + |z-w|^2 / (2 Im z Im w)).
double distance(Complex z0, Complex z1);

/// Unit-speed geodesic c(t) = chart(i e^{t0+t}), t in [0, length].
/// chart is a Moebius map sending the vertical line to the geodesic's carrier.
struct GeodesicPath {
  Moebius chart = Moebius::identity();
  double t0 = 0.0;
  double length = 0.0;

  Complex pos(double t) const { return chart(Complex(0.0, std::exp(t0 + t))); }
  Complex vel(double t) const {
    const Complex w(0.0, std::exp(t0 + t));
    return chart.derivative(w) * w;  // d/dt chart(i e^{t0+t})
  }
  UnitTangent tangent(double t) const {
    const Complex z = pos(t);
    const Complex v = vel(t);
    return UnitTangent(Point(z), v / z.imag());
  }
  GeodesicPath reversed() const;
};

/// Geodesic from z0 to z1, unit speed, endpoints matched to 1e-10.
/// Throws std::invalid_argument when the points coincide.
GeodesicPath geodesic(Point z0, Point z1);

/// Geodesic ray of the given length starting at u.base with initial direction u.dir.
GeodesicPath geodesic_ray(const UnitTangent& u, double length);

/// Rotates the direction in the fiber by the given angle.
UnitTangent rotate(const UnitTangent& u, double angle);

/// The elliptic element of SL(2,R) fixing x0 and rotating T_{x0} by theta.
Moebius stabilizer_rotation(Point x0, double theta);

/// Fixed points on the boundary and translation length of a hyperbolic element.
/// Infinite fixed points are flagged rather than encoded as huge doubles.
struct AxisData {
  double attracting = 0.0;
  double repelling = 0.0;
  bool attracting_at_infinity = false;
  bool repelling_at_infinity = false;
  double translation_length = 0.0;
  /// Oriented unit-speed axis; axis().pos(0) is a reference point, the element
  /// translates it forward by translation_length.
  GeodesicPath axis;
};

/// Requires |tr g| > 2 + 1e-10; throws NonHyperbolicError otherwise.
AxisData axis_data(const Moebius& g);

}  // namespace proplab::halfplane
