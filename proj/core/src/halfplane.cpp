#include "proplab/halfplane.hpp"

#include <algorithm>
#include <cmath>

namespace proplab::halfplane {

Moebius Moebius::normalized() const {
  const double s = 1.0 / std::sqrt(det());
  return Moebius::raw(a * s, b * s, c * s, d * s);
}

Moebius operator*(const Moebius& g, const Moebius& h) {
  return Moebius::raw(g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
                      g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d);
}

Point moebius_act(const Moebius& g, Point z) { return Point(g(z.z)); }

Complex frame_cocycle(const Moebius& g, Complex z) {
  const Complex gz = g(z);
  return g.derivative(z) * z.imag() / gz.imag();
}

double distance(Complex z0, Complex z1) {
  const double s = std::norm(z0 - z1) / (2.0 * z0.imag() * z1.imag());
  return std::acosh(1.0 + s);
}

GeodesicPath GeodesicPath::reversed() const {
  // chart(i e^{t0+t}) traversed backwards: compose with z -> -1/z, which maps
  // i e^s to i e^{-s}.
  const Moebius flip(0.0, -1.0, 1.0, 0.0);
  GeodesicPath r;
  r.chart = chart * flip;
  r.t0 = -(t0 + length);
  r.length = length;
  return r;
}

namespace {

// Moebius map with chart(0) = p, chart(infinity) = q; p or q may be infinite.
Moebius chart_from_ideal_points(double p, bool p_inf, double q, bool q_inf) {
  if (p_inf && q_inf) throw std::invalid_argument("chart: both ideal points infinite");
  if (p_inf) return Moebius(q, -1.0, 1.0, 0.0);
  if (q_inf) return Moebius(1.0, p, 0.0, 1.0);
  const double s = std::sqrt(std::abs(q - p));
  if (q > p) return Moebius(q / s, p / s, 1.0 / s, 1.0 / s);
  return Moebius(q / s, -p / s, 1.0 / s, -1.0 / s);
}

// Parameter on the vertical line: chart^{-1}(z) should be purely imaginary.
double vertical_log(const Moebius& chart, Complex z) {
  const Moebius inv = chart.inverse();
  return std::log(inv(z).imag());
}

}  // namespace

GeodesicPath geodesic(Point z0, Point z1) {
  const Complex a = z0.z, b = z1.z;
  const double sep = std::abs(a - b);
  if (sep < 1e-14 * std::max(1.0, std::abs(a)))
    throw std::invalid_argument("geodesic: coincident endpoints");

  double p = 0.0, q = 0.0;
  bool p_inf = false, q_inf = false;
  if (std::abs(a.real() - b.real()) < 1e-14 * std::max({1.0, std::abs(a), std::abs(b)})) {
    // Vertical carrier through Re(a).
    if (b.imag() > a.imag()) {
      p = a.real();
      q_inf = true;
    } else {
      q = a.real();
      p_inf = true;
    }
  } else {
    const double m =
        (std::norm(a) - std::norm(b)) / (2.0 * (a.real() - b.real()));
    const double r = std::abs(a - m);
    p = m - r;
    q = m + r;
  }

  GeodesicPath path;
  path.chart = chart_from_ideal_points(p, p_inf, q, q_inf);
  double h0 = vertical_log(path.chart, a);
  double h1 = vertical_log(path.chart, b);
  if (h1 < h0) {
    // Swap the roles of the ideal endpoints to orient from z0 to z1.
    path.chart = chart_from_ideal_points(q, q_inf, p, p_inf);
    h0 = vertical_log(path.chart, a);
    h1 = vertical_log(path.chart, b);
  }
  path.t0 = h0;
  path.length = h1 - h0;
  return path;
}

GeodesicPath geodesic_ray(const UnitTangent& u, double length) {
  const double x = u.base.z.real();
  const double y = u.base.z.imag();
  const double sy = std::sqrt(y);
  const Moebius to_base(sy, x / sy, 0.0, 1.0 / sy);
  // Rotate at i so the vertical direction maps onto u.dir: the stabilizer
  // k_theta has k'(i) = e^{-2 i theta}; we need h'(i) i to point along dir.
  const double psi = std::arg(u.dir) - std::acos(-1.0) / 2.0;
  const double t = -psi / 2.0;
  const Moebius k(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  GeodesicPath path;
  path.chart = to_base * k;
  path.t0 = 0.0;
  path.length = length;
  return path;
}

UnitTangent rotate(const UnitTangent& u, double angle) {
  return UnitTangent(u.base, u.dir * std::polar(1.0, angle));
}

Moebius stabilizer_rotation(Point x0, double theta) {
  const double x = x0.z.real();
  const double y = x0.z.imag();
  const double sy = std::sqrt(y);
  const Moebius h(sy, x / sy, 0.0, 1.0 / sy);
  // k_t with k'(i) = e^{-2it}; t = -theta/2 rotates the tangent space by theta.
  const double t = -theta / 2.0;
  const Moebius k(std::cos(t), -std::sin(t), std::sin(t), std::cos(t));
  return (h * k * h.inverse()).normalized();
}

AxisData axis_data(const Moebius& g) {
  const double tr = g.trace();
  if (std::abs(tr) <= 2.0 + 1e-10)
    throw NonHyperbolicError("axis_data: element is not hyperbolic");

  AxisData data;
  data.translation_length = 2.0 * std::acosh(std::abs(tr) / 2.0);

  const double disc = std::sqrt(tr * tr - 4.0);
  if (std::abs(g.c) < 1e-14 * std::max(1.0, std::abs(g.a) + std::abs(g.d))) {
    // Fixed points are infinity and b/(d-a).
    const double finite = g.b / (g.d - g.a);
    const bool infinity_attracting = std::abs(g.a) > std::abs(g.d);
    if (infinity_attracting) {
      data.attracting_at_infinity = true;
      data.repelling = finite;
    } else {
      data.repelling_at_infinity = true;
      data.attracting = finite;
    }
  } else {
    const double r1 = (g.a - g.d + disc) / (2.0 * g.c);
    const double r2 = (g.a - g.d - disc) / (2.0 * g.c);
    // Attracting fixed point: |g'| < 1 there.
    const auto gprime_mag = [&](double x) {
      const double den = g.c * x + g.d;
      return 1.0 / (den * den);
    };
    if (std::abs(gprime_mag(r1)) < 1.0) {
      data.attracting = r1;
      data.repelling = r2;
    } else {
      data.attracting = r2;
      data.repelling = r1;
    }
  }

  data.axis.chart = chart_from_ideal_points(data.repelling, data.repelling_at_infinity,
                                            data.attracting, data.attracting_at_infinity);
  data.axis.t0 = 0.0;
  data.axis.length = data.translation_length;
  return data;
}

}  // namespace proplab::halfplane
