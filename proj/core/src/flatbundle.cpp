#include "proplab/flatbundle.hpp"

#include <cmath>
#include <stdexcept>

namespace proplab::flatbundle {

using halfplane::Moebius;
using halfplane::Point;

Eigen::VectorXd pack(const SectionCoords& s) {
  const int n = s.n();
  Eigen::VectorXd v(2 * n + 1);
  v(0) = s.c0;
  for (int k = 1; k <= n; ++k) {
    v(2 * k - 1) = s.ck[k - 1].real();
    v(2 * k) = s.ck[k - 1].imag();
  }
  return v;
}

SectionCoords unpack(const Eigen::VectorXd& v) {
  const int dim = static_cast<int>(v.size());
  if (dim % 2 == 0) throw std::invalid_argument("unpack: dimension must be odd");
  const int n = (dim - 1) / 2;
  SectionCoords s = SectionCoords::zero(n);
  s.c0 = v(0);
  for (int k = 1; k <= n; ++k) s.ck[k - 1] = Complex(v(2 * k - 1), v(2 * k));
  return s;
}

MetricWeights metric_weights(int n) {
  if (n < 1) throw std::invalid_argument("metric_weights: n >= 1");
  MetricWeights w{n, std::vector<double>(n + 1)};
  w.a[0] = 1.0;
  double prod = 1.0, pow2 = 1.0;
  for (int k = 0; k + 1 <= n; ++k) {
    prod *= double(n + k + 1) / double(n - k);
    pow2 *= (k == 0) ? 2.0 : 4.0;  // 2^{2k+1}
    w.a[k + 1] = prod / pow2;
  }
  return w;
}

double bundle_metric(const SectionCoords& y, const SectionCoords& z) {
  if (y.n() != z.n()) throw std::invalid_argument("bundle_metric: dimension mismatch");
  const auto w = metric_weights(y.n());
  double out = -y.c0 * z.c0;
  for (int k = 1; k <= y.n(); ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    out += sign * w.a[k] * (y.ck[k - 1] * std::conj(z.ck[k - 1])).real();
  }
  return out;
}

Eigen::MatrixXd bundle_metric_gram(int n) {
  const auto w = metric_weights(n);
  Eigen::VectorXd diag(2 * n + 1);
  diag(0) = -1.0;
  for (int k = 1; k <= n; ++k) {
    const double sign = (k % 2 == 1) ? 1.0 : -1.0;
    diag(2 * k - 1) = sign * w.a[k];
    diag(2 * k) = sign * w.a[k];
  }
  return diag.asDiagonal();
}

ParamCurve from_geodesic(const halfplane::GeodesicPath& path) {
  ParamCurve c;
  c.pos = [path](double t) { return path.pos(t); };
  c.vel = [path](double t) { return path.vel(t); };
  c.t0 = 0.0;
  c.t1 = path.length;
  return c;
}

namespace {

double piece_hyperbolic_length(const ParamCurve& p) {
  // Composite Simpson on |c'|/Im(c); coarse nodes suffice for a length check.
  const int segments = 64;
  const double h = (p.t1 - p.t0) / (2 * segments);
  auto speed = [&](double t) {
    const Complex z = p.pos(t);
    if (!(z.imag() > 0.0)) throw std::domain_error("path leaves the half-plane");
    return std::abs(p.vel(t)) / z.imag();
  };
  double sum = speed(p.t0) + speed(p.t1);
  for (int i = 1; i < 2 * segments; ++i) sum += speed(p.t0 + i * h) * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

PathTransport::PathTransport(std::vector<ParamCurve> ps, double step)
    : pieces(std::move(ps)), stepsize(step) {
  if (pieces.empty()) throw std::invalid_argument("PathTransport: empty path");
  if (!(step > 0.0)) throw std::invalid_argument("PathTransport: stepsize must be positive");
  length_ = 0.0;
  for (const auto& p : pieces) length_ += piece_hyperbolic_length(p);
  if (length_ > 0.0 && stepsize > 1e-2 * length_) stepsize = 1e-2 * length_;
}

Complex PathTransport::start() const { return pieces.front().pos(pieces.front().t0); }
Complex PathTransport::end() const { return pieces.back().pos(pieces.back().t1); }

PathTransport transport_along(const halfplane::GeodesicPath& path, double step) {
  return PathTransport({from_geodesic(path)}, step);
}

SectionCoords connection_term(int n, Complex z, Complex x_euclid, const SectionCoords& s) {
  if (!(z.imag() > 0.0)) throw std::domain_error("path leaves the half-plane");
  // x: frame coordinate of the tangent; r: Levi-Civita rotation rate.
  const Complex x = x_euclid / z.imag();
  const double r = x_euclid.real() / z.imag();

  SectionCoords out = SectionCoords::zero(n);
  const Complex u1 = (n >= 1) ? s.ck[0] : Complex(0.0);
  out.c0 = 0.5 * (n + 1) * (x * std::conj(u1)).real();
  for (int k = 1; k <= n; ++k) {
    const Complex below = (k == 1) ? Complex(s.c0) : s.ck[k - 2];
    const Complex above = (k == n) ? Complex(0.0) : s.ck[k];
    out.ck[k - 1] = double(n - k + 1) * x * below + Complex(0.0, double(k) * r) * s.ck[k - 1] +
                    0.25 * double(n + k + 1) * std::conj(x) * above;
  }
  return out;
}

namespace {

// Parallel sections satisfy u' = -connection_term(u) along the curve.
struct FrameOde {
  int n;
  const ParamCurve* curve;

  void rhs(double t, const Eigen::VectorXd& in, Eigen::VectorXd& out) const {
    const Complex z = curve->pos(t);
    const Complex v = curve->vel(t);
    out = -pack(connection_term(n, z, v, unpack(in)));
  }
};

void rk4_piece(const FrameOde& ode, const ParamCurve& piece, double step, Eigen::VectorXd& u) {
  const double span = piece.t1 - piece.t0;
  if (span <= 0.0) return;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / step)));
  const double h = span / steps;
  const int dim = static_cast<int>(u.size());
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  double t = piece.t0;
  for (int i = 0; i < steps; ++i) {
    ode.rhs(t, u, k1);
    tmp = u + 0.5 * h * k1;
    ode.rhs(t + 0.5 * h, tmp, k2);
    tmp = u + 0.5 * h * k2;
    ode.rhs(t + 0.5 * h, tmp, k3);
    tmp = u + h * k3;
    ode.rhs(t + h, tmp, k4);
    u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    t = piece.t0 + (i + 1) * h;
  }
}

}  // namespace

SectionCoords parallel_transport(int n, const PathTransport& path, const SectionCoords& y) {
  if (y.n() != n) throw std::invalid_argument("parallel_transport: dimension mismatch");
  Eigen::VectorXd u = pack(y);
  for (const auto& piece : path.pieces) {
    FrameOde ode{n, &piece};
    rk4_piece(ode, piece, path.stepsize, u);
  }
  return unpack(u);
}

Eigen::MatrixXd transport_matrix(int n, const PathTransport& path) {
  const int dim = 2 * n + 1;
  Eigen::MatrixXd out(dim, dim);
  for (int j = 0; j < dim; ++j) {
    Eigen::VectorXd u = Eigen::VectorXd::Zero(dim);
    u(j) = 1.0;
    for (const auto& piece : path.pieces) {
      FrameOde ode{n, &piece};
      rk4_piece(ode, piece, path.stepsize, u);
    }
    out.col(j) = u;
  }
  return out;
}

double flatness_residual(int n, const PathTransport& loop) {
  if (std::abs(loop.start() - loop.end()) > 1e-12 * std::max(1.0, std::abs(loop.start())))
    throw std::invalid_argument("flatness_residual: loop is not closed");
  const int dim = 2 * n + 1;
  const Eigen::MatrixXd defect = transport_matrix(n, loop) - Eigen::MatrixXd::Identity(dim, dim);
  return defect.jacobiSvd().singularValues()(0);
}

Complex levi_civita_holonomy(const PathTransport& loop) {
  if (std::abs(loop.start() - loop.end()) > 1e-12 * std::max(1.0, std::abs(loop.start())))
    throw std::invalid_argument("levi_civita_holonomy: loop is not closed");
  // The L_1 Levi-Civita equation u' = -i r u integrates to a rotation by the
  // integral of r = Re z' / Im z.
  double angle = 0.0;
  for (const auto& piece : loop.pieces) {
    const double span = piece.t1 - piece.t0;
    int nodes = std::max(2, static_cast<int>(std::ceil(span / loop.stepsize)));
    if (nodes % 2 == 1) ++nodes;
    const double h = span / nodes;
    auto r = [&](double t) { return piece.vel(t).real() / piece.pos(t).imag(); };
    double sum = r(piece.t0) + r(piece.t1);
    for (int i = 1; i < nodes; ++i) sum += r(piece.t0 + i * h) * (i % 2 ? 4.0 : 2.0);
    angle += sum * h / 3.0;
  }
  return std::polar(1.0, -angle);
}

Eigen::MatrixXd fiber_action(const Moebius& g, Complex z, int n) {
  const Complex u = halfplane::frame_cocycle(g, z);
  const int dim = 2 * n + 1;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  out(0, 0) = 1.0;
  Complex uk(1.0, 0.0);
  for (int k = 1; k <= n; ++k) {
    uk *= u;
    out(2 * k - 1, 2 * k - 1) = uk.real();
    out(2 * k - 1, 2 * k) = -uk.imag();
    out(2 * k, 2 * k - 1) = uk.imag();
    out(2 * k, 2 * k) = uk.real();
  }
  return out;
}

symrep::RepMatrix holonomy_rep(const Moebius& g, int n, Point basepoint, double step) {
  const Complex x0 = basepoint.z;
  const Complex gx0 = g(x0);
  const Eigen::MatrixXd fiber = fiber_action(g, x0, n);
  if (std::abs(gx0 - x0) < 1e-13 * std::max(1.0, std::abs(x0)))
    return symrep::RepMatrix{n, fiber};
  const auto path = halfplane::geodesic(Point(gx0), basepoint);
  const Eigen::MatrixXd back = transport_matrix(n, transport_along(path, step));
  return symrep::RepMatrix{n, back * fiber};
}

std::vector<Complex> circle_weights(double theta, int n, Point x0) {
  const Moebius g = halfplane::stabilizer_rotation(x0, theta);
  const symrep::RepMatrix rep = holonomy_rep(g, n, x0);
  Eigen::EigenSolver<Eigen::MatrixXd> es(rep.mat);
  std::vector<Complex> out(2 * n + 1);
  for (int i = 0; i < 2 * n + 1; ++i) out[i] = es.eigenvalues()(i);
  std::sort(out.begin(), out.end(), [](Complex a, Complex b) {
    const double aa = std::arg(a), ab = std::arg(b);
    if (aa != ab) return aa < ab;
    return std::abs(a) < std::abs(b);
  });
  return out;
}

PathTransport square_loop(Point z, double side, double step) {
  using halfplane::UnitTangent;
  std::vector<halfplane::GeodesicPath> sides;
  UnitTangent u(z, Complex(1.0, 0.0));
  for (int i = 0; i < 3; ++i) {
    const auto ray = halfplane::geodesic_ray(u, side);
    sides.push_back(ray);
    u = halfplane::rotate(ray.tangent(side), std::acos(-1.0) / 2.0);
  }
  sides.push_back(halfplane::geodesic(Point(sides.back().pos(side)), z));

  std::vector<ParamCurve> pieces;
  for (const auto& s : sides) pieces.push_back(from_geodesic(s));
  return PathTransport(std::move(pieces), step);
}

double polygon_area(const PathTransport& loop) {
  const int m = static_cast<int>(loop.pieces.size());
  double turning = 0.0;
  for (int i = 0; i < m; ++i) {
    const auto& in = loop.pieces[i];
    const auto& out = loop.pieces[(i + 1) % m];
    const Complex vin = in.vel(in.t1);
    const Complex vout = out.vel(out.t0);
    turning += std::arg(vout / vin);
  }
  return std::abs(turning) - 2.0 * std::acos(-1.0);
}

}  // namespace proplab::flatbundle
