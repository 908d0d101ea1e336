#include "proplab/cocycle.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <thread>

namespace proplab::cocycle {

using flatbundle::PathTransport;
using flatbundle::SectionCoords;
using halfplane::Moebius;
using halfplane::Point;

std::vector<SectionCoords> BundleOneForm::evaluate_batch(std::span<const Complex> zs,
                                                         std::span<const Complex> xs) const {
  if (zs.size() != xs.size()) throw std::invalid_argument("evaluate_batch: size mismatch");
  if (eval_many) return eval_many(zs, xs);
  std::vector<SectionCoords> out;
  out.reserve(zs.size());
  for (std::size_t i = 0; i < zs.size(); ++i) out.push_back(eval(zs[i], xs[i]));
  return out;
}

BundleOneForm zero_form(int n) {
  BundleOneForm form;
  form.n = n;
  form.eval = [n](Complex, Complex) { return SectionCoords::zero(n); };
  return form;
}

BundleOneForm add(const BundleOneForm& a, const BundleOneForm& b) {
  if (a.n != b.n) throw std::invalid_argument("add: weight mismatch");
  const auto ea = a.eval, eb = b.eval;
  const int n = a.n;
  BundleOneForm out;
  out.n = n;
  out.eval = [ea, eb, n](Complex z, Complex x) {
    const SectionCoords sa = ea(z, x), sb = eb(z, x);
    SectionCoords sum = sa;
    sum.c0 += sb.c0;
    for (int k = 0; k < n; ++k) sum.ck[k] += sb.ck[k];
    return sum;
  };
  if (a.eval_many && b.eval_many) {
    const auto ma = a.eval_many, mb = b.eval_many;
    out.eval_many = [ma, mb, n](std::span<const Complex> zs, std::span<const Complex> xs) {
      auto va = ma(zs, xs);
      const auto vb = mb(zs, xs);
      for (std::size_t i = 0; i < va.size(); ++i) {
        va[i].c0 += vb[i].c0;
        for (int k = 0; k < n; ++k) va[i].ck[k] += vb[i].ck[k];
      }
      return va;
    };
  }
  return out;
}

BundleOneForm scale(const BundleOneForm& a, double s) {
  const auto ea = a.eval;
  const int n = a.n;
  BundleOneForm out;
  out.n = n;
  out.eval = [ea, s, n](Complex z, Complex x) {
    SectionCoords v = ea(z, x);
    v.c0 *= s;
    for (int k = 0; k < n; ++k) v.ck[k] *= s;
    return v;
  };
  if (a.eval_many) {
    const auto ma = a.eval_many;
    out.eval_many = [ma, s, n](std::span<const Complex> zs, std::span<const Complex> xs) {
      auto vs = ma(zs, xs);
      for (auto& v : vs) {
        v.c0 *= s;
        for (int k = 0; k < n; ++k) v.ck[k] *= s;
      }
      return vs;
    };
  }
  return out;
}

namespace {

flatbundle::SectionCoords phi_map_value(int n, Complex z, Complex x, Complex phi) {
  const double y = z.imag();
  if (!(y > 0.0)) throw std::domain_error("phi_map: point outside the half-plane");
  double yq = 1.0;
  for (int k = 0; k < n + 1; ++k) yq *= y;
  SectionCoords out = SectionCoords::zero(n);
  out.ck[n - 1] = std::conj(x / y) * std::conj(phi * yq);
  return out;
}

}  // namespace

BundleOneForm phi_map(const PoincareSeries& omega, int n) {
  if (omega.q() != n + 1) throw std::invalid_argument("phi_map: requires q = n + 1");
  // The form holds a pointer; the series must outlive it.
  const PoincareSeries* series = &omega;
  BundleOneForm out;
  out.n = n;
  out.eval = [series, n](Complex z, Complex x) {
    return phi_map_value(n, z, x, series->phi(z));
  };
  out.eval_many = [series, n](std::span<const Complex> zs, std::span<const Complex> xs) {
    const std::vector<Complex> phis = series->phi_many(zs);
    std::vector<SectionCoords> vals;
    vals.reserve(zs.size());
    for (std::size_t i = 0; i < zs.size(); ++i)
      vals.push_back(phi_map_value(n, zs[i], xs[i], phis[i]));
    return vals;
  };
  return out;
}

flatbundle::SectionCoords covariant_derivative(
    const std::function<flatbundle::SectionCoords(Complex)>& section, Complex z, Complex x,
    int n, double h) {
  const SectionCoords plus = section(z + h * x);
  const SectionCoords minus = section(z - h * x);
  SectionCoords deriv = SectionCoords::zero(n);
  deriv.c0 = (plus.c0 - minus.c0) / (2.0 * h);
  for (int k = 0; k < n; ++k) deriv.ck[k] = (plus.ck[k] - minus.ck[k]) / (2.0 * h);
  const SectionCoords gamma = flatbundle::connection_term(n, z, x, section(z));
  deriv.c0 += gamma.c0;
  for (int k = 0; k < n; ++k) deriv.ck[k] += gamma.ck[k];
  return deriv;
}

BundleOneForm exact_form(const std::function<flatbundle::SectionCoords(Complex)>& section, int n,
                         double h) {
  return {n, [section, n, h](Complex z, Complex x) {
            return covariant_derivative(section, z, x, n, h);
          }};
}

double closedness_residual(const BundleOneForm& alpha, Complex z0, double h) {
  // d^nabla alpha (X, Y) = nabla_X(alpha(Y)) - nabla_Y(alpha(X)) for the
  // commuting coordinate fields X = d/dx, Y = d/dy.
  const int n = alpha.n;
  const Complex ex(1.0, 0.0), ey(0.0, 1.0);
  const auto ax = [&](Complex z) { return alpha.eval(z, ex); };
  const auto ay = [&](Complex z) { return alpha.eval(z, ey); };
  const SectionCoords dxy = covariant_derivative(ay, z0, ex, n, h);
  const SectionCoords dyx = covariant_derivative(ax, z0, ey, n, h);
  return (flatbundle::pack(dxy) - flatbundle::pack(dyx)).norm();
}

namespace {

// RK4 for the coupled system V' = -connection_term(V) - lambda alpha(c').
// The source enters only at the fixed stage abscissae t_i and t_i + h/2, so
// alpha is evaluated for the whole piece in one batch up front.
Eigen::VectorXd affine_rk4(const BundleOneForm& alpha, const flatbundle::ParamCurve& piece,
                           double step, double lambda, Eigen::VectorXd v, int n) {
  const double span = piece.t1 - piece.t0;
  if (span <= 0.0) return v;
  const int steps = std::max(1, static_cast<int>(std::ceil(span / step)));
  const double h = span / steps;

  // Grid of 2*steps + 1 half-step nodes; node 2i is t_i, node 2i+1 is t_i+h/2.
  const int nodes = 2 * steps + 1;
  std::vector<Complex> zs(nodes), vels(nodes);
  for (int j = 0; j < nodes; ++j) {
    const double t = piece.t0 + 0.5 * h * j;
    zs[j] = piece.pos(t);
    vels[j] = piece.vel(t);
  }
  const std::vector<SectionCoords> sources = alpha.evaluate_batch(zs, vels);

  const int dim = static_cast<int>(v.size());
  Eigen::VectorXd k1(dim), k2(dim), k3(dim), k4(dim), tmp(dim);
  const auto rhs = [&](int node, const Eigen::VectorXd& in, Eigen::VectorXd& out) {
    const SectionCoords gamma =
        flatbundle::connection_term(n, zs[node], vels[node], flatbundle::unpack(in));
    out = -flatbundle::pack(gamma) - lambda * flatbundle::pack(sources[node]);
  };
  for (int i = 0; i < steps; ++i) {
    rhs(2 * i, v, k1);
    tmp = v + 0.5 * h * k1;
    rhs(2 * i + 1, tmp, k2);
    tmp = v + 0.5 * h * k2;
    rhs(2 * i + 1, tmp, k3);
    tmp = v + h * k3;
    rhs(2 * i + 2, tmp, k4);
    v += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return v;
}

}  // namespace

std::pair<double, SectionCoords> affine_transport(const BundleOneForm& alpha,
                                                  const PathTransport& path, double lambda,
                                                  const SectionCoords& v) {
  if (v.n() != alpha.n) throw std::invalid_argument("affine_transport: dimension mismatch");
  Eigen::VectorXd u = flatbundle::pack(v);
  for (const auto& piece : path.pieces) u = affine_rk4(alpha, piece, path.stepsize, lambda, u, alpha.n);
  return {lambda, flatbundle::unpack(u)};
}

margulis::AffineIsometry affine_holonomy(const fuchsian::Word& w,
                                         const fuchsian::GroupPresentation& grp,
                                         const BundleOneForm& alpha, int n, Point basepoint,
                                         double step, bool check_closed) {
  if (check_closed) {
    const double res = closedness_residual(alpha, basepoint.z, 1e-3);
    if (res > 1e-2)
      throw std::invalid_argument("affine_holonomy: alpha is not closed at the basepoint");
  }
  const Moebius g = evaluate(grp, w);
  const Complex x0 = basepoint.z;
  const Complex gx0 = g(x0);
  const Eigen::MatrixXd fiber = flatbundle::fiber_action(g, x0, n);
  if (std::abs(gx0 - x0) < 1e-13 * std::max(1.0, std::abs(x0)))
    return {fiber, Eigen::VectorXd::Zero(2 * n + 1)};

  const auto path = flatbundle::transport_along(halfplane::geodesic(Point(gx0), basepoint), step);
  const Eigen::MatrixXd back = flatbundle::transport_matrix(n, path);
  const auto [lam, defect] =
      affine_transport(alpha, path, 1.0, SectionCoords::zero(n));
  (void)lam;
  return {back * fiber, flatbundle::pack(defect)};
}

std::vector<double> neutral_section_coefficients(int n) {
  if (n < 1 || n % 2 == 0)
    throw std::invalid_argument("neutral_section_coefficients: n must be odd");
  const int p = (n - 1) / 2;
  std::vector<double> b(p + 1, 1.0);
  for (int k = 1; k <= p; ++k)
    b[k] = -4.0 * double(n - 2 * k + 1) / double(n + 2 * k + 1) * b[k - 1];
  return b;
}

std::vector<double> neutral_section_coefficients_variant(int n) {
  if (n < 1 || n % 2 == 0)
    throw std::invalid_argument("neutral_section_coefficients_variant: n must be odd");
  const int p = (n - 1) / 2;
  std::vector<double> b(p + 1, 1.0);
  double prod = 1.0, pow4 = 1.0;
  for (int k = 1; k <= p; ++k) {
    prod *= double(p - k) / double(p + k + 1);
    pow4 *= -4.0;
    b[k] = pow4 * prod;
  }
  return b;
}

NeutralSection::NeutralSection(const halfplane::GeodesicPath& axis, int n)
    : NeutralSection(axis, n, neutral_section_coefficients(n)) {}

NeutralSection::NeutralSection(const halfplane::GeodesicPath& axis, int n,
                               std::vector<double> coefficients)
    : axis_(axis), n_(n), b_(std::move(coefficients)) {
  if (n < 1 || n % 2 == 0) throw std::invalid_argument("NeutralSection: n must be odd");
  if (b_.size() != static_cast<size_t>((n - 1) / 2 + 1))
    throw std::invalid_argument("NeutralSection: coefficient count mismatch");
  const auto weights = flatbundle::metric_weights(n);
  norm2_ = 0.0;
  for (size_t k = 0; k < b_.size(); ++k) norm2_ += weights.a[2 * k + 1] * b_[k] * b_[k];
}

SectionCoords NeutralSection::value(double t) const {
  const Complex z = axis_.pos(t);
  const Complex xc = axis_.vel(t) / z.imag();
  SectionCoords out = SectionCoords::zero(n_);
  Complex xpow = xc;  // x_c^{2k+1}
  for (size_t k = 0; k < b_.size(); ++k) {
    out.ck[2 * k] = Complex(0.0, 1.0) * b_[k] * xpow;
    xpow *= xc * xc;
  }
  return out;
}

SectionCoords NeutralSection::normalized_value(double t) const {
  SectionCoords out = value(t);
  const double s = 1.0 / std::sqrt(norm2_);
  out.c0 *= s;
  for (auto& c : out.ck) c *= s;
  return out;
}

Eigen::VectorXd neutral_vector_geodesic(const fuchsian::Word& w,
                                        const fuchsian::GroupPresentation& grp, int n,
                                        Point basepoint, double step) {
  const Moebius g = evaluate(grp, w);
  const auto ad = halfplane::axis_data(g);
  const NeutralSection section(ad.axis, n);
  const SectionCoords v0 = section.normalized_value(0.0);
  const Complex z_axis = ad.axis.pos(0.0);
  if (std::abs(z_axis - basepoint.z) < 1e-13 * std::max(1.0, std::abs(z_axis)))
    return flatbundle::pack(v0);
  const auto path =
      flatbundle::transport_along(halfplane::geodesic(Point(z_axis), basepoint), step);
  Eigen::VectorXd v = flatbundle::pack(flatbundle::parallel_transport(n, path, v0));
  const Eigen::MatrixXd gram = flatbundle::bundle_metric_gram(n);
  return v / std::sqrt(v.dot(gram * v));
}

double margulis_direct(const fuchsian::Word& w, const fuchsian::GroupPresentation& grp,
                       const BundleOneForm& alpha, int n, Point basepoint, double step) {
  const auto phi = affine_holonomy(w, grp, alpha, n, basepoint, step, false);
  const Eigen::VectorXd v = neutral_vector_geodesic(w, grp, n, basepoint, step);
  return margulis::margulis_invariant(phi, flatbundle::bundle_metric_gram(n), v);
}

double margulis_direct(const fuchsian::Word& w, const fuchsian::GroupPresentation& grp,
                       const BundleOneForm& alpha, int n, double step) {
  const auto ad = halfplane::axis_data(evaluate(grp, w));
  return margulis_direct(w, grp, alpha, n, Point(ad.axis.pos(0.0)), step);
}

namespace {

double simpson(const std::vector<double>& values, double h) {
  const std::size_t n = values.size();
  if (n < 3 || n % 2 == 0) throw std::invalid_argument("simpson: need an odd node count >= 3");
  double sum = values.front() + values.back();
  for (std::size_t i = 1; i + 1 < n; ++i) sum += values[i] * (i % 2 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

}  // namespace

double margulis_via_integral(const fuchsian::Word& w, const fuchsian::GroupPresentation& grp,
                             const BundleOneForm& alpha, int n, int nodes_per_unit,
                             double t_offset) {
  const Moebius g = evaluate(grp, w);
  const auto ad = halfplane::axis_data(g);
  const double period = ad.translation_length;
  const NeutralSection section(ad.axis, n);

  int segments = std::max(8, static_cast<int>(std::ceil(nodes_per_unit * period)));
  if (segments % 2 == 1) ++segments;
  const double h = period / segments;

  std::vector<Complex> zs(segments + 1), vels(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    const double t = t_offset + i * h;
    zs[i] = ad.axis.pos(t);
    vels[i] = ad.axis.vel(t);
  }
  const std::vector<SectionCoords> pulled = alpha.evaluate_batch(zs, vels);
  std::vector<double> values(segments + 1);
  for (int i = 0; i <= segments; ++i)
    values[i] = flatbundle::bundle_metric(pulled[i], section.normalized_value(t_offset + i * h));
  return simpson(values, h);
}

double f_observable(const PoincareSeries& omega, const halfplane::UnitTangent& u) {
  const Complex z = u.base.z;
  const Complex t = u.dir * z.imag();  // Euclidean coordinate of the tangent
  Complex tq(1.0, 0.0);
  for (int k = 0; k < omega.q(); ++k) tq *= t;
  return (omega.phi(z) * tq).imag();
}

double closed_geodesic_f_integral(const PoincareSeries& omega, const fuchsian::Word& w,
                                  const fuchsian::GroupPresentation& grp, int nodes_per_unit) {
  const Moebius g = evaluate(grp, w);
  const auto ad = halfplane::axis_data(g);
  const double period = ad.translation_length;
  int segments = std::max(8, static_cast<int>(std::ceil(nodes_per_unit * period)));
  if (segments % 2 == 1) ++segments;
  const double h = period / segments;

  std::vector<Complex> zs(segments + 1);
  for (int i = 0; i <= segments; ++i) zs[i] = ad.axis.pos(i * h);
  const std::vector<Complex> phis = omega.phi_many(zs);

  std::vector<double> values(segments + 1);
  for (int i = 0; i <= segments; ++i) {
    const Complex vel = ad.axis.vel(i * h);  // unit speed: dz(u) = velocity
    Complex tq(1.0, 0.0);
    for (int k = 0; k < omega.q(); ++k) tq *= vel;
    values[i] = (phis[i] * tq).imag();
  }
  return simpson(values, h);
}

MeanStats f_zero_mean_monte_carlo(const PoincareSeries& omega, int samples, std::uint64_t seed,
                                  double ball_radius) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double two_pi = 2.0 * std::acos(-1.0);
  std::vector<Complex> zs(samples), dirs(samples);
  for (int i = 0; i < samples; ++i) {
    // Inverse-CDF sampling of the hyperbolic radius, then Cayley to the
    // half-plane; the fiber angle is uniform.
    const double rho = std::acosh(1.0 + uniform(rng) * (std::cosh(ball_radius) - 1.0));
    const Complex w = std::polar(std::tanh(rho / 2.0), two_pi * uniform(rng));
    const Complex i1(0.0, 1.0);
    zs[i] = i1 * (1.0 + w) / (1.0 - w);
    dirs[i] = std::polar(1.0, two_pi * uniform(rng));
  }
  const std::vector<Complex> phis = omega.phi_many(zs);
  double sum = 0.0, sumsq = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Complex t = dirs[i] * zs[i].imag();
    Complex tq(1.0, 0.0);
    for (int k = 0; k < omega.q(); ++k) tq *= t;
    const double f = (phis[i] * tq).imag();
    sum += f;
    sumsq += f * f;
  }
  MeanStats stats;
  stats.samples = samples;
  stats.mean = sum / samples;
  stats.standard_error = std::sqrt((sumsq / samples - stats.mean * stats.mean) / samples);
  return stats;
}

SurveyResult geodesic_sign_survey(const fuchsian::GroupPresentation& grp,
                                  const PoincareSeries& omega, int n, int maxlen,
                                  int sign_budget, int report_budget, int nodes_per_unit,
                                  double step, double sign_margin) {
  SurveyResult result;
  const BundleOneForm alpha = phi_map(omega, n);

  fuchsian::ConjugacyClassStream stream(grp.rank(), maxlen);
  while (result.classes_scanned < sign_budget) {
    const auto w = stream.next();
    if (!w) break;
    const Moebius g = evaluate(grp, *w);
    if (std::abs(g.trace()) <= 2.0 + 1e-9) continue;  // relator ghost or elliptic
    ++result.classes_scanned;

    // One batched phi pass serves both the f-integral and the mu integrand.
    const auto ad = halfplane::axis_data(g);
    const double period = ad.translation_length;
    int segments = std::max(8, static_cast<int>(std::ceil(nodes_per_unit * period)));
    if (segments % 2 == 1) ++segments;
    const double h = period / segments;
    std::vector<Complex> zs(segments + 1), vels(segments + 1);
    for (int i = 0; i <= segments; ++i) {
      zs[i] = ad.axis.pos(i * h);
      vels[i] = ad.axis.vel(i * h);
    }
    const std::vector<Complex> phis = omega.phi_many(zs);

    std::vector<double> f_values(segments + 1);
    for (int i = 0; i <= segments; ++i) {
      Complex tq(1.0, 0.0);
      for (int k = 0; k < omega.q(); ++k) tq *= vels[i];
      f_values[i] = (phis[i] * tq).imag();
    }
    const double fint = simpson(f_values, h);

    result.f_scan.emplace_back(*w, fint);
    if (fint > sign_margin && !result.positive_word) result.positive_word = *w;
    if (fint < -sign_margin && !result.negative_word) result.negative_word = *w;

    if (static_cast<int>(result.reports.size()) < report_budget) {
      const NeutralSection section(ad.axis, n);
      std::vector<double> mu_values(segments + 1);
      for (int i = 0; i <= segments; ++i) {
        const SectionCoords pulled = phi_map_value(n, zs[i], vels[i], phis[i]);
        mu_values[i] = flatbundle::bundle_metric(pulled, section.normalized_value(i * h));
      }
      GeodesicLoopReport report;
      report.word = *w;
      report.length = period;
      report.integral_f = fint;
      report.mu_integral = simpson(mu_values, h);
      report.mu_direct = margulis_direct(*w, grp, alpha, n, step);
      result.reports.push_back(std::move(report));
    }

    if (result.positive_word && result.negative_word &&
        static_cast<int>(result.reports.size()) >= report_budget)
      break;
  }
  result.both_signs = result.positive_word && result.negative_word;
  return result;
}

std::optional<margulis::ObstructionCertificate> survey_obstruction(
    const fuchsian::GroupPresentation& grp, const PoincareSeries& omega, int n,
    const SurveyResult& survey, Point basepoint, double step) {
  if (!survey.both_signs) return std::nullopt;
  const fuchsian::Word w1 = *survey.positive_word;
  const fuchsian::Word w2 = *survey.negative_word;
  const BundleOneForm alpha = phi_map(omega, n);
  const Eigen::MatrixXd gram = flatbundle::bundle_metric_gram(n);

  // General position compares eigen-decompositions in one fiber; the linear
  // parts need no alpha. mu is basepoint-independent and is evaluated on each
  // word's axis for accuracy.
  const auto lin1 = flatbundle::holonomy_rep(evaluate(grp, w1), n, basepoint, step);
  const auto lin2 = flatbundle::holonomy_rep(evaluate(grp, w2), n, basepoint, step);
  const auto lox1 = margulis::loxodromic_data(lin1.mat, gram);
  const auto lox2 = margulis::loxodromic_data(lin2.mat, gram);

  margulis::ObstructionCertificate cert;
  cert.word1 = w1;
  cert.word2 = w2;
  cert.mu1 = margulis_direct(w1, grp, alpha, n, step);
  cert.mu2 = margulis_direct(w2, grp, alpha, n, step);
  cert.general_position = margulis::general_position(lox1, lox2);
  cert.verdict = (cert.general_position && cert.mu1 * cert.mu2 <= 0.0)
                     ? margulis::Verdict::Obstructed
                     : margulis::Verdict::Inconclusive;
  return cert;
}

}  // namespace proplab::cocycle
