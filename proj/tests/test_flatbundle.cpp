#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "proplab/flatbundle.hpp"

using namespace proplab;
using namespace proplab::flatbundle;
using halfplane::Complex;
using halfplane::Moebius;
using halfplane::Point;

namespace {

std::mt19937_64 rng(90121);

Moebius random_element(double spread = 0.8) {
  std::uniform_real_distribution<double> U(-spread, spread);
  const double theta = U(rng) * 4.0, t = U(rng), s = U(rng);
  const Moebius k(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta));
  const Moebius a(std::exp(t), 0.0, 0.0, std::exp(-t));
  const Moebius n(1.0, s, 0.0, 1.0);
  return (k * a * n).normalized();
}

Moebius random_hyperbolic() {
  for (;;) {
    const Moebius g = random_element();
    if (std::abs(g.trace()) > 2.05) return g;
  }
}

SectionCoords random_section(int n) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  SectionCoords s = SectionCoords::zero(n);
  s.c0 = U(rng);
  for (int k = 0; k < n; ++k) s.ck[k] = Complex(U(rng), U(rng));
  return s;
}

}  // namespace

TEST_CASE("metric weights") {
  const auto w1 = metric_weights(1);
  CHECK(w1.a == std::vector<double>{1.0, 1.0});

  const auto w2 = metric_weights(2);
  CHECK(w2.a[0] == 1.0);
  CHECK(w2.a[1] == doctest::Approx(0.75).epsilon(1e-15));
  CHECK(w2.a[2] == doctest::Approx(0.75).epsilon(1e-15));

  const auto w3 = metric_weights(3);
  CHECK(w3.a[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(w3.a[2] == doctest::Approx(5.0 / 12.0).epsilon(1e-15));
  CHECK(w3.a[3] == doctest::Approx(5.0 / 8.0).epsilon(1e-15));

  SUBCASE("first step and recurrence") {
    for (int n = 1; n <= 6; ++n) {
      const auto w = metric_weights(n);
      CHECK(std::abs(w.a[1] - double(n + 1) / (2.0 * n)) < 1e-12);
      for (int k = 1; k + 1 <= n; ++k)
        CHECK(std::abs(w.a[k + 1] / w.a[k] - double(n + k + 1) / (4.0 * double(n - k))) < 1e-12);
      for (double a : w.a) CHECK(a > 0.0);
    }
  }
}

TEST_CASE("bundle metric") {
  SectionCoords y(1.0, {Complex(0.0, 0.0)});
  CHECK(bundle_metric(y, y) == doctest::Approx(-1.0));

  SectionCoords z(0.0, {Complex(0.0, 1.0)});
  CHECK(bundle_metric(z, z) == doctest::Approx(1.0));

  SectionCoords w(0.0, {Complex(0.0, 0.0), Complex(1.0, 0.0)});
  CHECK(bundle_metric(w, w) == doctest::Approx(-0.75));

  CHECK_THROWS_AS(bundle_metric(y, w), std::invalid_argument);

  SUBCASE("symmetry and signature") {
    for (int n = 1; n <= 5; ++n) {
      const SectionCoords a = random_section(n), b = random_section(n);
      CHECK(bundle_metric(a, b) == doctest::Approx(bundle_metric(b, a)).epsilon(1e-12));
      const Eigen::MatrixXd gram = bundle_metric_gram(n);
      int pos = 0, neg = 0;
      const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
      for (int i = 0; i < 2 * n + 1; ++i) (es.eigenvalues()(i) > 0 ? pos : neg) += 1;
      CHECK(std::min(pos, neg) == n);
      CHECK(std::max(pos, neg) == n + 1);
      CHECK(std::abs(bundle_metric(a, b) - pack(a).dot(gram * pack(b))) < 1e-12);
    }
  }
}

TEST_CASE("parallel transport") {
  SUBCASE("constant path is the identity") {
    ParamCurve constant;
    constant.pos = [](double) { return Complex(0.3, 1.2); };
    constant.vel = [](double) { return Complex(0.0, 0.0); };
    constant.t0 = 0.0;
    constant.t1 = 1.0;
    const PathTransport path({constant}, 1e-3);
    for (int n : {1, 3}) {
      const SectionCoords y = random_section(n);
      const SectionCoords out = parallel_transport(n, path, y);
      CHECK((pack(out) - pack(y)).norm() < 1e-14);
    }
  }

  SUBCASE("preserves the bundle metric") {
    for (int trial = 0; trial < 10; ++trial) {
      const auto g = halfplane::geodesic(Point(0.3, 0.9), Point(-0.8, 2.1));
      const auto path = transport_along(g, 1e-3);
      for (int n : {1, 2, 3, 5}) {
        const SectionCoords y = random_section(n), z = random_section(n);
        const SectionCoords py = parallel_transport(n, path, y);
        const SectionCoords pz = parallel_transport(n, path, z);
        CHECK(std::abs(bundle_metric(py, pz) - bundle_metric(y, z)) <
              1e-8 * path.hyperbolic_length());
      }
    }
  }

  SUBCASE("reverse path inverts") {
    const auto g = halfplane::geodesic(Point(0.4, 1.1), Point(1.2, 0.7));
    const auto fwd = transport_along(g, 1e-3);
    const auto bwd = transport_along(g.reversed(), 1e-3);
    for (int n : {1, 2, 4}) {
      const SectionCoords y = random_section(n);
      const SectionCoords round = parallel_transport(n, bwd, parallel_transport(n, fwd, y));
      CHECK((pack(round) - pack(y)).norm() < 1e-8);
    }
  }

  SUBCASE("paths outside the half-plane are rejected") {
    ParamCurve dive;
    dive.pos = [](double t) { return Complex(0.0, 1.0 - t); };
    dive.vel = [](double) { return Complex(0.0, -1.0); };
    dive.t0 = 0.0;
    dive.t1 = 2.0;  // crosses the boundary
    CHECK_THROWS_AS(PathTransport({dive}, 1e-3), std::domain_error);
  }
}

TEST_CASE("flatness") {
  SUBCASE("degenerate back-and-forth loop") {
    const auto g = halfplane::geodesic(Point(0.0, 1.0), Point(0.5, 1.3));
    const PathTransport loop({from_geodesic(g), from_geodesic(g.reversed())}, 1e-3);
    CHECK(flatness_residual(1, loop) < 1e-10);
  }

  SUBCASE("square loops at several basepoints") {
    for (const Complex base : {Complex(0.0, 1.0), Complex(-0.7, 2.0), Complex(3.0, 0.8)}) {
      const auto loop = square_loop(Point(base), 0.5, 1e-3);
      for (int n : {1, 2, 3, 5}) CHECK(flatness_residual(n, loop) < 1e-6);
    }
  }

  SUBCASE("integrator order: residual drops by >= 8 per halving") {
    // Coarse steps keep truncation error above the roundoff floor (the
    // transport clamps steps to 1e-2 of the loop length).
    const auto coarse = square_loop(Point(0.0, 1.0), 0.5, 1e-2);
    const auto fine = square_loop(Point(0.0, 1.0), 0.5, 5e-3);
    for (int n : {2, 5}) {
      const double r_coarse = flatness_residual(n, coarse);
      const double r_fine = flatness_residual(n, fine);
      CHECK(r_coarse / r_fine >= 8.0);
    }
  }

  SUBCASE("open paths are rejected") {
    const auto g = halfplane::geodesic(Point(0.0, 1.0), Point(0.5, 1.3));
    const PathTransport open_path({from_geodesic(g)}, 1e-3);
    CHECK_THROWS_AS(flatness_residual(1, open_path), std::invalid_argument);
  }

  SUBCASE("control: Levi-Civita holonomy alone sees the curvature") {
    const auto loop = square_loop(Point(0.0, 1.0), 0.5, 1e-3);
    const double area = polygon_area(loop);
    CHECK(area > 0.1);
    const double residual = std::abs(levi_civita_holonomy(loop) - Complex(1.0, 0.0));
    CHECK(std::abs(residual - area) / area < 0.1);
  }
}

TEST_CASE("holonomy representation") {
  const Point base(0.0, 1.0);

  SUBCASE("identity") {
    const auto rep = holonomy_rep(Moebius::identity(), 2, base);
    CHECK((rep.mat - Eigen::MatrixXd::Identity(5, 5)).cwiseAbs().maxCoeff() < 1e-12);
  }

  SUBCASE("trace matches the character oracle") {
    for (int trial = 0; trial < 50; ++trial) {
      const Moebius g = random_hyperbolic();
      for (int n = 1; n <= 4; ++n) {
        const auto rep = holonomy_rep(g, n, base);
        CHECK(std::abs(rep.mat.trace() - symrep::character(g, n)) < 1e-6);
      }
    }
  }

  SUBCASE("preserves the bundle metric at the basepoint") {
    for (int trial = 0; trial < 10; ++trial) {
      const Moebius g = random_element();
      for (int n : {1, 3}) {
        const auto rep = holonomy_rep(g, n, base);
        const Eigen::MatrixXd gram = bundle_metric_gram(n);
        CHECK((rep.mat.transpose() * gram * rep.mat - gram).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }

  SUBCASE("homomorphism up to integrator error") {
    for (int trial = 0; trial < 10; ++trial) {
      const Moebius g = random_element(0.5), h = random_element(0.5);
      const int n = 2;
      const Eigen::MatrixXd lhs = holonomy_rep((g * h).normalized(), n, base).mat;
      const Eigen::MatrixXd rhs = holonomy_rep(g, n, base).mat * holonomy_rep(h, n, base).mat;
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("circle weights") {
  const Point x0(0.5, 2.0);

  SUBCASE("theta = 0") {
    for (const Complex w : circle_weights(0.0, 2, x0)) CHECK(std::abs(w - 1.0) < 1e-10);
  }

  SUBCASE("theta = pi at n = 1") {
    const auto ws = circle_weights(std::acos(-1.0), 1, x0);
    int minus = 0, plus = 0;
    for (const Complex w : ws) {
      if (std::abs(w - 1.0) < 1e-6) ++plus;
      if (std::abs(w + 1.0) < 1e-6) ++minus;
    }
    CHECK(plus == 1);
    CHECK(minus == 2);
  }

  SUBCASE("generic theta matches e^{ik theta}") {
    const double theta = 0.3;
    for (int n : {1, 3}) {
      const auto ws = circle_weights(theta, n, x0);
      std::vector<Complex> expected{Complex(1.0, 0.0)};
      for (int k = 1; k <= n; ++k) {
        expected.push_back(std::polar(1.0, k * theta));
        expected.push_back(std::polar(1.0, -k * theta));
      }
      for (const Complex e : expected) {
        double best = 1e18;
        for (const Complex w : ws) best = std::min(best, std::abs(w - e));
        CHECK(best < 1e-6);
      }
    }
  }

  SUBCASE("weights are distinct for 0 < theta < pi/n") {
    const int n = 3;
    const auto ws = circle_weights(0.9, n, x0);  // 0.9 < pi/3
    for (size_t i = 0; i < ws.size(); ++i)
      for (size_t j = i + 1; j < ws.size(); ++j) CHECK(std::abs(ws[i] - ws[j]) > 1e-6);
  }
}
