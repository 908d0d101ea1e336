#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "proplab/halfplane.hpp"

using namespace proplab::halfplane;

namespace {

std::mt19937_64 rng(20240811);

Moebius random_element(double spread = 0.8) {
  std::uniform_real_distribution<double> U(-spread, spread);
  const double theta = U(rng) * 4.0;
  const double t = U(rng);
  const double s = U(rng);
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

Complex random_point() {
  std::uniform_real_distribution<double> U(-2.0, 2.0);
  std::uniform_real_distribution<double> V(0.2, 3.0);
  return {U(rng), V(rng)};
}

}  // namespace

TEST_CASE("moebius action basics") {
  const Point i(0.0, 1.0);
  CHECK(moebius_act(Moebius::identity(), i).z == Complex(0.0, 1.0));

  const Moebius dil(2.0, 0.0, 0.0, 0.5);
  CHECK(std::abs(moebius_act(dil, i).z - Complex(0.0, 4.0)) < 1e-15);

  const Moebius par(1.0, 1.0, 0.0, 1.0);
  CHECK(std::abs(moebius_act(par, i).z - Complex(1.0, 1.0)) < 1e-15);
}

TEST_CASE("moebius construction checks the determinant") {
  CHECK_THROWS_AS(Moebius(1.0, 1.0, 1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(Point(0.0, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(UnitTangent(Point(0.0, 1.0), Complex(2.0, 0.0)), std::invalid_argument);
}

TEST_CASE("moebius action preserves hyperbolic distance") {
  for (int trial = 0; trial < 100; ++trial) {
    const Moebius g = random_element();
    const Complex z0 = random_point(), z1 = random_point();
    CHECK(std::abs(distance(g(z0), g(z1)) - distance(z0, z1)) < 1e-10);
  }
}

TEST_CASE("frame cocycle") {
  CHECK(std::abs(frame_cocycle(Moebius::identity(), Complex(0.3, 2.0)) - 1.0) < 1e-15);

  // g'(i) = 4 and Im(i)/Im(4i) = 1/4 for the dilation.
  const Moebius dil(2.0, 0.0, 0.0, 0.5);
  CHECK(std::abs(frame_cocycle(dil, Complex(0.0, 1.0)) - 1.0) < 1e-14);

  SUBCASE("modulus one and cocycle law") {
    for (int trial = 0; trial < 100; ++trial) {
      const Moebius g = random_element(), h = random_element();
      const Complex z = random_point();
      CHECK(std::abs(std::abs(frame_cocycle(g, z)) - 1.0) < 1e-12);
      const Complex lhs = frame_cocycle((g * h).normalized(), z);
      const Complex rhs = frame_cocycle(g, h(z)) * frame_cocycle(h, z);
      CHECK(std::abs(lhs - rhs) < 1e-12);
    }
  }
}

TEST_CASE("geodesic between points") {
  SUBCASE("vertical segment i to 4i") {
    const auto path = geodesic(Point(0.0, 1.0), Point(0.0, 4.0));
    CHECK(path.length == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(std::abs(path.pos(0.0) - Complex(0.0, 1.0)) < 1e-10);
    CHECK(std::abs(path.pos(path.length) - Complex(0.0, 4.0)) < 1e-10);
  }

  SUBCASE("small distances are euclidean to first order") {
    const double eps = 1e-4;
    const double d = distance(Complex(0.0, 1.0), Complex(eps, 1.0));
    CHECK(std::abs(d - eps) / eps < 1e-6);
  }

  SUBCASE("unit speed") {
    const auto path = geodesic(Point(-0.7, 0.4), Point(1.3, 2.1));
    for (double t = 0.0; t <= path.length; t += path.length / 7.0) {
      const double speed = std::abs(path.vel(t)) / path.pos(t).imag();
      CHECK(std::abs(speed - 1.0) < 1e-8);
    }
    CHECK(std::abs(path.pos(0.0) - Complex(-0.7, 0.4)) < 1e-10);
    CHECK(std::abs(path.pos(path.length) - Complex(1.3, 2.1)) < 1e-10);
  }

  SUBCASE("endpoint distance matches the closed form") {
    for (int trial = 0; trial < 50; ++trial) {
      const Complex a = random_point(), b = random_point();
      if (std::abs(a - b) < 1e-6) continue;
      const auto path = geodesic(Point(a), Point(b));
      CHECK(std::abs(path.length - distance(a, b)) < 1e-10);
    }
  }

  SUBCASE("coincident points throw") {
    CHECK_THROWS_AS(geodesic(Point(0.5, 1.0), Point(0.5, 1.0)), std::invalid_argument);
  }

  SUBCASE("reversal") {
    const auto path = geodesic(Point(-0.7, 0.4), Point(1.3, 2.1));
    const auto rev = path.reversed();
    CHECK(std::abs(rev.pos(0.0) - path.pos(path.length)) < 1e-10);
    CHECK(std::abs(rev.pos(rev.length) - path.pos(0.0)) < 1e-10);
  }
}

TEST_CASE("geodesic ray and rotation") {
  const UnitTangent up(Point(0.0, 1.0), Complex(0.0, 1.0));
  const auto ray = geodesic_ray(up, std::log(4.0));
  CHECK(std::abs(ray.pos(ray.length) - Complex(0.0, 4.0)) < 1e-10);

  const UnitTangent left = rotate(up, std::acos(-1.0) / 2.0);
  CHECK(std::abs(left.dir - Complex(-1.0, 0.0)) < 1e-12);

  // Ray in a generic direction: the endpoint is at the right distance and the
  // initial velocity points along dir.
  const UnitTangent diag(Point(0.5, 2.0), std::polar(1.0, 0.7));
  const auto ray2 = geodesic_ray(diag, 0.8);
  CHECK(std::abs(distance(ray2.pos(0.0), ray2.pos(0.8)) - 0.8) < 1e-10);
  CHECK(std::abs(ray2.vel(0.0) / ray2.pos(0.0).imag() - diag.dir) < 1e-10);
}

TEST_CASE("stabilizer rotation") {
  const Point x0(0.4, 1.7);
  const double theta = 0.6;
  const Moebius k = stabilizer_rotation(x0, theta);
  CHECK(std::abs(k(x0.z) - x0.z) < 1e-12);
  CHECK(std::abs(frame_cocycle(k, x0.z) - std::polar(1.0, theta)) < 1e-12);
}

TEST_CASE("axis data") {
  SUBCASE("dilation") {
    const auto ad = axis_data(Moebius(2.0, 0.0, 0.0, 0.5));
    CHECK(ad.translation_length == doctest::Approx(std::log(4.0)).epsilon(1e-12));
    CHECK(ad.attracting_at_infinity);
    CHECK(ad.repelling == doctest::Approx(0.0));
    // 2 arccosh(5/4) = ln 4
    CHECK(std::abs(2.0 * std::acosh(1.25) - std::log(4.0)) < 1e-14);
  }

  SUBCASE("trace 3 length against the displacement oracle") {
    const Moebius g(2.0, 1.0, 1.0, 1.0);  // trace 3
    const auto ad = axis_data(g);
    CHECK(ad.translation_length == doctest::Approx(2.0 * std::acosh(1.5)).epsilon(1e-12));
    CHECK(ad.translation_length == doctest::Approx(1.92484730023841).epsilon(1e-10));
    // Displacement equals the translation length on the axis and grows off it.
    const Complex on_axis = ad.axis.pos(0.4);
    CHECK(std::abs(distance(on_axis, g(on_axis)) - ad.translation_length) < 1e-10);
    double off_min = 1e9;
    for (int k = 0; k < 40; ++k) {
      const Complex z = random_point();
      off_min = std::min(off_min, distance(z, g(z)));
      CHECK(distance(z, g(z)) >= ad.translation_length - 1e-10);
    }
  }

  SUBCASE("conjugation invariance") {
    for (int trial = 0; trial < 40; ++trial) {
      const Moebius g = random_hyperbolic();
      const Moebius h = random_element();
      const Moebius conj = (h * g * h.inverse()).normalized();
      CHECK(std::abs(axis_data(conj).translation_length - axis_data(g).translation_length) <
            1e-10);
    }
  }

  SUBCASE("axis is translated forward") {
    for (int trial = 0; trial < 20; ++trial) {
      const Moebius g = random_hyperbolic();
      const auto ad = axis_data(g);
      const Complex z = ad.axis.pos(0.0);
      CHECK(std::abs(g(z) - ad.axis.pos(ad.translation_length)) < 1e-8);
    }
  }

  SUBCASE("non-hyperbolic elements are rejected") {
    CHECK_THROWS_AS(axis_data(Moebius(1.0, 1.0, 0.0, 1.0)), NonHyperbolicError);
    CHECK_THROWS_AS(axis_data(Moebius(0.0, -1.0, 1.0, 0.0)), NonHyperbolicError);
    CHECK_THROWS_AS(axis_data(Moebius::identity()), NonHyperbolicError);
  }
}
