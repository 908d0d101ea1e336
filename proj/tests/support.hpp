#pragma once

// Shared helpers for the test suites.

#include <cmath>
#include <random>

#include "proplab/fuchsian.hpp"

namespace proplab::testsupport {

inline halfplane::Moebius random_element(std::mt19937_64& rng, double spread = 0.8) {
  std::uniform_real_distribution<double> U(-spread, spread);
  const double theta = U(rng) * 4.0, t = U(rng), s = U(rng);
  const halfplane::Moebius k(std::cos(theta), -std::sin(theta), std::sin(theta), std::cos(theta));
  const halfplane::Moebius a(std::exp(t), 0.0, 0.0, std::exp(-t));
  const halfplane::Moebius n(1.0, s, 0.0, 1.0);
  return (k * a * n).normalized();
}

inline halfplane::Moebius random_hyperbolic(std::mt19937_64& rng, double spread = 0.8) {
  for (;;) {
    const halfplane::Moebius g = random_element(rng, spread);
    if (std::abs(g.trace()) > 2.05) return g;
  }
}

/// Two short hyperbolic translations with axes (0, infinity) and
/// (-0.6, 1.4): generic (no right-angle crossing) and with a nearly
/// norm-minimal conjugation, so word images stay small and absolute
/// tolerances are meaningful. Far below the ping-pong threshold, hence no
/// certificate; word images are checked hyperbolic by the callers that
/// need it.
inline fuchsian::GroupPresentation small_free_pair(double t = 0.8) {
  const double e = std::exp(t / 2.0);
  const halfplane::Moebius g1(e, 0.0, 0.0, 1.0 / e);
  const double p = -0.6, q = 1.4;
  const double s = std::sqrt(q - p);
  const halfplane::Moebius m(q / s, p / s, 1.0 / s, 1.0 / s);
  fuchsian::GroupPresentation grp;
  grp.generators = {g1, (m * g1 * m.inverse()).normalized()};
  grp.kind = fuchsian::GroupKind::FreeSchottky;
  return grp;
}

/// First `count` combinatorial conjugacy classes whose images are hyperbolic.
inline std::vector<fuchsian::Word> hyperbolic_classes(const fuchsian::GroupPresentation& grp,
                                                      int count, int maxlen = 4) {
  std::vector<fuchsian::Word> out;
  fuchsian::ConjugacyClassStream stream(grp.rank(), maxlen);
  while (static_cast<int>(out.size()) < count) {
    const auto w = stream.next();
    if (!w) break;
    if (std::abs(evaluate(grp, *w).trace()) > 2.0 + 1e-6) out.push_back(*w);
  }
  return out;
}

}  // namespace proplab::testsupport
