#include "proplab/poincare.hpp"

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <thread>
#include <unordered_map>

namespace proplab::cocycle {

using halfplane::Moebius;

namespace {

// SU(1,1) row (alpha, beta) of the Cayley conjugate of a real Moebius matrix.
std::pair<Complex, Complex> sl2_to_su11(const Moebius& g) {
  return {Complex((g.a + g.d) / 2.0, (g.b - g.c) / 2.0),
          Complex((g.a - g.d) / 2.0, -(g.b + g.c) / 2.0)};
}

struct KeyHash {
  std::size_t operator()(const std::array<std::int64_t, 4>& k) const {
    std::size_t h = 1469598103934665603ull;
    for (std::int64_t v : k) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

// Deduplicates group elements up to sign (PSL): matrices are sign-normalized
// and quantized; neighbor cells are probed so roundoff cannot split an orbit.
class ElementSet {
 public:
  explicit ElementSet(double cell) : cell_(cell) {}

  bool insert(const Moebius& g) {
    const auto e = normalize(g);
    std::array<std::int64_t, 4> base;
    for (int i = 0; i < 4; ++i) base[i] = llround(e[i] / cell_);
    // Probe all neighbor cells before inserting.
    std::array<std::int64_t, 4> probe;
    for (int d0 = -1; d0 <= 1; ++d0)
      for (int d1 = -1; d1 <= 1; ++d1)
        for (int d2 = -1; d2 <= 1; ++d2)
          for (int d3 = -1; d3 <= 1; ++d3) {
            probe = {base[0] + d0, base[1] + d1, base[2] + d2, base[3] + d3};
            if (seen_.count(probe)) return false;
          }
    seen_.emplace(base, true);
    return true;
  }

 private:
  static std::array<double, 4> normalize(const Moebius& g) {
    std::array<double, 4> e{g.a, g.b, g.c, g.d};
    for (double v : e) {
      if (std::abs(v) > 1e-9) {
        if (v < 0.0)
          for (double& w : e) w = -w;
        break;
      }
    }
    return e;
  }

  double cell_;
  std::unordered_map<std::array<std::int64_t, 4>, bool, KeyHash> seen_;
};

bool certified_discrete(const fuchsian::GroupPresentation& grp) {
  if (grp.rank() == 0) return true;
  if (grp.kind == fuchsian::GroupKind::Genus2Cocompact) return true;
  return grp.certificate.has_value();
}

}  // namespace

PoincareSeries::PoincareSeries(const fuchsian::GroupPresentation& grp, int q, int seed_degree,
                               int depth)
    : q_(q), seed_degree_(seed_degree), depth_(depth) {
  if (q < 2) throw std::invalid_argument("PoincareSeries: q >= 2");
  if (seed_degree < 0) throw std::invalid_argument("PoincareSeries: seed_degree >= 0");
  if (depth < 0) throw std::invalid_argument("PoincareSeries: depth >= 0");
  if (!certified_discrete(grp))
    throw std::invalid_argument("PoincareSeries: group lacks a discreteness certificate");

  // Breadth-first enumeration of group elements by word length, deterministic
  // letter order, PSL-deduplicated.
  ElementSet seen(1e-6);
  std::vector<Moebius> frontier{Moebius::identity()};
  seen.insert(frontier.front());
  auto push_element = [this](const Moebius& g) {
    const auto [alpha, beta] = sl2_to_su11(g);
    alpha_.push_back(alpha);
    beta_.push_back(beta);
  };
  push_element(frontier.front());

  for (int len = 1; len <= depth; ++len) {
    std::vector<Moebius> next;
    next.reserve(frontier.size() * 2 * grp.rank());
    for (const Moebius& w : frontier) {
      for (int i = 0; i < grp.rank(); ++i) {
        for (int sign = 0; sign < 2; ++sign) {
          const Moebius& g = grp.generators[i];
          const Moebius cand = (w * (sign == 0 ? g : g.inverse())).normalized();
          if (seen.insert(cand)) {
            next.push_back(cand);
            push_element(cand);
          }
        }
      }
    }
    frontier = std::move(next);
  }
}

Complex PoincareSeries::phi_disk(Complex w) const {
  Complex sum(0.0, 0.0);
  const std::size_t count = alpha_.size();
  for (std::size_t i = 0; i < count; ++i) {
    const Complex den = std::conj(beta_[i]) * w + std::conj(alpha_[i]);
    const Complex den2 = den * den;
    Complex deriv_q(1.0, 0.0);  // (1/den^2)^q
    Complex pw = den2;
    int e = q_;
    // den^{-2q} by binary powering of den^2, one division at the end.
    Complex acc(1.0, 0.0);
    while (e > 0) {
      if (e & 1) acc *= pw;
      pw *= pw;
      e >>= 1;
    }
    deriv_q = 1.0 / acc;
    if (seed_degree_ > 0) {
      const Complex img = (alpha_[i] * w + beta_[i]) / den;
      Complex p(1.0, 0.0);
      for (int k = 0; k < seed_degree_; ++k) p *= img;
      sum += p * deriv_q;
    } else {
      sum += deriv_q;
    }
  }
  return sum;
}

Complex PoincareSeries::phi(Complex z) const {
  const Complex i(0.0, 1.0);
  const Complex w = (z - i) / (z + i);
  const Complex cayley_deriv = 2.0 * i / ((z + i) * (z + i));
  Complex factor(1.0, 0.0);
  for (int k = 0; k < q_; ++k) factor *= cayley_deriv;
  return phi_disk(w) * factor;
}

std::vector<Complex> PoincareSeries::phi_many(std::span<const Complex> zs) const {
  std::vector<Complex> out(zs.size());
  const std::size_t n = zs.size();
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(hw, std::max<std::size_t>(1, n / 16)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) out[i] = phi(zs[i]);
    return out;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned t = 0; t < workers; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([this, &zs, &out, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) out[i] = phi(zs[i]);
    });
  }
  for (auto& th : pool) th.join();
  return out;
}

double PoincareSeries::equivariance_residual(Complex z, const Moebius& g) const {
  const Complex gz = g(z);
  Complex deriv_q(1.0, 0.0);
  const Complex gp = g.derivative(z);
  for (int k = 0; k < q_; ++k) deriv_q *= gp;
  return std::abs(phi(gz) * deriv_q - phi(z));
}

double PoincareSeries::holomorphicity_residual(Complex z, double h) const {
  // Cauchy-Riemann: d phi / d conj(z) = ((d/dx) + i (d/dy)) phi / 2.
  const Complex dx = (phi(z + h) - phi(z - h)) / (2.0 * h);
  const Complex dy = (phi(z + Complex(0.0, h)) - phi(z - Complex(0.0, h))) / (2.0 * h);
  return std::abs(0.5 * (dx + Complex(0.0, 1.0) * dy));
}

std::vector<double> depth_residual_profile(const fuchsian::GroupPresentation& grp, int q,
                                           int seed_degree, std::span<const int> depths,
                                           Complex z) {
  std::vector<double> out;
  out.reserve(depths.size());
  for (int depth : depths) {
    const PoincareSeries series(grp, q, seed_degree, depth);
    double worst = 0.0;
    for (const Moebius& g : grp.generators)
      worst = std::max(worst, series.equivariance_residual(z, g));
    out.push_back(worst);
  }
  return out;
}

}  // namespace proplab::cocycle
