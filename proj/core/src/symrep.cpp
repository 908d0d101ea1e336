#include "proplab/symrep.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace proplab::symrep {

namespace {

std::vector<double> binomial_row(int m) {
  std::vector<double> row(m + 1, 1.0);
  for (int k = 1; k <= m; ++k) row[k] = row[k - 1] * double(m - k + 1) / double(k);
  return row;
}

}  // namespace

Eigen::MatrixXd sym_power_matrix(const halfplane::Moebius& g, int degree) {
  if (degree < 1) throw std::invalid_argument("sym_power_matrix: degree >= 1");
  const int dim = degree + 1;
  // (g.P)(v) = P(g^-1 v) with g^-1 = [[d, -b], [-c, a]]:
  // x^{m-j} y^j -> (d x - b y)^{m-j} (-c x + a y)^j, m = degree.
  const halfplane::Moebius inv = g.inverse();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j <= degree; ++j) {
    const int m1 = degree - j;
    const auto b1 = binomial_row(m1);
    const auto b2 = binomial_row(j);
    // (inv.a x + inv.b y)^{m1} * (inv.c x + inv.d y)^{j}
    for (int r = 0; r <= m1; ++r) {
      for (int s = 0; s <= j; ++s) {
        const double coeff = b1[r] * std::pow(inv.a, m1 - r) * std::pow(inv.b, r) *
                             b2[s] * std::pow(inv.c, j - s) * std::pow(inv.d, s);
        out(r + s, j) += coeff;
      }
    }
  }
  return out;
}

RepMatrix sym_power_rep(const halfplane::Moebius& g, int n) {
  if (n < 1) throw std::invalid_argument("sym_power_rep: n >= 1");
  return RepMatrix{n, sym_power_matrix(g, 2 * n)};
}

InvariantForm invariant_form(int n) {
  if (n < 1) throw std::invalid_argument("invariant_form: n >= 1");
  const int dim = 2 * n + 1;
  const auto binom = binomial_row(2 * n);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    gram(i, 2 * n - i) = (i % 2 == 0 ? 1.0 : -1.0) / binom[i];

  InvariantForm form{n, gram, 0, 0};
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  for (int i = 0; i < dim; ++i)
    (es.eigenvalues()(i) > 0.0 ? form.positives : form.negatives) += 1;
  return form;
}

double character(const halfplane::Moebius& g, int n) {
  const double tr = std::abs(g.trace());
  if (tr <= 2.0 + 1e-10) throw halfplane::NonHyperbolicError("character: element not hyperbolic");
  const double a = (tr + std::sqrt(tr * tr - 4.0)) / 2.0;
  double sum = 1.0;
  double pow_up = 1.0, pow_down = 1.0;
  for (int j = 1; j <= n; ++j) {
    pow_up *= a * a;
    pow_down /= a * a;
    sum += pow_up + pow_down;
  }
  return sum;
}

}  // namespace proplab::symrep
