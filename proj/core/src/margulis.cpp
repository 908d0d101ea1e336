#include "proplab/margulis.hpp"

#include <algorithm>
#include <cmath>

#include "proplab/symrep.hpp"

namespace proplab::margulis {

AffineIsometry compose(const AffineIsometry& f, const AffineIsometry& g) {
  return {f.linear * g.linear, f.translation + f.linear * g.translation};
}

AffineIsometry affine_inverse(const AffineIsometry& f) {
  const Eigen::MatrixXd inv = f.linear.inverse();
  return {inv, -(inv * f.translation)};
}

Eigen::VectorXd apply(const AffineIsometry& f, const Eigen::VectorXd& x) {
  return f.linear * x + f.translation;
}

double form_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& gram) {
  return (a.transpose() * gram * a - gram).cwiseAbs().maxCoeff();
}

LoxodromicData loxodromic_data(const Eigen::MatrixXd& a, const Eigen::MatrixXd& gram) {
  const int dim = static_cast<int>(a.rows());
  const Eigen::EigenSolver<Eigen::MatrixXd> es(a);
  if (es.info() != Eigen::Success) throw NotLoxodromicError("eigen-decomposition failed");

  const double radius = es.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < dim; ++i)
    if (std::abs(es.eigenvalues()(i).imag()) > 1e-8 * radius)
      throw NotLoxodromicError("complex eigenvalue: element is not loxodromic");

  std::vector<int> order(dim);
  for (int i = 0; i < dim; ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](int i, int j) {
    return es.eigenvalues()(i).real() < es.eigenvalues()(j).real();
  });

  LoxodromicData data;
  data.eigenvalues.resize(dim);
  data.eigenvectors.resize(dim, dim);
  for (int i = 0; i < dim; ++i) {
    data.eigenvalues(i) = es.eigenvalues()(order[i]).real();
    Eigen::VectorXd v = es.eigenvectors().col(order[i]).real();
    if (v.norm() < 1e-8) v = es.eigenvectors().col(order[i]).imag();
    v.normalize();
    // Deterministic sign: largest-magnitude coordinate positive.
    int imax = 0;
    v.cwiseAbs().maxCoeff(&imax);
    if (v(imax) < 0.0) v = -v;
    data.eigenvectors.col(i) = v;
  }

  for (int i = 0; i + 1 < dim; ++i) {
    const double gap = data.eigenvalues(i + 1) - data.eigenvalues(i);
    const double scale = std::max(std::abs(data.eigenvalues(i)), std::abs(data.eigenvalues(i + 1)));
    if (gap < 1e-6 * std::max(1.0, scale))
      throw NotLoxodromicError("repeated eigenvalue: element is not loxodromic");
  }

  int neutral = 0;
  for (int i = 1; i < dim; ++i)
    if (std::abs(data.eigenvalues(i) - 1.0) < std::abs(data.eigenvalues(neutral) - 1.0))
      neutral = i;
  if (std::abs(data.eigenvalues(neutral) - 1.0) > 1e-8 * radius)
    throw NotLoxodromicError("no eigenvalue 1 in the spectrum");
  data.neutral_index = neutral;

  for (int i = 0; i < dim; ++i) {
    if (i == neutral) continue;
    const Eigen::VectorXd v = data.eigenvectors.col(i);
    if (std::abs(v.dot(gram * v)) > 1e-6)
      throw NotLoxodromicError("non-neutral eigenvector is not null for the form");
  }
  return data;
}

Eigen::VectorXd neutral_vector(const LoxodromicData& data, const Eigen::MatrixXd& gram) {
  const Eigen::VectorXd v = data.eigenvectors.col(data.neutral_index);
  const double norm2 = v.dot(gram * v);
  if (!(norm2 > 0.0))
    throw NotLoxodromicError("neutral vector is not spacelike for this form sign");
  return v / std::sqrt(norm2);
}

Eigen::VectorXd neutral_vector_lightcone3(const LoxodromicData& data,
                                          const Eigen::MatrixXd& gram) {
  const int dim = static_cast<int>(gram.rows());
  if (dim != 3)
    throw std::invalid_argument("lightcone3 convention applies in dimension 3 only");

  // The definite one-dimensional side of the form; its two cone components are
  // separated by the sign of the coordinate along that eigendirection.
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
  int positives = 0;
  for (int i = 0; i < 3; ++i) positives += es.eigenvalues()(i) > 0.0 ? 1 : 0;
  int axis_index = -1;
  const double needed = (positives == 1) ? 1.0 : -1.0;
  for (int i = 0; i < 3; ++i)
    if ((es.eigenvalues()(i) > 0.0 ? 1.0 : -1.0) == needed) axis_index = i;
  Eigen::VectorXd timelike = es.eigenvectors().col(axis_index);
  int imax = 0;
  timelike.cwiseAbs().maxCoeff(&imax);
  if (timelike(imax) < 0.0) timelike = -timelike;

  const int lo = (data.neutral_index == 0) ? 1 : 0;
  const int hi = (data.neutral_index == 2) ? 1 : 2;
  Eigen::VectorXd e1 = data.eigenvectors.col(lo);
  Eigen::VectorXd e2 = data.eigenvectors.col(hi);
  if (std::abs(e1.dot(timelike)) < 1e-10 || std::abs(e2.dot(timelike)) < 1e-10)
    throw NotLoxodromicError("null eigenvector orthogonal to the timelike direction");
  if (e1.dot(timelike) < 0.0) e1 = -e1;
  if (e2.dot(timelike) < 0.0) e2 = -e2;

  Eigen::VectorXd v = neutral_vector(data, gram);
  Eigen::Matrix3d frame;
  frame.col(0) = v;
  frame.col(1) = e1;
  frame.col(2) = e2;
  if (frame.determinant() < 0.0) v = -v;
  return v;
}

double margulis_invariant(const AffineIsometry& phi, const Eigen::MatrixXd& gram,
                          const Eigen::VectorXd& neutral) {
  return phi.translation.dot(gram * neutral);
}

double margulis_invariant_at(const AffineIsometry& phi, const Eigen::MatrixXd& gram,
                             const Eigen::VectorXd& neutral, const Eigen::VectorXd& x) {
  return (apply(phi, x) - x).dot(gram * neutral);
}

namespace {

int numerical_rank(const Eigen::MatrixXd& m, double tol) {
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0) return 0;
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > tol * sv(0)) ++rank;
  return rank;
}

}  // namespace

bool general_position(const LoxodromicData& d1, const LoxodromicData& d2, double tol) {
  const int dim = static_cast<int>(d1.eigenvalues.size());
  if (static_cast<int>(d2.eigenvalues.size()) != dim)
    throw std::invalid_argument("general_position: dimension mismatch");

  // Blocks: 0 -> R v, 1 -> E^+ (|lambda| > 1), 2 -> E^- (|lambda| < 1).
  auto blocks = [dim](const LoxodromicData& d) {
    std::array<std::vector<int>, 3> idx;
    for (int i = 0; i < dim; ++i) {
      if (i == d.neutral_index) idx[0].push_back(i);
      else if (std::abs(d.eigenvalues(i)) > 1.0) idx[1].push_back(i);
      else idx[2].push_back(i);
    }
    return idx;
  };
  const auto b1 = blocks(d1);
  const auto b2 = blocks(d2);

  auto subspace = [dim](const LoxodromicData& d, const std::array<std::vector<int>, 3>& blk,
                        int mask) {
    std::vector<int> cols;
    for (int b = 0; b < 3; ++b)
      if (mask & (1 << b)) cols.insert(cols.end(), blk[b].begin(), blk[b].end());
    Eigen::MatrixXd m(dim, cols.size());
    for (size_t j = 0; j < cols.size(); ++j) m.col(j) = d.eigenvectors.col(cols[j]);
    return m;
  };

  for (int m1 = 1; m1 < 8; ++m1) {
    for (int m2 = 1; m2 < 8; ++m2) {
      const Eigen::MatrixXd u = subspace(d1, b1, m1);
      const Eigen::MatrixXd v = subspace(d2, b2, m2);
      const int du = static_cast<int>(u.cols());
      const int dv = static_cast<int>(v.cols());
      Eigen::MatrixXd joint(dim, du + dv);
      joint << u, v;
      // dim(U cap V) = du + dv - rank[U V]; minimal iff rank is maximal.
      if (numerical_rank(joint, tol) != std::min(dim, du + dv)) return false;
    }
  }
  return true;
}

AffineIsometry affine_word(const std::vector<AffineIsometry>& generators,
                           const fuchsian::Word& w) {
  if (generators.empty()) throw std::invalid_argument("affine_word: no generators");
  const int dim = static_cast<int>(generators.front().linear.rows());
  AffineIsometry acc{Eigen::MatrixXd::Identity(dim, dim), Eigen::VectorXd::Zero(dim)};
  for (int l : w.letters) {
    const size_t idx = static_cast<size_t>(std::abs(l)) - 1;
    if (idx >= generators.size()) throw std::out_of_range("affine_word: letter out of range");
    const AffineIsometry& g = generators[idx];
    acc = compose(acc, l > 0 ? g : affine_inverse(g));
  }
  return acc;
}

Eigen::VectorXd affine_fixed_point(const AffineIsometry& phi) {
  const int dim = static_cast<int>(phi.linear.rows());
  const Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim) - phi.linear;
  return m.partialPivLu().solve(phi.translation);
}

Eigen::MatrixXd margulis_form(int n) {
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * symrep::invariant_form(n).gram;
}

namespace {

// Coefficients of the fixed-point quadratic c x^2 + (d-a) x y - b y^2, scaled
// by the sign of the trace so the result descends to PSL(2,R).
Eigen::Vector3d axis_quadratic(const halfplane::Moebius& g) {
  const double s = g.trace() >= 0.0 ? 1.0 : -1.0;
  return s * Eigen::Vector3d(g.c, g.d - g.a, -g.b);
}

}  // namespace

Eigen::VectorXd neutral_vector_fuchsian(const halfplane::Moebius& g, int n) {
  if (!g.is_hyperbolic())
    throw NotLoxodromicError("neutral_vector_fuchsian: element is not hyperbolic");
  const Eigen::Vector3d q = axis_quadratic(g);
  // Power of the quadratic as a polynomial in basis x^{2n-j} y^j.
  Eigen::VectorXd coeffs = Eigen::VectorXd::Zero(1);
  coeffs(0) = 1.0;
  for (int rep = 0; rep < n; ++rep) {
    Eigen::VectorXd next = Eigen::VectorXd::Zero(coeffs.size() + 2);
    for (int i = 0; i < coeffs.size(); ++i)
      for (int j = 0; j < 3; ++j) next(i + j) += coeffs(i) * q(j);
    coeffs = next;
  }
  const Eigen::MatrixXd gram = margulis_form(n);
  const double norm2 = coeffs.dot(gram * coeffs);
  if (!(norm2 > 0.0))
    throw NotLoxodromicError("axis quadratic power is not spacelike");
  return coeffs / std::sqrt(norm2);
}

std::vector<AffineIsometry> fuchsian_affine_generators(
    const fuchsian::GroupPresentation& grp, int n,
    const std::vector<Eigen::VectorXd>& translations) {
  if (translations.size() != static_cast<size_t>(grp.rank()))
    throw std::invalid_argument("translation list must match the generator count");
  std::vector<AffineIsometry> out;
  out.reserve(grp.rank());
  for (int i = 0; i < grp.rank(); ++i)
    out.push_back({symrep::sym_power_rep(grp.generators[i], n).mat, translations[i]});
  return out;
}

std::optional<ObstructionCertificate> properness_obstruction(
    const fuchsian::GroupPresentation& grp, int n,
    const std::vector<Eigen::VectorXd>& translations, const std::vector<fuchsian::Word>& words,
    double sign_gauge) {
  const Eigen::MatrixXd gram = margulis_form(n);
  const auto gens = fuchsian_affine_generators(grp, n, translations);

  struct Entry {
    AffineIsometry phi;
    LoxodromicData lox;
    double mu;
  };
  std::vector<Entry> entries;
  entries.reserve(words.size());
  for (const auto& w : words) {
    Entry e{affine_word(gens, w), {}, 0.0};
    e.lox = loxodromic_data(e.phi.linear, gram);
    const Eigen::VectorXd v = sign_gauge * neutral_vector_fuchsian(evaluate(grp, w), n);
    e.mu = margulis_invariant(e.phi, gram, v);
    entries.push_back(std::move(e));
  }

  for (size_t i = 0; i < entries.size(); ++i) {
    for (size_t j = i + 1; j < entries.size(); ++j) {
      if (!general_position(entries[i].lox, entries[j].lox)) continue;
      if (entries[i].mu * entries[j].mu <= 0.0) {
        ObstructionCertificate cert;
        cert.word1 = words[i];
        cert.word2 = words[j];
        cert.mu1 = entries[i].mu;
        cert.mu2 = entries[j].mu;
        cert.general_position = true;
        cert.verdict = Verdict::Obstructed;
        return cert;
      }
    }
  }
  return std::nullopt;
}

}  // namespace proplab::margulis
