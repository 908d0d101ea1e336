#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "proplab/fuchsian.hpp"
#include "proplab/halfplane.hpp"

namespace proplab::margulis {

struct NotLoxodromicError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Affine map x -> linear x + translation with linear part preserving a fixed
/// symmetric bilinear form.
struct AffineIsometry {
  Eigen::MatrixXd linear;
  Eigen::VectorXd translation;
};

AffineIsometry compose(const AffineIsometry& f, const AffineIsometry& g);
AffineIsometry affine_inverse(const AffineIsometry& f);
Eigen::VectorXd apply(const AffineIsometry& f, const Eigen::VectorXd& x);

/// max |A^T G A - G| over entries; 0 for exact isometries.
double form_residual(const Eigen::MatrixXd& a, const Eigen::MatrixXd& gram);

/// Simple real spectrum of a form-preserving matrix: eigenvalues strictly
/// increasing, exactly one equal to 1 (the neutral one), non-neutral
/// eigenvectors null for the form. Eigenvectors are unit-Euclidean columns
/// with a deterministic sign choice.
struct LoxodromicData {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd eigenvectors;
  int neutral_index = -1;
};

/// Throws NotLoxodromicError when the spectrum has a complex pair, a
/// relative eigenvalue gap below 1e-6, or no eigenvalue within 1e-8 of 1
/// (relative to the spectral radius).
LoxodromicData loxodromic_data(const Eigen::MatrixXd& a, const Eigen::MatrixXd& gram);

/// Neutral eigenvector normalized to <v,v> = +1; the sign is deterministic but
/// convention-free (largest-magnitude coordinate positive).
Eigen::VectorXd neutral_vector(const LoxodromicData& data, const Eigen::MatrixXd& gram);

/// Dimension-3 light-cone orientation: the form must have a one-dimensional
/// definite side (the cone then has two components); null eigenvectors are
/// scaled positive along it and v is oriented so det[v, e_min, e_max] > 0.
/// Throws std::invalid_argument outside dimension 3.
Eigen::VectorXd neutral_vector_lightcone3(const LoxodromicData& data, const Eigen::MatrixXd& gram);

/// mu(phi) = <phi(x) - x, v> at x = 0; independent of the base point when v is
/// the neutral vector of the linear part.
double margulis_invariant(const AffineIsometry& phi, const Eigen::MatrixXd& gram,
                          const Eigen::VectorXd& neutral);
double margulis_invariant_at(const AffineIsometry& phi, const Eigen::MatrixXd& gram,
                             const Eigen::VectorXd& neutral, const Eigen::VectorXd& x);

/// True iff every pair of subspace sums from {R v, E+, E-} of the two
/// decompositions intersects minimally.
bool general_position(const LoxodromicData& d1, const LoxodromicData& d2, double tol = 1e-8);

/// Unique affine extension of generator translations over a word:
/// tau(g h) = tau(g) + rho(g) tau(h).
AffineIsometry affine_word(const std::vector<AffineIsometry>& generators, const fuchsian::Word& w);

/// Fixed point (I - A)^{-1} tau for maps whose linear part has no eigenvalue 1.
Eigen::VectorXd affine_fixed_point(const AffineIsometry& phi);

// --- Fuchsian pipeline in the symmetric-power model ---------------------

/// Form normalization under which neutral vectors of Fuchsian images are
/// positive: (-1)^n times the symmetric-power invariant form.
Eigen::MatrixXd margulis_form(int n);

/// Axis-based neutral vector of sym_power_rep(g, n): the n-th power of the
/// fixed-point quadratic of g (trace-sign normalized, so it is well defined on
/// PSL(2,R) and conjugation-equivariant), normalized to margulis_form norm +1.
Eigen::VectorXd neutral_vector_fuchsian(const halfplane::Moebius& g, int n);

/// Affine images of the generators: sym_power_rep linear parts with the given
/// translations.
std::vector<AffineIsometry> fuchsian_affine_generators(const fuchsian::GroupPresentation& grp,
                                                       int n,
                                                       const std::vector<Eigen::VectorXd>& translations);

enum class Verdict { Obstructed, Inconclusive };

struct ObstructionCertificate {
  fuchsian::Word word1, word2;
  double mu1 = 0.0, mu2 = 0.0;
  bool general_position = false;
  Verdict verdict = Verdict::Inconclusive;
};

/// Ordered scan over word pairs; returns the first pair in general position
/// with mu1 * mu2 <= 0. No certificate means the scan is inconclusive (it
/// never proves properness). sign_gauge flips every neutral vector and must
/// not change any verdict.
std::optional<ObstructionCertificate> properness_obstruction(
    const fuchsian::GroupPresentation& grp, int n,
    const std::vector<Eigen::VectorXd>& translations, const std::vector<fuchsian::Word>& words,
    double sign_gauge = 1.0);

}  // namespace proplab::margulis
