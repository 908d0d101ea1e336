#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "proplab/flatbundle.hpp"
#include "proplab/fuchsian.hpp"
#include "proplab/margulis.hpp"
#include "proplab/poincare.hpp"

namespace proplab::cocycle {

/// E-valued 1-form: (z, X) -> section coordinates, real-linear in the tangent
/// vector X (Euclidean coordinates). eval_many, when set, must agree with
/// pointwise eval and may parallelize internally (integrators batch their
/// source evaluations through it).
struct BundleOneForm {
  int n = 1;
  std::function<flatbundle::SectionCoords(Complex z, Complex x)> eval;
  std::function<std::vector<flatbundle::SectionCoords>(std::span<const Complex> zs,
                                                       std::span<const Complex> xs)>
      eval_many;

  std::vector<flatbundle::SectionCoords> evaluate_batch(std::span<const Complex> zs,
                                                        std::span<const Complex> xs) const;
};

BundleOneForm zero_form(int n);
BundleOneForm add(const BundleOneForm& a, const BundleOneForm& b);
BundleOneForm scale(const BundleOneForm& a, double s);

/// The map sending a q-differential (q = n+1) to an L_n-valued 1-form: in the
/// unit frame the L_n coordinate of Phi(omega)(X) is
///   conj(x) * conj(phi(z) (Im z)^{n+1}),  x = frame coordinate of X,
/// the contraction of X with the metric dual of omega. All other slots vanish.
BundleOneForm phi_map(const PoincareSeries& omega, int n);

/// Covariant derivative of a section field by central differences plus the
/// connection term.
flatbundle::SectionCoords covariant_derivative(
    const std::function<flatbundle::SectionCoords(Complex)>& section, Complex z, Complex x,
    int n, double h);

/// The exterior-derivative 1-form X -> nabla_X u of a section field.
BundleOneForm exact_form(const std::function<flatbundle::SectionCoords(Complex)>& section, int n,
                         double h);

/// Norm of d^nabla alpha(dx, dy) at z0 by central differences of mesh h.
double closedness_residual(const BundleOneForm& alpha, Complex z0, double h);

/// Transport for nabla^alpha on R + E: lambda stays constant, the E-part picks
/// up the integrated alpha source. Affine in (lambda, V).
std::pair<double, flatbundle::SectionCoords> affine_transport(const BundleOneForm& alpha,
                                                              const flatbundle::PathTransport& path,
                                                              double lambda,
                                                              const flatbundle::SectionCoords& v);

/// Holonomy of nabla^alpha along a word: linear part is the flat holonomy,
/// translation the alpha-defect of transporting (1, 0). Checks that alpha is
/// closed at the basepoint unless told otherwise.
margulis::AffineIsometry affine_holonomy(const fuchsian::Word& w,
                                         const fuchsian::GroupPresentation& grp,
                                         const BundleOneForm& alpha, int n,
                                         halfplane::Point basepoint, double step = 1e-2,
                                         bool check_closed = true);

/// Odd-slot coefficients of the parallel section along a geodesic, fixed by
/// the parallelism condition: b_0 = 1, b_k = -4 (n-2k+1)/(n+2k+1) b_{k-1}.
std::vector<double> neutral_section_coefficients(int n);

/// Control variant whose product degenerates at the top slot; rejected by the
/// transport oracle for p >= 1 (see the acceptance suite).
std::vector<double> neutral_section_coefficients_variant(int n);

/// Section along a unit-speed geodesic with slots (w)_{2k+1} = i b_k x_c^{2k+1}
/// (x_c the frame coordinate of the velocity), even slots zero; parallel for
/// the recurrence coefficients. The normalized version divides by the constant
/// sqrt(<w,w>) with the sign choice epsilon = +1.
class NeutralSection {
 public:
  NeutralSection(const halfplane::GeodesicPath& axis, int n);
  NeutralSection(const halfplane::GeodesicPath& axis, int n, std::vector<double> coefficients);

  flatbundle::SectionCoords value(double t) const;             // w_c(t)
  flatbundle::SectionCoords normalized_value(double t) const;  // v_c(t)
  double norm_squared() const { return norm2_; }

 private:
  halfplane::GeodesicPath axis_;
  int n_;
  std::vector<double> b_;
  double norm2_;
};

/// Neutral vector of the flat holonomy of a word at the basepoint: the
/// normalized geodesic section transported from the axis (fuchsian-geodesic
/// convention, epsilon = +1).
Eigen::VectorXd neutral_vector_geodesic(const fuchsian::Word& w,
                                        const fuchsian::GroupPresentation& grp, int n,
                                        halfplane::Point basepoint, double step = 1e-2);

/// mu via the holonomy route: <translation of affine holonomy, v> in the
/// bundle metric with the geodesic-section convention. mu is independent of
/// the basepoint; the overload without one evaluates on the word's axis,
/// where the truncated series is least exposed.
double margulis_direct(const fuchsian::Word& w, const fuchsian::GroupPresentation& grp,
                       const BundleOneForm& alpha, int n, halfplane::Point basepoint,
                       double step = 1e-2);
double margulis_direct(const fuchsian::Word& w, const fuchsian::GroupPresentation& grp,
                       const BundleOneForm& alpha, int n, double step = 1e-2);

/// mu via the integral formula: composite Simpson of <alpha(c'), v_c> over one
/// period of the axis geodesic, at least nodes_per_unit nodes per unit length.
/// t_offset moves the starting point along the axis.
double margulis_via_integral(const fuchsian::Word& w, const fuchsian::GroupPresentation& grp,
                             const BundleOneForm& alpha, int n, int nodes_per_unit = 1000,
                             double t_offset = 0.0);

/// f(u) = Im(omega(u x ... x u)) with q = omega.q() factors.
double f_observable(const PoincareSeries& omega, const halfplane::UnitTangent& u);

/// Simpson integral of f along one period of the axis of a word; phi is
/// batch-evaluated along the nodes.
double closed_geodesic_f_integral(const PoincareSeries& omega, const fuchsian::Word& w,
                                  const fuchsian::GroupPresentation& grp,
                                  int nodes_per_unit = 1000);

/// Monte Carlo statistics of f over the unit tangent bundle: hyperbolic-
/// uniform points in a geodesic ball around the octagon center (inside the
/// fundamental domain for ball_radius <= 1.5), uniform fiber angles.
struct MeanStats {
  double mean = 0.0;
  double standard_error = 0.0;
  int samples = 0;
};
MeanStats f_zero_mean_monte_carlo(const PoincareSeries& omega, int samples,
                                  std::uint64_t seed, double ball_radius = 1.4);

struct GeodesicLoopReport {
  fuchsian::Word word;
  double length = 0.0;
  double integral_f = 0.0;
  double mu_direct = 0.0;
  double mu_integral = 0.0;
};

struct SurveyResult {
  std::vector<GeodesicLoopReport> reports;     // full reports (both mu routes)
  std::vector<std::pair<fuchsian::Word, double>> f_scan;  // class, integral of f
  bool both_signs = false;
  std::optional<fuchsian::Word> positive_word;
  std::optional<fuchsian::Word> negative_word;
  int classes_scanned = 0;
};

/// Scans combinatorial conjugacy classes up to maxlen in canonical order:
/// f-integrals until both signs occur (or sign_budget classes), full
/// mu reports for the first report_budget classes. Words evaluating to +-I
/// (relator ghosts) are skipped. Sign representatives must clear sign_margin,
/// which keeps truncation noise on symmetric classes from minting a bogus
/// sign witness.
SurveyResult geodesic_sign_survey(const fuchsian::GroupPresentation& grp,
                                  const PoincareSeries& omega, int n, int maxlen,
                                  int sign_budget = 2000, int report_budget = 10,
                                  int nodes_per_unit = 1000, double step = 1e-2,
                                  double sign_margin = 1e-2);

/// Margulis-pair certificate for the survey's sign pair via the holonomy
/// route; the linear parts must be in general position.
std::optional<margulis::ObstructionCertificate> survey_obstruction(
    const fuchsian::GroupPresentation& grp, const PoincareSeries& omega, int n,
    const SurveyResult& survey, halfplane::Point basepoint, double step = 1e-2);

}  // namespace proplab::cocycle
