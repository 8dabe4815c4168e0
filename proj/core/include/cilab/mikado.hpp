#pragma once

#include <array>
#include <optional>
#include <vector>

#include "cilab/field.hpp"

namespace cilab {

enum class AxialKind {
  Flat,      // psi == 1: no axial structure (stationary pumping blocks)
  Harmonic,  // psi = sqrt(2) sin(s)
  Bump,      // psi = sqrt(B_kappa(s)): compact axial blobs
};

/// Oscillation/concentration parameters.  mu = lambda^alpha, omega =
/// lambda^beta, nu = lambda^gamma unless overridden; overrides exist because
/// desk-scale grids pin mu and nu to resolvable integers while lambda sweeps.
struct MikadoParams {
  int lambda = 8;
  double alpha = 0.25;
  double beta = 0.5;
  double gamma = 1.5;
  double eps = 1e-3;  // cutoff scale, same units as |R|
  double p = 1.5;
  double p_tilde = 1.0;
  int d = 2;

  double mu_override = 0.0;   // > 0 replaces lambda^alpha
  long nu_override = 0;       // > 0 replaces round(lambda^gamma)
  double omega_override = 0;  // > 0 replaces lambda^beta
  int transverse_freq = 0;    // tube-train frequency; 0 means lambda
  AxialKind axial = AxialKind::Harmonic;
  double axial_conc = 4.0;    // kappa, Bump axial only
  bool alternate_signs = true;
  double balance = 1.0;       // coefficient split between density and field

  double mu() const;
  long nu() const;
  double omega() const;
  int train_freq() const { return transverse_freq > 0 ? transverse_freq : lambda; }

  /// lambda >= 2, exponent condition 1/p + 1/p_tilde > 1 + 1/d, alpha and
  /// gamma positive, lambda*mu/nu < 1, eps > 0.
  void validate() const;
};

/// Mean-one C-infinity periodized bump at concentration mu
/// (support half-width pi/mu around 0).
class BumpProfile {
 public:
  explicit BumpProfile(double mu);
  double concentration() const { return mu_; }
  double amplitude() const { return amp_; }
  /// B(s) for s in torus coordinates.
  double value(double s) const;
  /// B(s)^q, evaluated stably inside the mollifier.
  double value_pow(double s, double q) const;
  /// dB/ds, analytic.
  double value_deriv(double s) const;

 private:
  double mu_;
  double amp_;
};

/// Transverse profile of a direction-j tube: product of per-axis bumps over
/// the d-1 axes orthogonal to j, unit mean.  Also hands out the two factor
/// fields of the splitting F = phi * phi_tilde with phi ~ F^{1/p'} and
/// phi_tilde ~ F^{1/p}.
class TransverseBump {
 public:
  TransverseBump(double mu, int d);

  const BumpProfile& profile() const { return bump_; }
  int dim() const { return d_; }
  double concentration() const { return bump_.concentration(); }

  /// F_mu sampled for tube direction j, train frequency freq, centers at
  /// offset[a] per transverse axis.  Throws UnresolvableConcentrationError
  /// when the composite bump covers fewer than 4 cells.
  ScalarField field(const TorusGrid& grid, int direction, const std::array<double, 3>& offset,
                    int freq = 1) const;
  /// Signed power samples: sign alternates per train period when alternate.
  ScalarField field_pow(const TorusGrid& grid, int direction, const std::array<double, 3>& offset,
                        double power, int freq, bool alternate) const;
  ScalarField factor_phi(const TorusGrid& grid, int direction, const std::array<double, 3>& offset,
                         double p, int freq = 1) const;
  ScalarField factor_phi_tilde(const TorusGrid& grid, int direction,
                               const std::array<double, 3>& offset, double p, int freq = 1) const;

 private:
  BumpProfile bump_;
  int d_;
};

TransverseBump build_bump(double mu, int d);

/// Axial oscillation profile psi with mean(psi^2) = 1 over the circle.
class AxialProfile {
 public:
  AxialProfile(AxialKind kind, double kappa);
  AxialKind kind() const { return kind_; }
  double psi(double s) const;
  double psi_squared(double s) const;
  /// Primitive of psi^2 - 1 (periodic, zero at 0); drives the time corrector.
  double psi_squared_primitive(double s) const;

 private:
  AxialKind kind_;
  std::optional<BumpProfile> bump_;
};

/// psi for frequency nu along axis j; AliasRiskError if nu > n/4 (checked at
/// sampling time against the grid).
AxialProfile build_axial_oscillation(long nu, AxialKind kind = AxialKind::Harmonic,
                                     double kappa = 4.0);

/// Per-direction support placement: transverse centers (2j-1)pi/d, axial
/// phases staggered so traveling blobs in different directions never meet.
struct SupportLayout {
  // transverse_offset[j][a]: center coordinate on axis a for direction j
  std::vector<std::array<double, 3>> transverse_offset;
  std::vector<double> axial_phase;
};

/// Computes the layout and validates pairwise disjointness for the directions
/// in `active` (throws SupportOverlapError when two active directions cannot
/// be separated at every time).
SupportLayout place_supports(const MikadoParams& params, const TorusGrid& grid,
                             const std::vector<int>& active);

/// One traveling density/field pair.
struct MikadoPair {
  int direction = 0;
  ScalarField theta;
  VectorField field;
  std::array<double, 3> offset{0, 0, 0};
  double axial_phase = 0.0;
};

/// Theta = strain^(1/p)(transverse) * psi^2(nu (x_j - omega t - phase)),
/// W = strain^(1/p') (transverse) e_j, so that
/// Theta . W = F_mu(train) psi^2(traveling axial) e_j pointwise and
/// div W = 0 identically.
MikadoPair build_pair(const TorusGrid& grid, const MikadoParams& params,
                      const SupportLayout& layout, int direction, double t);

/// Smooth ramp: 0 for u <= 1, 1 for u >= 2, C-infinity monotone between.
double smooth_ramp(double u);

/// chi = ramp(|component| / eps): vanishes where |component| <= eps, is 1
/// where |component| >= 2 eps.
ScalarField cutoff_chi(const ScalarField& component, double eps);

}  // namespace cilab
