#pragma once

#include <string>
#include <vector>

#include "cilab/field.hpp"
#include "cilab/perturbation.hpp"
#include "cilab/transport.hpp"

namespace cilab {

/// Time-sampled pair (v, R) solving the Navier-Stokes-Reynolds system with
/// the pressure recovered from the equation.
struct NSSubsolution {
  TimeGrid time_grid;
  std::vector<VectorField> v;
  std::vector<SymTensorField> reynolds;
  std::vector<ScalarField> pressure;
  double r = 1.0;  // Sobolev exponent of the metric

  int samples() const { return time_grid.samples(); }
  const TorusGrid& grid() const { return v.front().grid(); }
};

/// Zero-mean p with -laplacian(p) = div div (v x v - R), solved spectrally.
ScalarField pressure_from(const VectorField& v, const SymTensorField& R);

/// F = dt v + div(v x v) - laplacian v; p makes F + grad p divergence free;
/// R = symmetric antidivergence of that projection.  The spatial mean of v
/// must not drift in time (momentum conservation) or NonZeroMeanError fires.
struct NSDefect {
  std::vector<ScalarField> pressure;
  std::vector<SymTensorField> reynolds;
};
NSDefect ns_defect(const std::vector<VectorField>& v, const TimeGrid& tg, double tol_mean = 1e-8);

NSSubsolution make_ns_subsolution(std::vector<VectorField> v, const TimeGrid& tg, double r,
                                  double tol_mean = 1e-8);

double ns_energy(const NSSubsolution& sub, int i);  // (1/2) ||v(t)||_L2^2
double ns_gap_i(const NSSubsolution& sub, const EnergyProfile& e, int i);
double ns_gap_I(const NSSubsolution& sub, const EnergyProfile& e);
MarginReport ns_admissibility(const NSSubsolution& sub, const EnergyProfile& e);

/// sup_t ||v - v'||_{W^{1,r}}.
double metric_dX_ns(const NSSubsolution& a, const NSSubsolution& b);

/// gamma0(t) = ( i(t) - d ||R(t)||_L1 ) / ( (2 pi)^d d ); requires a strictly
/// positive admissibility margin.
std::vector<double> gamma0_schedule(const NSSubsolution& sub, const EnergyProfile& e);

/// Per-time data the perturbation oracle reports back.
struct OracleRow {
  double t = 0.0;
  double w1r_dist = 0.0;   // ||v1 - v||_{W^{1,r}}
  double defect_l1 = 0.0;  // ||R1||_L1
  double l2_sq_dist = 0.0; // ||v1 - v||_{L2}^2
};

struct OracleReport {
  std::vector<OracleRow> rows;
  double delta = 0.0;
  std::vector<double> gamma0;
};

/// The delta -> 0 limit values substituted exactly (testing aid).
OracleReport exact_limit_oracle(const NSSubsolution& sub, const EnergyProfile& e);

struct NSContractionReport {
  double I_before = 0.0;
  double I_new_bound = 0.0;
  double ratio_bound = 0.0;
  double successor_margin = 0.0;
  std::vector<EstimateRow> rows;
  bool pass = false;
};

/// Re-evaluates the quantitative contraction chain with every O(delta) term
/// made explicit: cross terms through the W^{1,r} -> L^1 embedding, the
/// energy identity, the 3/4 contraction target and successor admissibility.
/// Throws OracleInconsistentError when the report violates its own input
/// estimates.
NSContractionReport verify_contraction(const NSSubsolution& sub, const EnergyProfile& e,
                                       const OracleReport& oracle);

/// Divergence-free curl field of a blob-lattice potential: concentration mu
/// per axis (full-dimensional), lattice frequency lambda, L2 norm scaled to
/// target_l2.  Requires r < 2d/(d+2).
VectorField intermittent_field(const TorusGrid& grid, double mu, int lambda, double target_l2,
                               double r);

struct MockOracleResult {
  std::vector<VectorField> v1;
  OracleReport report;
};

/// Realizes the oracle interface at desk scale: v1 = v + intermittent field
/// sized to the energy identity; the successor defect is measured honestly
/// via ns_defect and reported without a pass verdict.
MockOracleResult mock_oracle(const NSSubsolution& sub, const EnergyProfile& e, double delta,
                             double mu, int lambda);

/// Exact decaying-shear solution v = exp(-t) (sin x2, 0, 0) plus an optional
/// solenoidal perturbation; the Reynolds tensor comes from ns_defect.
NSSubsolution make_demo_ns(const TorusGrid& grid, const TimeGrid& tg, double amplitude,
                           double perturbation, double r);

}  // namespace cilab
