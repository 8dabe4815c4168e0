#pragma once

#include <string>
#include <vector>

#include "cilab/errors.hpp"
#include "cilab/mikado.hpp"
#include "cilab/transport.hpp"

namespace cilab {

struct EstimateRow {
  std::string name;
  int slice = 0;
  double t = 0.0;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  bool lower_bound = false;  // pass means lhs >= rhs - slack; otherwise lhs <= rhs + slack
  bool pass = false;
};

struct SliceDiagnostics {
  double t = 0.0;
  double R0_l1 = 0.0;
  double R1_l1 = 0.0;
  double q_lp = 0.0;       // time-corrector L^p norm
  double wc_lpp = 0.0;     // divergence corrector L^{p'} norm
  double theta_c = 0.0;    // |density mean correction|
  double q_c = 0.0;        // |time-corrector mean correction|
  double measured_M = 0.0;
  bool measured_M_defined = false;
  double time_slack = 0.0;  // Richardson estimate of the dt^2 defect error
};

struct PerturbationReport {
  std::vector<EstimateRow> rows;
  std::vector<SliceDiagnostics> slices;
  MikadoParams params;
  double delta = 0.0;
  double eps = 0.0;

  bool all_pass() const;
  const EstimateRow* worst(const std::string& name) const;
};

struct EstimateFailure : Error {
  PerturbationReport report;
  EstimateFailure(const std::string& what, PerturbationReport rep)
      : Error(what), report(std::move(rep)) {}
};

struct PerturbOptions {
  double c_eps = 0.0;      // cutoff scale factor; 0 selects the default 1/(4d)
  double tol_mean = 1e-10;
  bool throw_on_failure = true;
};

/// One convex-integration step.  Builds the principal perturbation from
/// Mikado pairs under the defect-driven cutoffs, adds the time corrector and
/// mean/divergence corrections, recomputes the defect numerically, and
/// evaluates every inductive estimate at every time sample.
std::pair<TransportSubsolution, PerturbationReport> perturb(const TransportSubsolution& sub0,
                                                            double delta,
                                                            const MikadoParams& params,
                                                            const PerturbOptions& opt = {});

/// sup_{xi in B1(0)\{0}} | |e1+xi|^p - 1 - |xi|^p | / (|xi| + |xi|^{p-1}),
/// sampled on the plane spanned by e1 and xi, refined until the change per
/// round drops below 1e-4.
double decoupling_constant(double p);

struct DecouplingCheck {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

/// | ||f+g||_p^p - ||f||_p^p - ||g||_p^p | against the two-regime bound with
/// constant decoupling_constant(p).
DecouplingCheck check_decoupling(const ScalarField& f, const ScalarField& g, double p);

/// The two splitting inequalities (density in L^p, field in L^{p'}) at every
/// time sample of the pair (sub0, sub1); both must hold within delta.
std::vector<EstimateRow> check_energy_splitting(const TransportSubsolution& sub0,
                                                const TransportSubsolution& sub1, double delta);

struct CalibrationResult {
  double measured_M = 0.0;
  bool defined = false;
  int corpus_size = 0;
};

/// Empirical constant for the energy estimate: max over the corpus and over
/// time of (energy increment) / ||R0||_L1.
CalibrationResult calibrate_M(const std::vector<TransportSubsolution>& corpus, double delta,
                              const MikadoParams& params, const PerturbOptions& opt = {});

}  // namespace cilab
