#pragma once

#include <array>
#include <string>
#include <vector>

#include "cilab/perturbation.hpp"
#include "cilab/transport.hpp"

namespace cilab {

/// Every inequality constant of the two-step lifting scheme, in one place.
struct LiftingConstants {
  static constexpr int margin_slack = 42;       // i >= M||R|| + 42 M delta
  static constexpr int delta_divisor = 43;      // delta = margin / (43 M)
  static constexpr int band_low_offset = 16;    // chi > i/M - ||R|| - 16 delta
  static constexpr int band_high_offset = 8;    // chi < i/M - ||R|| - 8 delta
  static constexpr int band_feasible = 34;      // upper band edge >= 34 delta
  static constexpr int step_distance = 2;       // each inner step moves <= 2 delta in d_X
  static constexpr int total_distance = 4;      // d_X(sub1, sub) <= 4 delta
  static constexpr int step1_lb_slack = 2;      // E~ >= E + ||R|| - 2 delta
  static constexpr int step2_ub_slack = 2;      // E1 <= E + M(chi + ||R||) + (M+2) delta
  static constexpr int step2_lb_slack = 5;      // E1 >= E + chi + ||R|| - 5 delta
  static constexpr int final_margin = 4;        // E1 + M||R1|| <= e - 4 M delta
  static constexpr int improvement_slack = 21;  // E1 >= E + i/M - 21 delta
};

/// delta = min margin / (43 M); NotASubsolutionError when the margin is not
/// strictly positive.
double choose_delta(const TransportSubsolution& sub, const EnergyProfile& e);

/// Smooth chi: [0, T] -> [0, inf) inside the band
///   ( i/M - ||R|| - 16 delta , i/M - ||R|| - 8 delta ),
/// low-pass smoothed in time and re-verified; BandViolationError if the band
/// cannot be kept.
std::vector<double> schedule_chi(const TransportSubsolution& sub, const EnergyProfile& e,
                                 double M, double delta);

struct StepOptions {
  std::array<double, 3> pump_direction{1.0, 0.0, 0.0};
  double c_eps = 0.0;        // inner cutoff factor; 0 selects the default 1/(4d)
  double stall_fraction = 0.25;
  bool throw_on_failure = true;
};

struct StepReport {
  PerturbationReport first;
  PerturbationReport second;
  std::vector<double> chi;
  double delta = 0.0;
  double M = 1.0;
  double I_before = 0.0;
  double I_after = 0.0;
  double contraction_ratio = 0.0;
  double dx = 0.0;
  double successor_margin = 0.0;
  double slack = 0.0;
  std::vector<EstimateRow> chain;  // re-evaluated inequality chains
  bool all_pass() const;
};

/// One quantitative perturbation step: cancel the defect, pump energy through
/// a constant defect chi(t) v / |T^d|, cancel again, and re-evaluate every
/// inequality of the scheme.
std::pair<TransportSubsolution, StepReport> quantitative_step(const TransportSubsolution& sub,
                                                              const EnergyProfile& e, double M,
                                                              double delta,
                                                              const MikadoParams& params,
                                                              const StepOptions& opt = {});

struct IterationRow {
  int k = 0;
  double delta_k = 0.0;
  double I_k = 0.0;
  double defect_l1_sup = 0.0;
  double dx_increment = 0.0;
  double weak_residual_value = 0.0;
  double margin = 0.0;
  double contraction_ratio = 0.0;
  double slack = 0.0;
  bool pass = false;
};

struct IterationTrace {
  double I0 = 0.0;
  double delta1 = 0.0;
  std::vector<IterationRow> rows;
  bool stalled = false;
  std::string stall_reason;
};

struct IterationSchedule {
  MikadoParams base;
  /// Per-iteration overrides; when absent, lambda doubles each iteration and
  /// nu is scaled to keep lambda*mu/nu fixed.
  std::vector<MikadoParams> explicit_params;

  MikadoParams params_for(int k) const;  // k = 1, 2, ...
};

/// The lifting sequence: independent quantitative steps from the same input
/// with delta_k = 2^{1-k} delta_1, traced.
IterationTrace run_iteration(const TransportSubsolution& sub0, const EnergyProfile& e, double M,
                             int k_max, const IterationSchedule& schedule,
                             const std::vector<SpaceTimeTest>& tests, const StepOptions& opt = {});

}  // namespace cilab
