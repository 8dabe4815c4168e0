#include "cilab/baire.hpp"

#include <algorithm>
#include <cmath>

#include "cilab/norms.hpp"

namespace cilab {

namespace {
using LC = LiftingConstants;
}

double choose_delta(const TransportSubsolution& sub, const EnergyProfile& e) {
  MarginReport rep = admissibility(sub, e);
  if (!(rep.min_margin > 0.0)) throw NotASubsolutionError(rep.min_margin);
  double delta = rep.min_margin / (LC::delta_divisor * sub.M);
  // re-check the strict lower bound i >= M||R|| + 42 M delta on the grid
  for (const auto& row : rep.rows) {
    double lhs = row.profile - row.energy;  // i(t)
    double rhs = sub.M * row.defect_l1 + LC::margin_slack * sub.M * delta;
    if (!(lhs > rhs)) throw NotASubsolutionError(lhs - rhs);
  }
  return delta;
}

std::vector<double> schedule_chi(const TransportSubsolution& sub, const EnergyProfile& e,
                                 double M, double delta) {
  const int m = sub.samples();
  std::vector<double> lo(m), hi(m), chi(m);
  for (int i = 0; i < m; ++i) {
    double it = gap_i(sub, e, i);
    double r = lp_norm(sub.R[i], 1.0);
    lo[i] = it / M - r - LC::band_low_offset * delta;
    hi[i] = it / M - r - LC::band_high_offset * delta;
    if (!(hi[i] >= LC::band_feasible * delta))
      throw BandViolationError("upper band edge " + std::to_string(hi[i]) + " below 34 delta");
    chi[i] = 0.5 * (lo[i] + hi[i]);
  }

  auto smooth = [](const std::vector<double>& v) {
    std::vector<double> out = v;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
      out[i] = 0.25 * v[i - 1] + 0.5 * v[i] + 0.25 * v[i + 1];
    return out;
  };
  auto in_band = [&](const std::vector<double>& v) {
    for (int i = 0; i < m; ++i)
      if (!(v[i] > lo[i] && v[i] < hi[i] && v[i] >= 0.0)) return false;
    return true;
  };

  std::vector<double> smoothed = smooth(chi);
  if (in_band(smoothed)) return smoothed;
  if (in_band(chi)) return chi;  // retry with the raw midpoint (weakest filter)
  throw BandViolationError("smoothed schedule exits the band");
}

bool StepReport::all_pass() const {
  if (!first.all_pass() || !second.all_pass()) return false;
  for (const auto& r : chain)
    if (!r.pass) return false;
  return true;
}

std::pair<TransportSubsolution, StepReport> quantitative_step(const TransportSubsolution& sub,
                                                              const EnergyProfile& e, double M,
                                                              double delta,
                                                              const MikadoParams& params,
                                                              const StepOptions& opt) {
  const TorusGrid& grid = sub.grid();
  const int d = grid.dim();
  const int m = sub.samples();
  const double volume = grid.volume();

  StepReport rep;
  rep.delta = delta;
  rep.M = M;
  rep.I_before = gap_I(sub, e);

  // normalized pump direction
  std::array<double, 3> v = opt.pump_direction;
  double vn = 0.0;
  for (int a = 0; a < d; ++a) vn += v[a] * v[a];
  vn = std::sqrt(vn);
  if (!(vn > 0)) throw ConfigError("pump direction must be a nonzero vector");
  for (int a = 0; a < d; ++a) v[a] /= vn;

  PerturbOptions popt;
  popt.c_eps = opt.c_eps;
  popt.throw_on_failure = opt.throw_on_failure;

  // step 1: reduce the existing defect below delta
  auto [sub_t, rep1] = perturb(sub, delta, params, popt);
  rep.first = rep1;

  // pump schedule from the original subsolution
  rep.chi = schedule_chi(sub, e, M, delta);

  // intermediate triple: same fields, defect augmented by the constant field;
  // constants are divergence free, so the defect equation still holds
  TransportSubsolution sub_mid = sub_t;
  for (int i = 0; i < m; ++i)
    for (int a = 0; a < d; ++a)
      shift_by_constant(sub_mid.R[i].comp(a), rep.chi[i] * v[a] / volume);

  // the constant part must clear the cutoff: |Rbar . v| >= chi/|T^d| - |R~|
  double chi_min = *std::min_element(rep.chi.begin(), rep.chi.end());
  PerturbOptions popt2 = popt;
  double ceps_default = popt.c_eps > 0 ? popt.c_eps : 1.0 / (4.0 * d);
  popt2.c_eps = std::min(ceps_default, chi_min / (volume * delta) / 8.0);

  auto [sub1, rep2] = perturb(sub_mid, delta, params, popt2);
  rep.second = rep2;

  rep.I_after = gap_I(sub1, e);
  rep.contraction_ratio = rep.I_before > 0 ? rep.I_after / rep.I_before : 0.0;
  rep.dx = metric_dX(sub1, sub);

  // slack: inner discretization budgets
  double slack = 0.0;
  for (const auto& s : rep.first.slices) slack = std::max(slack, s.time_slack);
  for (const auto& s : rep.second.slices) slack = std::max(slack, s.time_slack);
  slack += 1e-9 * (1.0 + rep.I_before);
  rep.slack = slack;

  auto push = [&](const std::string& name, int i, double lhs, double rhs, bool lower) {
    EstimateRow row{name, i, sub.time_grid.t(i), lhs, rhs, slack, lower, false};
    row.pass = lower ? (lhs >= rhs - row.slack) : (lhs <= rhs + row.slack);
    rep.chain.push_back(row);
  };

  double successor_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < m; ++i) {
    double t = sub.time_grid.t(i);
    double E0 = energy_E(sub, i);
    double Et = energy_E(sub_t, i);
    double E1 = energy_E(sub1, i);
    double R0 = lp_norm(sub.R[i], 1.0);
    double Rt = lp_norm(sub_t.R[i], 1.0);
    double Rbar = lp_norm(sub_mid.R[i], 1.0);
    double R1 = lp_norm(sub1.R[i], 1.0);
    double it = e(t) - E0;

    // band feasibility and the norm bracket of the augmented defect
    push("band_feasible", i, it / M - R0 - LC::band_high_offset * delta,
         LC::band_feasible * delta, true);
    if (Rt <= delta + slack) {
      push("rbar_bracket_low", i, Rbar, rep.chi[i] - delta, true);
      push("rbar_bracket_high", i, Rbar, rep.chi[i] + delta, false);
    }

    push("step1_ub", i, Et, E0 + M * R0 + delta, false);
    push("step1_lb", i, Et, E0 + R0 - LC::step1_lb_slack * delta, true);
    push("step2_ub", i, E1, E0 + M * (rep.chi[i] + R0) + (M + LC::step2_ub_slack) * delta, false);
    push("step2_lb", i, E1, E0 + rep.chi[i] + R0 - LC::step2_lb_slack * delta, true);
    push("final_margin", i, E1 + M * R1, e(t) - LC::final_margin * M * delta, false);
    push("improvement_lb", i, E1, E0 + it / M - LC::improvement_slack * delta, true);
    push("improvement", i, e(t) - E1, (1.0 - 1.0 / (2.0 * M)) * it, false);

    successor_margin = std::min(successor_margin, e(t) - E1 - M * R1);
  }
  rep.successor_margin = successor_margin;

  if (opt.throw_on_failure) {
    for (const auto& r : rep.chain)
      if (!r.pass)
        throw EstimateFailure("step inequality '" + r.name + "' failed at t = " +
                                  std::to_string(r.t),
                              rep.second);
  }
  return {std::move(sub1), std::move(rep)};
}

MikadoParams IterationSchedule::params_for(int k) const {
  if (!explicit_params.empty()) {
    int idx = std::min<int>(k - 1, static_cast<int>(explicit_params.size()) - 1);
    return explicit_params[idx];
  }
  MikadoParams p = base;
  double factor = std::pow(2.0, k - 1);
  p.lambda = static_cast<int>(base.lambda * factor);
  // keep lambda*mu/nu fixed along the sweep
  double ratio_mu = p.mu() / base.mu();
  if (base.nu_override > 0)
    p.nu_override = std::lround(base.nu_override * factor * ratio_mu);
  return p;
}

IterationTrace run_iteration(const TransportSubsolution& sub0, const EnergyProfile& e, double M,
                             int k_max, const IterationSchedule& schedule,
                             const std::vector<SpaceTimeTest>& tests, const StepOptions& opt) {
  if (k_max < 1) throw ConfigError("k_max must be >= 1");
  IterationTrace trace;
  trace.I0 = gap_I(sub0, e);
  trace.delta1 = choose_delta(sub0, e);

  for (int k = 1; k <= k_max; ++k) {
    double delta_k = std::pow(2.0, 1 - k) * trace.delta1;
    MikadoParams params = schedule.params_for(k);
    StepOptions sopt = opt;
    sopt.throw_on_failure = false;
    auto [sub_k, srep] = quantitative_step(sub0, e, M, delta_k, params, sopt);

    IterationRow row;
    row.k = k;
    row.delta_k = delta_k;
    row.I_k = srep.I_after;
    double rsup = 0.0;
    for (int i = 0; i < sub_k.samples(); ++i) rsup = std::max(rsup, lp_norm(sub_k.R[i], 1.0));
    row.defect_l1_sup = rsup;
    row.dx_increment = srep.dx;
    row.weak_residual_value = tests.empty() ? 0.0 : weak_residual(sub_k, tests);
    row.margin = srep.successor_margin;
    row.contraction_ratio = srep.contraction_ratio;
    row.slack = srep.slack;
    row.pass = srep.all_pass();
    trace.rows.push_back(row);

    // diagnosed stall: slack eats more than the configured fraction of the
    // contraction target gap
    double target_gap = (1.0 - 1.0 / (2.0 * M)) * trace.I0 - row.I_k;
    if (srep.slack > opt.stall_fraction * std::max(std::abs(target_gap), 1e-300)) {
      trace.stalled = true;
      trace.stall_reason = "slack " + std::to_string(srep.slack) + " exceeds " +
                           std::to_string(opt.stall_fraction) + " of contraction gap " +
                           std::to_string(target_gap) + " at k = " + std::to_string(k);
      if (opt.throw_on_failure) throw DiagnosedStallError(trace.stall_reason);
      break;
    }
    if (!row.pass && opt.throw_on_failure)
      throw EstimateFailure("iteration step " + std::to_string(k) + " failed", srep.second);
  }
  return trace;
}

}  // namespace cilab
