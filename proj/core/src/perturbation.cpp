#include "cilab/perturbation.hpp"

#include <algorithm>
#include <cmath>

#include "cilab/norms.hpp"
#include "cilab/spectral.hpp"

namespace cilab {

bool PerturbationReport::all_pass() const {
  for (const auto& r : rows)
    if (!r.pass) return false;
  return true;
}

const EstimateRow* PerturbationReport::worst(const std::string& name) const {
  const EstimateRow* w = nullptr;
  for (const auto& r : rows) {
    if (r.name != name) continue;
    if (!w) {
      w = &r;
      continue;
    }
    double margin_r = r.lower_bound ? r.lhs - r.rhs : r.rhs - r.lhs;
    double margin_w = w->lower_bound ? w->lhs - w->rhs : w->rhs - w->lhs;
    if (margin_r < margin_w) w = &r;
  }
  return w;
}

namespace {

ScalarField signed_cutoff_coeff(const ScalarField& chi, const ScalarField& r0j, double q,
                                double scale) {
  ScalarField out(chi.grid());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double mag = std::pow(std::abs(r0j[i]), q);
    double sgn = r0j[i] < 0 ? -1.0 : 1.0;
    out[i] = scale * chi[i] * sgn * mag;
  }
  return out;
}

ScalarField unsigned_cutoff_coeff(const ScalarField& chi, const ScalarField& r0j, double q,
                                  double scale) {
  ScalarField out(chi.grid());
  for (std::size_t i = 0; i < out.size(); ++i)
    out[i] = scale * chi[i] * std::pow(std::abs(r0j[i]), q);
  return out;
}

double product_l1(const ScalarField& ds, const VectorField& du) {
  std::vector<double> mag(ds.size(), 0.0);
  for (int a = 0; a < du.components(); ++a) {
    const auto& c = du.comp(a);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += c[i] * c[i];
  }
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(ds[i]) * std::sqrt(mag[i]);
  return compensated_sum(mag) * ds.grid().cell_volume();
}

// stride-2 centered time derivative where available; falls back to stride 1
ScalarField coarse_time_derivative(const std::vector<ScalarField>& series, const TimeGrid& tg,
                                   int i) {
  const int m = tg.samples();
  if (i >= 2 && i <= m - 3) {
    ScalarField out(series[i].grid());
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = (series[i + 2][k] - series[i - 2][k]) / (4.0 * tg.dt());
    return out;
  }
  return time_derivative(series, tg, i);
}

}  // namespace

std::pair<TransportSubsolution, PerturbationReport> perturb(const TransportSubsolution& sub0,
                                                            double delta,
                                                            const MikadoParams& params_in,
                                                            const PerturbOptions& opt) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  const TorusGrid& grid = sub0.grid();
  const int d = grid.dim();
  const int m = sub0.samples();
  const double p = sub0.p;
  const double pp = p / (p - 1.0);

  MikadoParams params = params_in;
  params.p = sub0.p;
  params.p_tilde = sub0.p_tilde;
  params.d = d;
  const double c_eps = opt.c_eps > 0.0 ? opt.c_eps : 1.0 / (4.0 * d);
  const double eps = c_eps * delta;
  params.eps = eps;
  params.validate();

  // directions whose defect component ever exceeds the cutoff floor
  std::vector<int> active;
  for (int j = 0; j < d; ++j) {
    double sup = 0.0;
    for (int i = 0; i < m; ++i) sup = std::max(sup, lp_norm(sub0.R[i].comp(j), kInfExponent));
    if (sup > eps) active.push_back(j);
  }

  SupportLayout layout = place_supports(params, grid, active);
  const double s = params.balance;
  const double omega = params.omega();
  const long nu = params.nu();
  TransverseBump bump(params.mu(), d);
  AxialProfile axial(params.axial, params.axial_conc);
  const int freq = params.train_freq();

  TransportSubsolution sub1{sub0.time_grid, {}, {}, {}, sub0.M, sub0.p, sub0.p_tilde};
  sub1.rho.reserve(m);
  sub1.u.reserve(m);

  PerturbationReport report;
  report.params = params;
  report.delta = delta;
  report.eps = eps;
  report.slices.resize(m);

  for (int i = 0; i < m; ++i) {
    const double t = sub0.time_grid.t(i);
    ScalarField theta(grid);
    ScalarField q(grid);
    VectorField w(grid);

    for (int j : active) {
      ScalarField chi = cutoff_chi(sub0.R[i].comp(j), eps);
      if (lp_norm(chi, kInfExponent) == 0.0) continue;
      MikadoPair pair = build_pair(grid, params, layout, j, t);
      ScalarField a = signed_cutoff_coeff(chi, sub0.R[i].comp(j), 1.0 / p, s);
      ScalarField b = unsigned_cutoff_coeff(chi, sub0.R[i].comp(j), 1.0 / pp, 1.0 / s);
      for (std::size_t k = 0; k < theta.size(); ++k) {
        theta[k] += a[k] * pair.theta[k];
        w.comp(j)[k] += b[k] * pair.field.comp(j)[k];
      }
      if (params.axial != AxialKind::Flat && omega > 0.0) {
        // time corrector: (1/omega) chi^2 R0^j F(transverse) (psi^2(moving) - 1)
        ScalarField ftr = bump.field(grid, j, layout.transverse_offset[j], freq);
        const int n = grid.points_per_axis();
        std::vector<double> osc(n);
        double shift = omega * t + layout.axial_phase[j];
        for (int ii = 0; ii < n; ++ii)
          osc[ii] = axial.psi_squared(nu * (grid.coord(ii) - shift)) - 1.0;
        std::array<int, 3> idx{0, 0, 0};
        std::size_t k = 0;
        const ScalarField& r0j = sub0.R[i].comp(j);
        while (true) {
          double hj = chi[k] * chi[k] * r0j[k];
          q[k] += hj * ftr[k] * osc[idx[j]] / omega;
          int ax = d - 1;
          ++k;
          while (ax >= 0 && ++idx[ax] == n) idx[ax--] = 0;
          if (ax < 0) break;
        }
      }
    }

    VectorField w_hat = leray_project(w);
    VectorField w_c = w_hat - w;

    double theta_c = -mean(theta);
    double q_c = -mean(q);

    ScalarField rho1 = sub0.rho[i] + theta + q;
    shift_by_constant(rho1, theta_c + q_c);
    sub1.rho.push_back(std::move(rho1));
    sub1.u.push_back(sub0.u[i] + w_hat);

    auto& diag = report.slices[i];
    diag.t = t;
    diag.R0_l1 = lp_norm(sub0.R[i], 1.0);
    diag.q_lp = lp_norm(q, p);
    diag.wc_lpp = lp_norm(w_c, pp);
    diag.theta_c = std::abs(theta_c);
    diag.q_c = std::abs(q_c);
  }

  sub1.R = compute_defect(sub1.rho, sub1.u, sub1.time_grid, opt.tol_mean);

  // Richardson estimate of the time-discretization error feeding R1
  std::vector<double> tslack(m, 0.0);
  double tslack_max = 0.0;
  for (int i = 2; i <= m - 3; ++i) {
    ScalarField fine = time_derivative(sub1.rho, sub1.time_grid, i);
    ScalarField coarse = coarse_time_derivative(sub1.rho, sub1.time_grid, i);
    ScalarField diff = coarse - fine;
    double drift = mean(diff);
    shift_by_constant(diff, -drift);
    VectorField err = antidivergence(diff, 1.0);  // mean already removed
    tslack[i] = lp_norm(err, 1.0) / 3.0;
    tslack_max = std::max(tslack_max, tslack[i]);
  }
  for (int i = 0; i < m; ++i) {
    if (i < 2 || i > m - 3) tslack[i] = tslack_max;
    report.slices[i].time_slack = tslack[i];
  }

  const double quad_eps = 1e-12;
  auto push = [&](const std::string& name, int i, double lhs, double rhs, double slack,
                  bool lower) {
    EstimateRow row{name, i, sub0.time_grid.t(i), lhs, rhs, slack + quad_eps * (1.0 + std::abs(lhs) + std::abs(rhs)), lower, false};
    row.pass = lower ? (row.lhs >= row.rhs - row.slack) : (row.lhs <= row.rhs + row.slack);
    report.rows.push_back(row);
  };

  for (int i = 0; i < m; ++i) {
    ScalarField drho = sub1.rho[i] - sub0.rho[i];
    VectorField du = sub1.u[i] - sub0.u[i];
    double r0_l1 = report.slices[i].R0_l1;
    double r1_l1 = lp_norm(sub1.R[i], 1.0);
    report.slices[i].R1_l1 = r1_l1;

    double energy_lhs = std::pow(lp_norm(drho, p), p) / p + std::pow(lp_norm(du, pp), pp) / pp;
    push("energy", i, energy_lhs, sub0.M * r0_l1, 0.0, false);
    report.slices[i].measured_M_defined = r0_l1 > 0.0;
    report.slices[i].measured_M = r0_l1 > 0.0 ? energy_lhs / r0_l1 : 0.0;

    push("sobolev_defect", i, sobolev_norm(du, sub0.p_tilde) + r1_l1, delta, tslack[i], false);
    push("l1_distance", i, lp_norm(drho, 1.0) + lp_norm(du, 1.0), delta, 0.0, false);
    push("product_lower", i, product_l1(drho, du), r0_l1 - delta, 0.0, true);

    double split_rho = std::abs(std::pow(lp_norm(sub1.rho[i], p), p) -
                                std::pow(lp_norm(sub0.rho[i], p), p) -
                                std::pow(lp_norm(drho, p), p));
    push("energy_split_rho", i, split_rho, delta, 0.0, false);
    double split_u = std::abs(std::pow(lp_norm(sub1.u[i], pp), pp) -
                              std::pow(lp_norm(sub0.u[i], pp), pp) -
                              std::pow(lp_norm(du, pp), pp));
    push("energy_split_u", i, split_u, delta, 0.0, false);
  }

  if (opt.throw_on_failure && !report.all_pass()) {
    const EstimateRow* bad = nullptr;
    for (const auto& r : report.rows)
      if (!r.pass) {
        bad = &r;
        break;
      }
    throw EstimateFailure("estimate '" + bad->name + "' failed at t = " + std::to_string(bad->t) +
                              ": lhs = " + std::to_string(bad->lhs) +
                              ", rhs = " + std::to_string(bad->rhs),
                          std::move(report));
  }
  return {std::move(sub1), std::move(report)};
}

double decoupling_constant(double p) {
  if (!(p >= 1.0)) throw ConfigError("exponent must satisfy p >= 1");
  auto ratio = [p](double r, double theta) {
    double norm2 = 1.0 + 2.0 * r * std::cos(theta) + r * r;
    double num = std::abs(std::pow(norm2, p / 2.0) - 1.0 - std::pow(r, p));
    double den = r + std::pow(r, p - 1.0);
    return num / den;
  };
  double lo_r = 1e-6, hi_r = 1.0, lo_t = 0.0, hi_t = kTwoPi / 2.0;
  double best = 0.0, br = 1.0, bt = 0.0;
  const int N = 160;
  double prev = -1.0;
  for (int round = 0; round < 40; ++round) {
    best = 0.0;
    for (int i = 0; i <= N; ++i) {
      double r = lo_r + (hi_r - lo_r) * i / N;
      if (r <= 0.0) continue;
      for (int j = 0; j <= N; ++j) {
        double th = lo_t + (hi_t - lo_t) * j / N;
        double v = ratio(r, th);
        if (v > best) {
          best = v;
          br = r;
          bt = th;
        }
      }
    }
    if (prev >= 0.0 && std::abs(best - prev) < 1e-4 && round >= 2) break;
    prev = best;
    double wr = (hi_r - lo_r) * 2.0 / N, wt = (hi_t - lo_t) * 2.0 / N;
    lo_r = std::max(1e-9, br - wr);
    hi_r = std::min(1.0, br + wr);
    lo_t = std::max(0.0, bt - wt);
    hi_t = std::min(kTwoPi / 2.0, bt + wt);
  }
  return best;
}

DecouplingCheck check_decoupling(const ScalarField& f, const ScalarField& g, double p) {
  if (!(p >= 1.0)) throw ConfigError("exponent must satisfy p >= 1");
  double cp = decoupling_constant(p);
  DecouplingCheck out;
  ScalarField sum = f + g;
  out.lhs = std::abs(std::pow(lp_norm(sum, p), p) - std::pow(lp_norm(f, p), p) -
                     std::pow(lp_norm(g, p), p));
  if (p < 2.0) {
    double q = 1.0 / (2.0 - p);
    out.rhs = cp * (lp_norm(f, q) * std::pow(lp_norm(g, 1.0), p - 1.0) +
                    std::pow(lp_norm(f, kInfExponent), p - 1.0) * lp_norm(g, 1.0));
  } else {
    double gg = p == 2.0 ? lp_norm(g, 1.0) : std::pow(lp_norm(g, p - 1.0), p - 1.0);
    out.rhs = cp * (lp_norm(f, kInfExponent) * gg +
                    std::pow(lp_norm(f, kInfExponent), p - 1.0) * lp_norm(g, 1.0));
  }
  out.pass = out.lhs <= out.rhs * (1.0 + 1e-9) + 1e-12;
  return out;
}

std::vector<EstimateRow> check_energy_splitting(const TransportSubsolution& sub0,
                                                const TransportSubsolution& sub1, double delta) {
  std::vector<EstimateRow> rows;
  const double p = sub0.p;
  const double pp = p / (p - 1.0);
  for (int i = 0; i < sub0.samples(); ++i) {
    ScalarField drho = sub1.rho[i] - sub0.rho[i];
    VectorField du = sub1.u[i] - sub0.u[i];
    EstimateRow r{"energy_split_rho", i, sub0.time_grid.t(i),
                  std::abs(std::pow(lp_norm(sub1.rho[i], p), p) -
                           std::pow(lp_norm(sub0.rho[i], p), p) - std::pow(lp_norm(drho, p), p)),
                  delta, 1e-12, false, false};
    r.pass = r.lhs <= r.rhs + r.slack;
    rows.push_back(r);
    EstimateRow ru{"energy_split_u", i, sub0.time_grid.t(i),
                   std::abs(std::pow(lp_norm(sub1.u[i], pp), pp) -
                            std::pow(lp_norm(sub0.u[i], pp), pp) - std::pow(lp_norm(du, pp), pp)),
                   delta, 1e-12, false, false};
    ru.pass = ru.lhs <= ru.rhs + ru.slack;
    rows.push_back(ru);
  }
  return rows;
}

CalibrationResult calibrate_M(const std::vector<TransportSubsolution>& corpus, double delta,
                              const MikadoParams& params, const PerturbOptions& opt) {
  CalibrationResult out;
  out.corpus_size = static_cast<int>(corpus.size());
  PerturbOptions local = opt;
  local.throw_on_failure = false;
  for (const auto& sub : corpus) {
    auto [sub1, rep] = perturb(sub, delta, params, local);
    for (const auto& diag : rep.slices) {
      if (!diag.measured_M_defined) continue;
      out.defined = true;
      out.measured_M = std::max(out.measured_M, diag.measured_M);
    }
  }
  return out;
}

}  // namespace cilab
