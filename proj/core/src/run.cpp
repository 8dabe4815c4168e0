#include "cilab/run.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include <nlohmann/json.hpp>

#include "cilab/baire.hpp"
#include "cilab/csv.hpp"
#include "cilab/errors.hpp"
#include "cilab/norms.hpp"
#include "cilab/spectral.hpp"
#include "cilab/ns.hpp"
#include "cilab/perturbation.hpp"
#include "cilab/tfd_io.hpp"
#include "cilab/transport.hpp"

namespace cilab {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunContext {
  const RunConfig& cfg;
  fs::path dir;
  std::vector<std::string> outputs;

  std::string path(const std::string& name) {
    outputs.push_back(name);
    return (dir / name).string();
  }
};

MikadoParams sweep_params(const RunConfig& cfg, std::size_t i) {
  MikadoParams p = cfg.mikado;
  p.p = cfg.p;
  p.p_tilde = cfg.p_tilde;
  p.d = cfg.grid_d;
  if (i < cfg.sweep.lambdas.size()) p.lambda = cfg.sweep.lambdas[i];
  if (i < cfg.sweep.mus.size()) p.mu_override = cfg.sweep.mus[i];
  if (i < cfg.sweep.nus.size()) p.nu_override = cfg.sweep.nus[i];
  if (i < cfg.sweep.omegas.size()) p.omega_override = cfg.sweep.omegas[i];
  return p;
}

std::size_t sweep_size(const RunConfig& cfg) {
  return std::max<std::size_t>(1, cfg.sweep.lambdas.size());
}

std::pair<TransportSubsolution, EnergyProfile> demo_from_config(const RunConfig& cfg) {
  TorusGrid grid(cfg.grid_d, cfg.grid_n);
  TimeGrid tg(cfg.time_T, cfg.time_m);
  DemoSpec spec;
  spec.rho_amp = cfg.demo.rho_amp;
  spec.rho_drift = cfg.demo.rho_drift * cfg.demo.defect_scale;
  spec.u_amp = cfg.demo.u_amp * cfg.demo.defect_scale;
  spec.margin = cfg.demo.margin;
  spec.p = cfg.p;
  spec.p_tilde = cfg.p_tilde;
  spec.M = cfg.M;
  auto [sub, e] = make_demo_transport(grid, tg, spec);
  if (!cfg.profile_poly.empty() || !cfg.profile_cosine.empty())
    return {std::move(sub), EnergyProfile(cfg.profile_poly, cfg.profile_cosine, cfg.time_T)};
  return {std::move(sub), std::move(e)};
}

void write_estimates_csv(RunContext& ctx, const std::string& name,
                         const std::vector<std::pair<int, PerturbationReport>>& reports) {
  CsvWriter csv(ctx.path(name), "cilab-estimates-v1",
                {"lambda", "estimate", "slice", "t", "lhs", "rhs", "slack", "pass"});
  for (const auto& [lambda, rep] : reports) {
    for (const auto& row : rep.rows)
      csv.row({CsvWriter::num(static_cast<long>(lambda)), row.name,
               CsvWriter::num(static_cast<long>(row.slice)), CsvWriter::num(row.t),
               CsvWriter::num(row.lhs), CsvWriter::num(row.rhs), CsvWriter::num(row.slack),
               row.pass ? "1" : "0"});
    for (const auto& d : rep.slices) {
      auto diag = [&](const std::string& label, double value) {
        csv.row({CsvWriter::num(static_cast<long>(lambda)), label, "-", CsvWriter::num(d.t),
                 CsvWriter::num(value), "-", "-", "-"});
      };
      diag("corrector_q_lp", d.q_lp);
      diag("corrector_wc_lpp", d.wc_lpp);
      diag("corrector_theta_c", d.theta_c);
      diag("corrector_q_c", d.q_c);
      diag("defect_before_l1", d.R0_l1);
      diag("defect_after_l1", d.R1_l1);
      diag("measured_M", d.measured_M);
      diag("time_slack", d.time_slack);
    }
  }
}

void write_manifest(RunContext& ctx, const std::string& status) {
  json m;
  m["schema-version"] = "cilab-manifest-v1";
  m["config"] = json::parse(ctx.cfg.to_json());
  m["config_hash"] = ctx.cfg.hash();
  m["status"] = status;
  m["outputs"] = ctx.outputs;
  std::ofstream out(ctx.dir / "manifest.json");
  out << m.dump(2) << "\n";
}

int run_transport_step(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  auto [sub0, e] = demo_from_config(cfg);
  double delta = cfg.delta ? *cfg.delta : choose_delta(sub0, e);

  std::vector<std::pair<int, PerturbationReport>> reports;
  PerturbOptions opt;
  opt.throw_on_failure = false;
  TransportSubsolution last = sub0;
  for (std::size_t i = 0; i < sweep_size(cfg); ++i) {
    MikadoParams params = sweep_params(cfg, i);
    auto [sub1, rep] = perturb(sub0, delta, params, opt);
    reports.emplace_back(params.lambda, std::move(rep));
    last = std::move(sub1);
  }
  write_estimates_csv(ctx, "estimates.csv", reports);

  if (cfg.dump_every > 0) {
    for (int i = 0; i < last.samples(); i += cfg.dump_every) {
      write_tfd(ctx.path("rho_" + std::to_string(i) + ".tfd"), last.rho[i], i);
      write_tfd(ctx.path("u_" + std::to_string(i) + ".tfd"), last.u[i], i);
      write_tfd(ctx.path("R_" + std::to_string(i) + ".tfd"), last.R[i], i);
    }
  }

  json summary;
  summary["delta"] = delta;
  summary["margin"] = admissibility(sub0, e).min_margin;
  bool all = true;
  json per_lambda = json::array();
  for (const auto& [lambda, rep] : reports) {
    json entry;
    entry["lambda"] = lambda;
    entry["pass"] = rep.all_pass();
    double rsup = 0.0, qsup = 0.0;
    for (const auto& d : rep.slices) {
      rsup = std::max(rsup, d.R1_l1);
      qsup = std::max(qsup, d.q_lp + d.wc_lpp + d.theta_c + d.q_c);
    }
    entry["defect_after_sup"] = rsup;
    entry["corrector_sup"] = qsup;
    per_lambda.push_back(entry);
    all = all && rep.all_pass();
  }
  summary["sweep"] = per_lambda;
  {
    std::ofstream out(ctx.path("summary.json"));
    out << summary.dump(2) << "\n";
  }
  write_manifest(ctx, all ? "ok" : "estimate-failure");
  return all ? 0 : 3;
}

int run_transport_iterate(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  auto [sub0, e] = demo_from_config(cfg);
  IterationSchedule schedule;
  schedule.base = cfg.mikado;
  schedule.base.p = cfg.p;
  schedule.base.p_tilde = cfg.p_tilde;
  schedule.base.d = cfg.grid_d;
  for (std::size_t i = 0; i < cfg.sweep.lambdas.size(); ++i)
    schedule.explicit_params.push_back(sweep_params(cfg, i));

  auto tests = make_standard_tests(sub0.grid(), sub0.time_grid, 5, cfg.seed);
  StepOptions opt;
  opt.throw_on_failure = false;
  IterationTrace trace = run_iteration(sub0, e, cfg.M, cfg.k_max, schedule, tests, opt);

  CsvWriter csv(ctx.path("trace.csv"), "cilab-trace-v1",
                {"k", "delta_k", "I_k", "defect_l1_sup", "dx_increment", "weak_residual",
                 "margin", "contraction_ratio", "slack", "pass"});
  for (const auto& row : trace.rows)
    csv.row({CsvWriter::num(static_cast<long>(row.k)), CsvWriter::num(row.delta_k),
             CsvWriter::num(row.I_k), CsvWriter::num(row.defect_l1_sup),
             CsvWriter::num(row.dx_increment), CsvWriter::num(row.weak_residual_value),
             CsvWriter::num(row.margin), CsvWriter::num(row.contraction_ratio),
             CsvWriter::num(row.slack), row.pass ? "1" : "0"});

  json summary;
  summary["I0"] = trace.I0;
  summary["delta1"] = trace.delta1;
  summary["stalled"] = trace.stalled;
  if (trace.stalled) summary["stall_reason"] = trace.stall_reason;
  bool all = !trace.stalled;
  for (const auto& row : trace.rows) all = all && row.pass;
  summary["pass"] = all;
  {
    std::ofstream out(ctx.path("summary.json"));
    out << summary.dump(2) << "\n";
  }
  write_manifest(ctx, trace.stalled ? "stall" : (all ? "ok" : "estimate-failure"));
  if (trace.stalled) return 4;
  return all ? 0 : 3;
}

int run_ns_bookkeeping(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  TorusGrid grid(cfg.grid_d, cfg.grid_n);
  CsvWriter csv(ctx.path("ns.csv"), "cilab-ns-v1", {"quantity", "index", "value"});

  // defect size under time refinement
  std::vector<double> defect_sup;
  for (int level = 0; level < 3; ++level) {
    int m = (cfg.time_m - 1) * (1 << level) + 1;
    TimeGrid tg(cfg.time_T, m);
    NSSubsolution sub = make_demo_ns(grid, tg, cfg.demo.ns_amp, cfg.demo.ns_perturbation, cfg.r);
    double sup = 0.0;
    for (int i = 0; i < sub.samples(); ++i) sup = std::max(sup, lp_norm(sub.reynolds[i], 1.0));
    defect_sup.push_back(sup);
    csv.row({"defect_l1_sup", CsvWriter::num(static_cast<long>(m)), CsvWriter::num(sup)});
  }
  double order01 = std::log2(defect_sup[0] / defect_sup[1]);
  double order12 = std::log2(defect_sup[1] / defect_sup[2]);
  csv.row({"defect_convergence_order", "0", CsvWriter::num(order01)});
  csv.row({"defect_convergence_order", "1", CsvWriter::num(order12)});

  TimeGrid tg(cfg.time_T, cfg.time_m);
  NSSubsolution sub = make_demo_ns(grid, tg, cfg.demo.ns_amp, cfg.demo.ns_perturbation, cfg.r);
  double peak = 0.0;
  for (int i = 0; i < sub.samples(); ++i)
    peak = std::max(peak, ns_energy(sub, i) + grid.dim() * lp_norm(sub.reynolds[i], 1.0));
  EnergyProfile e = EnergyProfile::constant(peak + cfg.demo.margin, cfg.time_T);

  auto gamma0 = gamma0_schedule(sub, e);
  for (std::size_t i = 0; i < gamma0.size(); ++i)
    csv.row({"gamma0", CsvWriter::num(static_cast<long>(i)), CsvWriter::num(gamma0[i])});

  NSContractionReport exact = verify_contraction(sub, e, exact_limit_oracle(sub, e));
  csv.row({"exact_oracle_ratio", "0", CsvWriter::num(exact.ratio_bound)});
  csv.row({"exact_oracle_pass", "0", exact.pass ? "1" : "0"});

  double margin = ns_admissibility(sub, e).min_margin;
  OracleReport perturbed = exact_limit_oracle(sub, e);
  perturbed.delta = margin / 8.0;
  for (auto& row : perturbed.rows) {
    row.w1r_dist = 0.25 * perturbed.delta;
    row.defect_l1 = 0.25 * perturbed.delta;
    row.l2_sq_dist += 0.5 * perturbed.delta;
  }
  NSContractionReport pert = verify_contraction(sub, e, perturbed);
  csv.row({"perturbed_oracle_ratio", "0", CsvWriter::num(pert.ratio_bound)});
  csv.row({"perturbed_oracle_pass", "0", pert.pass ? "1" : "0"});

  MockOracleResult mock =
      mock_oracle(sub, e, margin / 8.0, cfg.mikado.mu(), std::max(1, cfg.mikado.lambda / 8));
  for (std::size_t i = 0; i < mock.report.rows.size(); ++i) {
    csv.row({"mock_w1r", CsvWriter::num(static_cast<long>(i)),
             CsvWriter::num(mock.report.rows[i].w1r_dist)});
    csv.row({"mock_defect_l1", CsvWriter::num(static_cast<long>(i)),
             CsvWriter::num(mock.report.rows[i].defect_l1)});
    csv.row({"mock_l2_sq", CsvWriter::num(static_cast<long>(i)),
             CsvWriter::num(mock.report.rows[i].l2_sq_dist)});
  }

  bool ok = exact.pass && pert.ratio_bound <= 0.75 + 1e-9 && order12 >= 1.5;
  write_manifest(ctx, ok ? "ok" : "estimate-failure");
  return ok ? 0 : 3;
}

int run_calibrate_m(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  auto [sub_base, e] = demo_from_config(cfg);
  std::vector<TransportSubsolution> corpus;
  corpus.push_back(sub_base);
  for (double scale : {0.5, 2.0}) {
    RunConfig alt = cfg;
    alt.demo.rho_drift *= scale;
    alt.demo.u_amp *= scale;
    corpus.push_back(demo_from_config(alt).first);
  }
  double delta = cfg.delta ? *cfg.delta : choose_delta(sub_base, e);
  MikadoParams params = sweep_params(cfg, 0);
  CalibrationResult cal = calibrate_M(corpus, delta, params);

  CsvWriter csv(ctx.path("calibration.csv"), "cilab-calibration-v1",
                {"quantity", "value"});
  csv.row({"measured_M", CsvWriter::num(cal.measured_M)});
  csv.row({"defined", cal.defined ? "1" : "0"});
  csv.row({"corpus_size", CsvWriter::num(static_cast<long>(cal.corpus_size))});
  write_manifest(ctx, "ok");
  return 0;
}

int run_lemma_suite(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  CsvWriter csv(ctx.path("lemma.csv"), "cilab-lemma-v1", {"p", "C_p"});
  for (double p : {1.0, 1.5, 2.0, 2.5, 3.0})
    csv.row({CsvWriter::num(p), CsvWriter::num(decoupling_constant(p))});

  TorusGrid grid(cfg.grid_d, std::min(cfg.grid_n, 64));
  std::mt19937_64 rng(cfg.seed);
  CsvWriter checks(ctx.path("decoupling_checks.csv"), "cilab-decoupling-v1",
                   {"p", "trial", "lhs", "rhs", "pass"});
  bool all = true;
  for (double p : {1.5, 2.5}) {
    for (int trial = 0; trial < 100; ++trial) {
      ScalarField f = random_band_limited(grid, 4, rng);
      ScalarField g = random_band_limited(grid, 6, rng);
      DecouplingCheck chk = check_decoupling(f, g, p);
      all = all && chk.pass;
      checks.row({CsvWriter::num(p), CsvWriter::num(static_cast<long>(trial)),
                  CsvWriter::num(chk.lhs), CsvWriter::num(chk.rhs), chk.pass ? "1" : "0"});
    }
  }
  write_manifest(ctx, all ? "ok" : "estimate-failure");
  return all ? 0 : 3;
}

int run_intermittency_sweep(RunContext& ctx) {
  const RunConfig& cfg = ctx.cfg;
  TorusGrid grid(cfg.grid_d, cfg.grid_n);
  std::vector<double> mus = cfg.sweep.mus;
  if (mus.empty()) mus = {4.0, 8.0, 16.0};
  int lambda = std::max(1, cfg.mikado.transverse_freq > 0 ? cfg.mikado.transverse_freq : 1);

  CsvWriter csv(ctx.path("intermittency.csv"), "cilab-intermittency-v1",
                {"r", "mu", "w1r_over_l2"});
  auto slope_for = [&](double r) {
    std::vector<double> xs, ys;
    for (double mu : mus) {
      VectorField W = intermittent_field(grid, mu, lambda, 1.0, r);
      double ratio = sobolev_norm(W, r);
      csv.row({CsvWriter::num(r), CsvWriter::num(mu), CsvWriter::num(ratio)});
      xs.push_back(std::log(mu));
      ys.push_back(std::log(ratio));
    }
    double n = xs.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sx += xs[i];
      sy += ys[i];
      sxx += xs[i] * xs[i];
      sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
  };
  double slope_r = slope_for(cfg.r);
  double r_threshold = 2.0 * cfg.grid_d / (cfg.grid_d + 2.0);
  double slope_threshold = slope_for(r_threshold * 0.999);
  csv.row({CsvWriter::num(cfg.r), "-", CsvWriter::num(slope_r)});
  csv.row({CsvWriter::num(r_threshold), "-", CsvWriter::num(slope_threshold)});

  json summary;
  summary["slope_r"] = slope_r;
  summary["slope_threshold"] = slope_threshold;
  summary["predicted_r"] = 1.0 + cfg.grid_d / 2.0 - cfg.grid_d / cfg.r;
  {
    std::ofstream out(ctx.path("summary.json"));
    out << summary.dump(2) << "\n";
  }
  write_manifest(ctx, "ok");
  return 0;
}

}  // namespace

RunResult run(const RunConfig& config) {
  config.validate();
  RunContext ctx{config, fs::path(config.out_dir), {}};
  fs::create_directories(ctx.dir);

  RunResult result;
  try {
    switch (config.mode) {
      case RunMode::TransportStep: result.exit_code = run_transport_step(ctx); break;
      case RunMode::TransportIterate: result.exit_code = run_transport_iterate(ctx); break;
      case RunMode::NsBookkeeping: result.exit_code = run_ns_bookkeeping(ctx); break;
      case RunMode::CalibrateM: result.exit_code = run_calibrate_m(ctx); break;
      case RunMode::LemmaSuite: result.exit_code = run_lemma_suite(ctx); break;
      case RunMode::IntermittencySweep: result.exit_code = run_intermittency_sweep(ctx); break;
    }
  } catch (const EstimateFailure& ex) {
    write_manifest(ctx, std::string("estimate-failure: ") + ex.what());
    result.exit_code = 3;
    result.status = ex.what();
    result.outputs = ctx.outputs;
    return result;
  } catch (const DiagnosedStallError& ex) {
    write_manifest(ctx, std::string("stall: ") + ex.what());
    result.exit_code = 4;
    result.status = ex.what();
    result.outputs = ctx.outputs;
    return result;
  }
  result.status = result.exit_code == 0 ? "ok" : "failed";
  result.outputs = ctx.outputs;
  return result;
}

}  // namespace cilab
