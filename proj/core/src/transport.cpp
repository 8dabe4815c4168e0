#include "cilab/transport.hpp"

#include <cmath>

#include "cilab/errors.hpp"
#include "cilab/norms.hpp"
#include "cilab/spectral.hpp"

namespace cilab {

EnergyProfile::EnergyProfile(std::vector<double> poly, std::vector<double> cosine, double T)
    : poly_(std::move(poly)), cosine_(std::move(cosine)), T_(T) {
  if (!(T > 0)) throw ConfigError("profile horizon must be positive");
  for (int i = 0; i <= 256; ++i) {
    double t = T * i / 256.0;
    if (!((*this)(t) > 0.0)) throw ConfigError("energy profile must be strictly positive");
  }
}

EnergyProfile EnergyProfile::constant(double level, double T) {
  return EnergyProfile({level}, {}, T);
}

double EnergyProfile::operator()(double t) const {
  double v = 0.0, tp = 1.0;
  for (double c : poly_) {
    v += c * tp;
    tp *= t;
  }
  for (std::size_t k = 0; k < cosine_.size(); ++k)
    v += cosine_[k] * std::cos(kTwoPi * static_cast<double>(k + 1) * t / T_);
  return v;
}

double EnergyProfile::min_on(const TimeGrid& tg) const {
  double m = (*this)(0.0);
  for (int i = 1; i < tg.samples(); ++i) m = std::min(m, (*this)(tg.t(i)));
  return m;
}

ScalarField time_derivative(const std::vector<ScalarField>& series, const TimeGrid& tg, int i) {
  const int m = tg.samples();
  const double dt = tg.dt();
  ScalarField out(series.front().grid());
  if (m == 2) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = (series[1][k] - series[0][k]) / dt;
    return out;
  }
  if (i == 0) {
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = (-3.0 * series[0][k] + 4.0 * series[1][k] - series[2][k]) / (2.0 * dt);
  } else if (i == m - 1) {
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = (3.0 * series[m - 1][k] - 4.0 * series[m - 2][k] + series[m - 3][k]) / (2.0 * dt);
  } else {
    for (std::size_t k = 0; k < out.size(); ++k)
      out[k] = (series[i + 1][k] - series[i - 1][k]) / (2.0 * dt);
  }
  return out;
}

namespace {

ScalarField transport_rhs(const std::vector<ScalarField>& rho, const std::vector<VectorField>& u,
                          const TimeGrid& tg, int i) {
  ScalarField rhs = time_derivative(rho, tg, i);
  VectorField flux(rho[i].grid());
  for (int a = 0; a < flux.components(); ++a) flux.comp(a) = rho[i] * u[i].comp(a);
  rhs += divergence(flux);
  return rhs;
}

}  // namespace

std::vector<VectorField> compute_defect(const std::vector<ScalarField>& rho,
                                        const std::vector<VectorField>& u, const TimeGrid& tg,
                                        double tol_mean) {
  std::vector<VectorField> R;
  R.reserve(rho.size());
  for (int i = 0; i < tg.samples(); ++i) {
    ScalarField rhs = transport_rhs(rho, u, tg, i);
    VectorField Ri = antidivergence(rhs, tol_mean);
    for (int a = 0; a < Ri.components(); ++a)
      for (auto& v : Ri.comp(a).values()) v = -v;
    R.push_back(std::move(Ri));
  }
  return R;
}

double residual_l1(const TransportSubsolution& sub, int i) {
  ScalarField r = transport_rhs(sub.rho, sub.u, sub.time_grid, i) + divergence(sub.R[i]);
  return lp_norm(r, 1.0);
}

double energy_E(const TransportSubsolution& sub, int i) {
  double pp = sub.p / (sub.p - 1.0);
  return std::pow(lp_norm(sub.rho[i], sub.p), sub.p) / sub.p +
         std::pow(lp_norm(sub.u[i], pp), pp) / pp;
}

double gap_i(const TransportSubsolution& sub, const EnergyProfile& e, int i) {
  return e(sub.time_grid.t(i)) - energy_E(sub, i);
}

double gap_I(const TransportSubsolution& sub, const EnergyProfile& e) {
  double m = gap_i(sub, e, 0);
  for (int i = 1; i < sub.samples(); ++i) m = std::max(m, gap_i(sub, e, i));
  return m;
}

MarginReport admissibility(const TransportSubsolution& sub, const EnergyProfile& e) {
  MarginReport rep;
  rep.rows.reserve(sub.samples());
  rep.min_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < sub.samples(); ++i) {
    MarginRow row;
    row.t = sub.time_grid.t(i);
    row.energy = energy_E(sub, i);
    row.defect_l1 = lp_norm(sub.R[i], 1.0);
    row.profile = e(row.t);
    row.margin = row.profile - row.energy - sub.M * row.defect_l1;
    rep.min_margin = std::min(rep.min_margin, row.margin);
    rep.rows.push_back(row);
  }
  return rep;
}

double metric_dX(const TransportSubsolution& a, const TransportSubsolution& b) {
  if (a.grid() != b.grid() || a.time_grid != b.time_grid) throw GridMismatchError();
  double sup = 0.0;
  for (int i = 0; i < a.samples(); ++i) {
    double v = lp_norm(a.rho[i] - b.rho[i], 1.0) + sobolev_norm(a.u[i] - b.u[i], a.p_tilde);
    sup = std::max(sup, v);
  }
  return sup;
}

std::vector<SpaceTimeTest> make_standard_tests(const TorusGrid& grid, const TimeGrid& tg,
                                               int count, unsigned long seed) {
  std::mt19937_64 rng(seed);
  std::vector<SpaceTimeTest> tests;
  tests.reserve(count);
  const double T = tg.horizon();
  for (int c = 0; c < count; ++c) {
    SpaceTimeTest test{ScalarField(grid), VectorField(grid), {}, {}};
    test.phi = random_band_limited(grid, 2 + c % 3, rng);
    test.grad_phi = gradient(test.phi);
    test.w.resize(tg.samples());
    test.wdot.resize(tg.samples());
    for (int i = 0; i < tg.samples(); ++i) {
      double r = 2.0 * tg.t(i) / T - 1.0;
      double r2 = r * r;
      if (r2 >= 1.0) {
        test.w[i] = test.wdot[i] = 0.0;
      } else {
        double g = std::exp(-1.0 / (1.0 - r2));
        test.w[i] = g;
        test.wdot[i] = g * (-2.0 * r / ((1.0 - r2) * (1.0 - r2))) * (2.0 / T);
      }
    }
    tests.push_back(std::move(test));
  }
  return tests;
}

double weak_residual(const TransportSubsolution& sub, const std::vector<SpaceTimeTest>& tests) {
  double worst = 0.0;
  const TimeGrid& tg = sub.time_grid;
  for (const auto& test : tests) {
    std::vector<double> integrand(tg.samples());
    for (int i = 0; i < tg.samples(); ++i) {
      double space = test.wdot[i] * integral(sub.rho[i] * test.phi);
      ScalarField advect(sub.grid());
      for (int a = 0; a < sub.grid().dim(); ++a)
        advect += sub.rho[i] * sub.u[i].comp(a) * test.grad_phi.comp(a);
      space += test.w[i] * integral(advect);
      integrand[i] = space;
    }
    double acc = 0.0;  // trapezoid in time
    for (int i = 0; i + 1 < tg.samples(); ++i) acc += 0.5 * tg.dt() * (integrand[i] + integrand[i + 1]);
    worst = std::max(worst, std::abs(acc));
  }
  return worst;
}

std::pair<TransportSubsolution, EnergyProfile> make_demo_transport(const TorusGrid& grid,
                                                                   const TimeGrid& tg,
                                                                   const DemoSpec& spec) {
  TransportSubsolution sub{tg, {}, {}, {}, spec.M, spec.p, spec.p_tilde};
  const double T = tg.horizon();
  auto a_of = [&](double t) { return spec.rho_amp * (1.0 + spec.rho_drift * t / T); };
  auto c_of = [&](double t) { return spec.u_amp * (1.0 + 0.5 * t / T); };
  for (int i = 0; i < tg.samples(); ++i) {
    double t = tg.t(i);
    sub.rho.push_back(sample(grid, [&](const std::array<double, 3>& x) {
      return a_of(t) * std::sin(x[0]);
    }));
    VectorField ui(grid);
    ui.comp(0) = sample(grid, [&](const std::array<double, 3>& x) { return -c_of(t) * std::sin(x[1]); });
    ui.comp(1) = sample(grid, [&](const std::array<double, 3>& x) { return c_of(t) * std::sin(x[0]); });
    sub.u.push_back(std::move(ui));
  }
  sub.R = compute_defect(sub.rho, sub.u, tg);

  double peak = 0.0;
  for (int i = 0; i < tg.samples(); ++i)
    peak = std::max(peak, energy_E(sub, i) + sub.M * lp_norm(sub.R[i], 1.0));
  EnergyProfile e = EnergyProfile::constant(peak + spec.margin, T);
  return {std::move(sub), std::move(e)};
}

}  // namespace cilab
