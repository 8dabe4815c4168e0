#include <cmath>

#include "cilab/errors.hpp"
#include "cilab/mikado.hpp"
#include "cilab/norms.hpp"
#include "cilab/ns.hpp"

namespace cilab {

namespace {

// Blob-lattice potential: product of per-axis bumps at concentration mu,
// repeated with frequency lambda, centered at pi on each axis.
struct BlobPotential {
  BumpProfile bump;
  int lambda;
  double center;

  double axis_value(double s) const { return bump.value(lambda * (s - center)); }
  double axis_deriv(double s) const { return lambda * bump.value_deriv(lambda * (s - center)); }
};

}  // namespace

VectorField intermittent_field(const TorusGrid& grid, double mu, int lambda, double target_l2,
                               double r) {
  const int d = grid.dim();
  if (d < 2) throw ConfigError("intermittent fields need d >= 2");
  double threshold = 2.0 * d / (d + 2.0);
  if (!(r >= 1.0 && r < threshold))
    throw ConfigError("requires 1 <= r < 2d/(d+2)");
  if (lambda < 1) throw ConfigError("lattice frequency must be >= 1");
  const int n = grid.points_per_axis();
  if (static_cast<double>(n) / (mu * lambda) < 4.0)
    throw UnresolvableConcentrationError("blob width " +
                                         std::to_string(n / (mu * lambda)) + " cells < 4");

  BlobPotential pot{BumpProfile(mu), lambda, kTwoPi / 2.0};

  // per-axis sample tables
  std::vector<double> val(n), der(n);
  for (int i = 0; i < n; ++i) {
    val[i] = pot.axis_value(grid.coord(i));
    der[i] = pot.axis_deriv(grid.coord(i));
  }

  // d = 2: W = (-d2 phi, d1 phi); d = 3: W = curl(phi e3) = (d2 phi, -d1 phi, 0)
  VectorField W(grid);
  std::array<int, 3> idx{0, 0, 0};
  std::size_t k = 0;
  while (true) {
    double phi_d1, phi_d2;
    if (d == 2) {
      phi_d1 = der[idx[0]] * val[idx[1]];
      phi_d2 = val[idx[0]] * der[idx[1]];
      W.comp(0)[k] = -phi_d2;
      W.comp(1)[k] = phi_d1;
    } else {
      double v3 = val[idx[2]];
      phi_d1 = der[idx[0]] * val[idx[1]] * v3;
      phi_d2 = val[idx[0]] * der[idx[1]] * v3;
      W.comp(0)[k] = phi_d2;
      W.comp(1)[k] = -phi_d1;
    }
    int a = d - 1;
    ++k;
    while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
    if (a < 0) break;
  }

  double l2 = lp_norm(W, 2.0);
  if (!(l2 > 0)) throw Error("degenerate intermittent field");
  double scale = target_l2 / l2;
  for (int a = 0; a < d; ++a)
    for (auto& v : W.comp(a).values()) v *= scale;
  return W;
}

MockOracleResult mock_oracle(const NSSubsolution& sub, const EnergyProfile& e, double delta,
                             double mu, int lambda) {
  if (!(delta > 0)) throw ConfigError("delta must be positive");
  const int d = sub.grid().dim();
  const double vol = sub.grid().volume();
  MockOracleResult out;
  out.report.delta = delta;
  out.report.gamma0 = gamma0_schedule(sub, e);

  out.v1.reserve(sub.samples());
  for (int i = 0; i < sub.samples(); ++i) {
    double target_sq = 2.0 * d * lp_norm(sub.reynolds[i], 1.0) + vol * d * out.report.gamma0[i];
    VectorField W = intermittent_field(sub.grid(), mu, lambda, std::sqrt(target_sq), sub.r);
    out.v1.push_back(sub.v[i] + W);

    OracleRow row;
    row.t = sub.time_grid.t(i);
    double l2 = lp_norm(W, 2.0);
    row.l2_sq_dist = l2 * l2;
    row.w1r_dist = sobolev_norm(W, sub.r);
    out.report.rows.push_back(row);
  }

  // successor defect measured honestly, reported without a verdict
  NSDefect defect = ns_defect(out.v1, sub.time_grid, 1e-6);
  for (int i = 0; i < sub.samples(); ++i)
    out.report.rows[i].defect_l1 = lp_norm(defect.reynolds[i], 1.0);
  return out;
}

}  // namespace cilab
