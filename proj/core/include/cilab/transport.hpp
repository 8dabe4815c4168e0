#pragma once

#include <functional>
#include <string>
#include <vector>

#include "cilab/field.hpp"
#include "cilab/grid.hpp"

namespace cilab {

/// Strictly positive smooth profile on [0, T]:
///   e(t) = sum_k poly[k] t^k + sum_k cosine[k] cos(2 pi k t / T).
class EnergyProfile {
 public:
  EnergyProfile(std::vector<double> poly, std::vector<double> cosine, double T);
  static EnergyProfile constant(double level, double T);

  double operator()(double t) const;
  double min_on(const TimeGrid& tg) const;
  double horizon() const { return T_; }
  const std::vector<double>& poly() const { return poly_; }
  const std::vector<double>& cosine() const { return cosine_; }

 private:
  std::vector<double> poly_;
  std::vector<double> cosine_;
  double T_;
};

/// Time-sampled triple (rho, u, R) solving the transport-defect equation
///   dt rho + div(rho u) = -div R,  div u = 0,
/// with strict energy margin below a profile e.
struct TransportSubsolution {
  TimeGrid time_grid;
  std::vector<ScalarField> rho;
  std::vector<VectorField> u;
  std::vector<VectorField> R;
  double M = 1.0;
  double p = 1.5;
  double p_tilde = 1.0;

  int samples() const { return time_grid.samples(); }
  const TorusGrid& grid() const { return rho.front().grid(); }
};

/// Second-order time derivative of a sampled field series (centered inside,
/// one-sided at the endpoints).
ScalarField time_derivative(const std::vector<ScalarField>& series, const TimeGrid& tg, int i);

/// R(t) = -antidivergence(dt rho + div(rho u)); mean of rho must not drift.
std::vector<VectorField> compute_defect(const std::vector<ScalarField>& rho,
                                        const std::vector<VectorField>& u, const TimeGrid& tg,
                                        double tol_mean = 1e-10);

/// L1 norm of the defect-equation residual at slice i (uses the stored R).
double residual_l1(const TransportSubsolution& sub, int i);

double energy_E(const TransportSubsolution& sub, int i);
double gap_i(const TransportSubsolution& sub, const EnergyProfile& e, int i);
double gap_I(const TransportSubsolution& sub, const EnergyProfile& e);

struct MarginRow {
  double t;
  double energy;
  double defect_l1;
  double profile;
  double margin;  // e - E - M ||R||_1
};

struct MarginReport {
  std::vector<MarginRow> rows;
  double min_margin;
  bool admissible() const { return min_margin > 0.0; }
};

MarginReport admissibility(const TransportSubsolution& sub, const EnergyProfile& e);

/// sup_t ( ||rho_a - rho_b||_L1 + ||u_a - u_b||_W^{1,p~} ).
double metric_dX(const TransportSubsolution& a, const TransportSubsolution& b);

/// Space-time test function Phi(t, x) = w(t) phi(x), w compactly supported
/// inside (0, T).
struct SpaceTimeTest {
  ScalarField phi;
  VectorField grad_phi;
  std::vector<double> w;
  std::vector<double> wdot;
};

std::vector<SpaceTimeTest> make_standard_tests(const TorusGrid& grid, const TimeGrid& tg,
                                               int count, unsigned long seed);

/// max over tests of |int_0^T int rho dt(Phi) + rho u . grad Phi dx dt|.
double weak_residual(const TransportSubsolution& sub, const std::vector<SpaceTimeTest>& tests);

struct DemoSpec {
  double rho_amp = 0.3;
  double rho_drift = 0.05;  // relative drift of a(t) across [0, T]
  double u_amp = 0.02;
  double margin = 0.5;      // requested admissibility margin
  double p = 1.5;
  double p_tilde = 1.0;
  double M = 1.0;
};

/// Deterministic demo subsolution: rho = a(t) sin(x1),
/// u = c(t) (-sin x2, sin x1, 0), R from compute_defect, and a constant
/// profile e sized to leave the requested margin.
std::pair<TransportSubsolution, EnergyProfile> make_demo_transport(const TorusGrid& grid,
                                                                   const TimeGrid& tg,
                                                                   const DemoSpec& spec);

}  // namespace cilab
