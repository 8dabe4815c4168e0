#include "cilab/mikado.hpp"

#include <algorithm>
#include <cmath>

#include "cilab/errors.hpp"
#include "cilab/norms.hpp"

namespace cilab {

double MikadoParams::mu() const { return mu_override > 0 ? mu_override : std::pow(lambda, alpha); }

long MikadoParams::nu() const {
  if (nu_override > 0) return nu_override;
  long v = std::lround(std::pow(lambda, gamma));
  return std::max<long>(1, v);
}

double MikadoParams::omega() const {
  return omega_override > 0 ? omega_override : std::pow(lambda, beta);
}

void MikadoParams::validate() const {
  if (lambda < 2) throw ConfigError("lambda must be >= 2");
  if (!(p >= 1.0) || !(p_tilde >= 1.0)) throw ConfigError("exponents must satisfy p, p~ >= 1");
  if (1.0 / p + 1.0 / p_tilde <= 1.0 + 1.0 / d)
    throw ConfigError("requires 1/p + 1/p~ > 1 + 1/d");
  if (!(alpha > 0.0) || !(gamma > 0.0)) throw ConfigError("alpha and gamma must be positive");
  if (!(eps > 0.0)) throw ConfigError("cutoff scale eps must be positive");
  if (axial != AxialKind::Flat) {
    double ratio = static_cast<double>(lambda) * mu() / static_cast<double>(nu());
    if (!(ratio < 1.0)) throw ConfigError("requires lambda*mu/nu < 1");
  }
  if (mu() < 2.0) throw ConfigError("mu must be >= 2");
}

namespace {

// Mollifier kernel exp(-1/(1-r^2)) on (-1,1); q-th powers stay mollifiers.
double kernel_pow(double r, double q) {
  double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  return std::exp(-q / (1.0 - r2));
}

// integral of the kernel over [-1, 1]; trapezoid is superconvergent here
// because every derivative vanishes at the endpoints.
double kernel_mass() {
  static const double mass = [] {
    const int n = 1 << 16;
    double h = 2.0 / n;
    double s = 0.0;
    for (int i = 1; i < n; ++i) s += kernel_pow(-1.0 + i * h, 1.0);
    return s * h;
  }();
  return mass;
}

}  // namespace

BumpProfile::BumpProfile(double mu) : mu_(mu) {
  if (!(mu >= 2.0)) throw ConfigError("bump concentration must be >= 2");
  // unit mean over the circle: (1/2pi) amp (pi/mu) kernel_mass = 1
  amp_ = 2.0 * mu_ / kernel_mass();
}

double BumpProfile::value(double s) const { return value_pow(s, 1.0); }

double BumpProfile::value_pow(double s, double q) const {
  double r = wrap_signed(s) * mu_ / (kTwoPi / 2.0);
  double k = kernel_pow(r, q);
  return k == 0.0 ? 0.0 : std::pow(amp_, q) * k;
}

double BumpProfile::value_deriv(double s) const {
  double r = wrap_signed(s) * mu_ / (kTwoPi / 2.0);
  double r2 = r * r;
  if (r2 >= 1.0) return 0.0;
  double one = 1.0 - r2;
  double chain = mu_ / (kTwoPi / 2.0);
  return amp_ * std::exp(-1.0 / one) * (-2.0 * r / (one * one)) * chain;
}

TransverseBump::TransverseBump(double mu, int d) : bump_(mu), d_(d) {
  if (d < 1 || d > 3) throw ConfigError("dimension must be 1..3");
}

TransverseBump build_bump(double mu, int d) { return TransverseBump(mu, d); }

namespace {

void check_width(const TorusGrid& grid, double mu, int freq) {
  double width_cells = static_cast<double>(grid.points_per_axis()) / (mu * freq);
  if (width_cells < 4.0)
    throw UnresolvableConcentrationError(
        "tube width " + std::to_string(width_cells) +
        " cells < 4: concentration*frequency too large for the grid");
}

// 1-D signed train samples: sign alternates per period of the train.
std::vector<double> train_samples(const TorusGrid& grid, const BumpProfile& bump, double offset,
                                  double power, int freq, bool alternate) {
  const int n = grid.points_per_axis();
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    double s = grid.coord(i) - offset;
    double arg = freq * s;
    double v = bump.value_pow(arg, power);
    if (alternate && freq % 2 == 0) {
      long cell = static_cast<long>(std::floor(wrap_torus(s) * freq / kTwoPi + 0.5));
      if (cell & 1) v = -v;
    }
    out[i] = v;
  }
  return out;
}

ScalarField tensor_transverse(const TorusGrid& grid, const BumpProfile& bump, int direction,
                              const std::array<double, 3>& offset, double power, int freq,
                              bool alternate) {
  check_width(grid, bump.concentration(), freq);
  const int d = grid.dim();
  const int n = grid.points_per_axis();
  std::array<std::vector<double>, 3> axis{};
  for (int a = 0; a < d; ++a) {
    if (a == direction)
      axis[a].assign(n, 1.0);
    else
      axis[a] = train_samples(grid, bump, offset[a], power, freq, alternate);
  }
  ScalarField out(grid);
  std::array<int, 3> idx{0, 0, 0};
  std::size_t k = 0;
  while (true) {
    double v = 1.0;
    for (int a = 0; a < d; ++a) v *= axis[a][idx[a]];
    out[k++] = v;
    int a = d - 1;
    while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

}  // namespace

ScalarField TransverseBump::field(const TorusGrid& grid, int direction,
                                  const std::array<double, 3>& offset, int freq) const {
  return tensor_transverse(grid, bump_, direction, offset, 1.0, freq, false);
}

ScalarField TransverseBump::field_pow(const TorusGrid& grid, int direction,
                                      const std::array<double, 3>& offset, double power, int freq,
                                      bool alternate) const {
  return tensor_transverse(grid, bump_, direction, offset, power, freq, alternate);
}

ScalarField TransverseBump::factor_phi(const TorusGrid& grid, int direction,
                                       const std::array<double, 3>& offset, double p,
                                       int freq) const {
  double pprime = p / (p - 1.0);
  return tensor_transverse(grid, bump_, direction, offset, 1.0 / pprime, freq, false);
}

ScalarField TransverseBump::factor_phi_tilde(const TorusGrid& grid, int direction,
                                             const std::array<double, 3>& offset, double p,
                                             int freq) const {
  return tensor_transverse(grid, bump_, direction, offset, 1.0 / p, freq, false);
}

AxialProfile::AxialProfile(AxialKind kind, double kappa) : kind_(kind) {
  if (kind == AxialKind::Bump) bump_.emplace(kappa);
}

double AxialProfile::psi(double s) const {
  switch (kind_) {
    case AxialKind::Flat:
      return 1.0;
    case AxialKind::Harmonic:
      return std::sqrt(2.0) * std::sin(s);
    case AxialKind::Bump:
      return std::sqrt(bump_->value(s));
  }
  return 1.0;
}

double AxialProfile::psi_squared(double s) const {
  switch (kind_) {
    case AxialKind::Flat:
      return 1.0;
    case AxialKind::Harmonic:
      return 1.0 - std::cos(2.0 * s);
    case AxialKind::Bump:
      return bump_->value(s);
  }
  return 1.0;
}

double AxialProfile::psi_squared_primitive(double s) const {
  switch (kind_) {
    case AxialKind::Flat:
      return 0.0;
    case AxialKind::Harmonic:
      return -0.5 * std::sin(2.0 * s);
    case AxialKind::Bump: {
      // numeric primitive of B_kappa - 1, tabulated once per profile
      static thread_local const BumpProfile* cached = nullptr;
      static thread_local std::vector<double> table;
      const int N = 1 << 12;
      if (cached != &*bump_) {
        table.assign(N + 1, 0.0);
        double h = kTwoPi / N;
        for (int i = 0; i < N; ++i)
          table[i + 1] = table[i] + h * (bump_->value(i * h) - 1.0 + bump_->value((i + 1) * h) - 1.0) / 2.0;
        cached = &*bump_;
      }
      double u = wrap_torus(s) / kTwoPi * N;
      int i = std::min<int>(N - 1, static_cast<int>(u));
      double frac = u - i;
      return table[i] * (1 - frac) + table[i + 1] * frac;
    }
  }
  return 0.0;
}

AxialProfile build_axial_oscillation(long nu, AxialKind kind, double kappa) {
  if (nu < 1) throw ConfigError("axial frequency must be >= 1");
  return AxialProfile(kind, kappa);
}

namespace {

// Phase windows (mod 2pi) during which direction j's traveling blobs cross
// direction i's transverse tube columns.  Used for the d = 2 stagger check.
bool staggered_disjoint(const MikadoParams& params, const SupportLayout& layout, int i, int j) {
  const long nu = params.nu();
  const int freq = params.train_freq();
  const double w_ax = (params.axial == AxialKind::Bump)
                          ? (kTwoPi / 2.0) / (params.axial_conc * nu)
                          : kTwoPi;  // harmonic/flat axial fills the tube
  const double w_tr = (kTwoPi / 2.0) / (params.mu() * freq);
  if (w_ax >= kTwoPi / (2.0 * nu)) return false;  // blobs as wide as their spacing

  auto hits = [&](int dir_blob, int dir_tube, double phase) {
    // blob centers along axis dir_blob: layout.axial_phase[dir_blob] + phase + 2pi k/nu
    // tube columns on that axis: layout.transverse_offset[dir_tube][dir_blob] + 2pi m/freq
    double rel = layout.transverse_offset[dir_tube][dir_blob] - layout.axial_phase[dir_blob] - phase;
    // distance from rel to the lattice (2pi/nu)Z ... tubes repeat every 2pi/freq
    double pad = w_ax + w_tr;
    for (int m = 0; m < freq; ++m) {
      double x = rel + m * kTwoPi / freq;
      double spacing = kTwoPi / nu;
      double r = std::fmod(std::abs(x), spacing);
      r = std::min(r, spacing - r);
      if (r < pad) return true;
    }
    return false;
  };

  const int samples = 4096;
  for (int s = 0; s < samples; ++s) {
    double phase = kTwoPi * s / samples;
    if (hits(i, j, phase) && hits(j, i, phase)) return false;
  }
  return true;
}

}  // namespace

SupportLayout place_supports(const MikadoParams& params, const TorusGrid& grid,
                             const std::vector<int>& active) {
  const int d = grid.dim();
  SupportLayout layout;
  layout.transverse_offset.resize(d);
  layout.axial_phase.resize(d);
  for (int j = 0; j < d; ++j) {
    double c = (2.0 * (j + 1) - 1.0) * (kTwoPi / 2.0) / d;
    layout.transverse_offset[j] = {c, c, c};
    layout.transverse_offset[j][j] = 0.0;
    layout.axial_phase[j] = j * kTwoPi / (params.nu() * d);
  }

  const int freq = params.train_freq();
  const double half_width = (kTwoPi / 2.0) / (params.mu() * freq);
  for (std::size_t a = 0; a < active.size(); ++a) {
    for (std::size_t b = a + 1; b < active.size(); ++b) {
      int i = active[a], j = active[b];
      bool separated = false;
      // a transverse axis common to both tubes separates them outright
      for (int ax = 0; ax < d; ++ax) {
        if (ax == i || ax == j) continue;
        double gap = std::abs(wrap_signed(layout.transverse_offset[i][ax] -
                                          layout.transverse_offset[j][ax]));
        // tube trains repeat every 2pi/freq
        double spacing = kTwoPi / freq;
        double r = std::fmod(gap, spacing);
        r = std::min(r, spacing - r);
        if (r > 2.0 * half_width) {
          separated = true;
          break;
        }
      }
      if (!separated) separated = staggered_disjoint(params, layout, i, j);
      if (!separated)
        throw SupportOverlapError("directions " + std::to_string(i + 1) + " and " +
                                  std::to_string(j + 1) +
                                  " cannot be made disjoint with these parameters");
    }
  }
  return layout;
}

MikadoPair build_pair(const TorusGrid& grid, const MikadoParams& params,
                      const SupportLayout& layout, int direction, double t) {
  const int d = grid.dim();
  if (direction < 0 || direction >= d) throw ConfigError("direction out of range");
  const long nu = params.nu();
  if (nu > grid.points_per_axis() / 4) throw AliasRiskError(nu, grid.points_per_axis());
  if (params.axial == AxialKind::Bump) {
    double cells = static_cast<double>(grid.points_per_axis()) / (params.axial_conc * nu);
    if (cells < 4.0)
      throw UnresolvableConcentrationError("axial blob width " + std::to_string(cells) +
                                           " cells < 4");
  }

  TransverseBump bump(params.mu(), d);
  AxialProfile axial(params.axial, params.axial_conc);
  const auto& off = layout.transverse_offset[direction];
  const int freq = params.train_freq();

  MikadoPair pair{direction, ScalarField(grid), VectorField(grid), off,
                  layout.axial_phase[direction]};

  ScalarField theta_tr =
      bump.field_pow(grid, direction, off, 1.0 / params.p, freq, params.alternate_signs);
  double pprime = params.p / (params.p - 1.0);
  ScalarField w_tr =
      bump.field_pow(grid, direction, off, 1.0 / pprime, freq, params.alternate_signs);

  // axial factor evaluated in the co-moving frame
  const int n = grid.points_per_axis();
  std::vector<double> ax(n);
  double shift = params.omega() * t + layout.axial_phase[direction];
  for (int i = 0; i < n; ++i) ax[i] = axial.psi_squared(nu * (grid.coord(i) - shift));

  std::array<int, 3> idx{0, 0, 0};
  std::size_t k = 0;
  while (true) {
    pair.theta[k] = theta_tr[k] * ax[idx[direction]];
    pair.field.comp(direction)[k] = w_tr[k];
    int a = d - 1;
    ++k;
    while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
    if (a < 0) break;
  }
  return pair;
}

double smooth_ramp(double u) {
  if (u <= 1.0) return 0.0;
  if (u >= 2.0) return 1.0;
  auto g = [](double v) { return v > 0 ? std::exp(-1.0 / v) : 0.0; };
  double a = g(u - 1.0), b = g(2.0 - u);
  return a / (a + b);
}

ScalarField cutoff_chi(const ScalarField& component, double eps) {
  if (!(eps > 0.0)) throw ConfigError("cutoff scale must be positive");
  ScalarField chi(component.grid());
  for (std::size_t i = 0; i < chi.size(); ++i)
    chi[i] = smooth_ramp(std::abs(component[i]) / eps);
  return chi;
}

}  // namespace cilab
