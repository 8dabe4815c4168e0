#include "cilab/norms.hpp"

#include <cmath>

#include "cilab/errors.hpp"
#include "cilab/spectral.hpp"

namespace cilab {

double compensated_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double t = s + x;
    if (std::abs(s) >= std::abs(x))
      c += (s - t) + x;
    else
      c += (x - t) + s;
    s = t;
  }
  return s + c;
}

namespace {

void check_exponent(double p) {
  if (!(p >= 1.0)) throw ConfigError("Lebesgue exponent must satisfy p >= 1");
}

double quadrature_lp(const std::vector<double>& magnitudes, double p, double cell) {
  std::vector<double> powers(magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) powers[i] = std::pow(magnitudes[i], p);
  double s = compensated_sum(powers);
  return std::pow(s * cell, 1.0 / p);
}

}  // namespace

double lp_norm(const ScalarField& f, double p) {
  check_exponent(p);
  if (p == kInfExponent) {
    double m = 0.0;
    for (double v : f.values()) m = std::max(m, std::abs(v));
    return m;
  }
  std::vector<double> mag(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) mag[i] = std::abs(f[i]);
  return quadrature_lp(mag, p, f.grid().cell_volume());
}

double lp_norm(const VectorField& f, double p) {
  check_exponent(p);
  std::vector<double> mag(f.grid().size(), 0.0);
  for (int a = 0; a < f.components(); ++a) {
    const auto& c = f.comp(a);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += c[i] * c[i];
  }
  for (auto& v : mag) v = std::sqrt(v);
  if (p == kInfExponent) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return m;
  }
  return quadrature_lp(mag, p, f.grid().cell_volume());
}

double lp_norm(const SymTensorField& f, double p) {
  check_exponent(p);
  const int d = f.grid().dim();
  std::vector<double> mag(f.grid().size(), 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const auto& c = f.at(i, j);
      for (std::size_t k = 0; k < mag.size(); ++k) mag[k] += c[k] * c[k];
    }
  for (auto& v : mag) v = std::sqrt(v);
  if (p == kInfExponent) {
    double m = 0.0;
    for (double v : mag) m = std::max(m, v);
    return m;
  }
  return quadrature_lp(mag, p, f.grid().cell_volume());
}

namespace {

std::vector<double> gradient_magnitude(const ScalarField& f) {
  VectorField g = gradient(f);
  std::vector<double> mag(f.size(), 0.0);
  for (int a = 0; a < g.components(); ++a) {
    const auto& c = g.comp(a);
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += c[i] * c[i];
  }
  for (auto& v : mag) v = std::sqrt(v);
  return mag;
}

std::vector<double> jacobian_magnitude(const VectorField& f) {
  std::vector<double> mag(f.grid().size(), 0.0);
  for (int a = 0; a < f.components(); ++a) {
    VectorField g = gradient(f.comp(a));
    for (int b = 0; b < g.components(); ++b) {
      const auto& c = g.comp(b);
      for (std::size_t i = 0; i < mag.size(); ++i) mag[i] += c[i] * c[i];
    }
  }
  for (auto& v : mag) v = std::sqrt(v);
  return mag;
}

}  // namespace

double sobolev_norm(const ScalarField& f, double p) {
  check_exponent(p);
  if (p == kInfExponent) throw ConfigError("sobolev_norm needs a finite exponent");
  auto mag = gradient_magnitude(f);
  return lp_norm(f, p) + quadrature_lp(mag, p, f.grid().cell_volume());
}

double sobolev_norm(const VectorField& f, double p) {
  check_exponent(p);
  if (p == kInfExponent) throw ConfigError("sobolev_norm needs a finite exponent");
  auto mag = jacobian_magnitude(f);
  return lp_norm(f, p) + quadrature_lp(mag, p, f.grid().cell_volume());
}

double c1_norm(const ScalarField& f) {
  double m = lp_norm(f, kInfExponent);
  auto mag = gradient_magnitude(f);
  double g = 0.0;
  for (double v : mag) g = std::max(g, v);
  return m + g;
}

double c1_norm(const VectorField& f) {
  double m = lp_norm(f, kInfExponent);
  auto mag = jacobian_magnitude(f);
  double g = 0.0;
  for (double v : mag) g = std::max(g, v);
  return m + g;
}

ScalarField rescale_winding(const ScalarField& g, int lambda, const std::array<int, 3>& shift_cells) {
  const TorusGrid& grid = g.grid();
  const int d = grid.dim();
  const int n = grid.points_per_axis();
  ScalarField out(grid);
  std::array<int, 3> idx{0, 0, 0};
  std::size_t k = 0;
  while (true) {
    std::array<int, 3> src{0, 0, 0};
    for (int a = 0; a < d; ++a) {
      long w = (static_cast<long>(lambda) * idx[a] + shift_cells[a]) % n;
      if (w < 0) w += n;
      src[a] = static_cast<int>(w);
    }
    out[k++] = g[grid.flat(src)];
    int a = d - 1;
    while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

double fast_osc_error(const ScalarField& f, const ScalarField& g_profile, int lambda) {
  if (f.grid() != g_profile.grid()) throw GridMismatchError();
  if (lambda < 1) throw ConfigError("oscillation frequency must be >= 1");
  if (lambda > f.grid().points_per_axis() / 4)
    throw AliasRiskError(lambda, f.grid().points_per_axis());
  ScalarField g_fast = rescale_winding(g_profile, lambda);
  double lhs = integral(f * g_fast);
  double rhs = integral(f) * mean(g_profile);
  return std::abs(lhs - rhs);
}

}  // namespace cilab
