#include "cilab/grid.hpp"

#include <cmath>

#include "cilab/errors.hpp"

namespace cilab {

namespace {
bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

TorusGrid::TorusGrid(int d, int n) : d_(d), n_(n) {
  if (d < 1 || d > 3) throw ConfigError("grid dimension must be 1, 2 or 3");
  if (n < 8) throw ConfigError("grid needs at least 8 points per axis");
  if (!power_of_two(n)) throw ConfigError("points per axis must be a power of two");
  size_ = 1;
  for (int a = 0; a < d; ++a) size_ *= static_cast<std::size_t>(n);
  // ~1.5 GiB of doubles caps the configured memory budget.
  if (size_ > (std::size_t{1} << 31) / 8) throw ConfigError("grid exceeds memory budget");
  cell_volume_ = std::pow(kTwoPi / n, d);
  volume_ = std::pow(kTwoPi, d);
}

TimeGrid::TimeGrid(double T, int m) : T_(T), m_(m) {
  if (!(T > 0.0)) throw ConfigError("time horizon must be positive");
  if (m < 2) throw ConfigError("time grid needs at least 2 samples");
  dt_ = T / (m - 1);
}

double wrap_torus(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0) y += kTwoPi;
  return y;
}

double wrap_signed(double x) {
  double y = wrap_torus(x);
  if (y >= kTwoPi / 2) y -= kTwoPi;
  return y;
}

}  // namespace cilab
