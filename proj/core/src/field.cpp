#include "cilab/field.hpp"

#include <cmath>

#include "cilab/errors.hpp"
#include "cilab/norms.hpp"

namespace cilab {

ScalarField::ScalarField(const TorusGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

bool ScalarField::all_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  return true;
}

VectorField::VectorField(const TorusGrid& grid) : grid_(grid) {
  comp_.reserve(grid.dim());
  for (int a = 0; a < grid.dim(); ++a) comp_.emplace_back(grid);
}

bool VectorField::all_finite() const {
  for (const auto& c : comp_)
    if (!c.all_finite()) return false;
  return true;
}

SymTensorField::SymTensorField(const TorusGrid& grid) : grid_(grid) {
  int d = grid.dim();
  comp_.reserve(d * (d + 1) / 2);
  for (int k = 0; k < d * (d + 1) / 2; ++k) comp_.emplace_back(grid);
}

int SymTensorField::pack(int i, int j) const {
  if (i > j) std::swap(i, j);
  int d = grid_.dim();
  // row-wise upper triangle offset
  return i * d - i * (i - 1) / 2 + (j - i);
}

ScalarField SymTensorField::trace() const {
  ScalarField tr(grid_);
  for (int i = 0; i < grid_.dim(); ++i) {
    const ScalarField& di = at(i, i);
    for (std::size_t k = 0; k < tr.size(); ++k) tr[k] += di[k];
  }
  return tr;
}

ScalarField sample(const TorusGrid& grid, const std::function<double(const std::array<double, 3>&)>& f) {
  ScalarField out(grid);
  const int d = grid.dim();
  const int n = grid.points_per_axis();
  std::array<int, 3> idx{0, 0, 0};
  std::array<double, 3> x{0.0, 0.0, 0.0};
  std::size_t k = 0;
  // odometer over the first d axes
  while (true) {
    for (int a = 0; a < d; ++a) x[a] = grid.coord(idx[a]);
    out[k++] = f(x);
    int a = d - 1;
    while (a >= 0 && ++idx[a] == n) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

ScalarField constant_field(const TorusGrid& grid, double c) {
  ScalarField out(grid);
  for (auto& v : out.values()) v = c;
  return out;
}

namespace {
void check_same(const TorusGrid& a, const TorusGrid& b) {
  if (a != b) throw GridMismatchError();
}
}  // namespace

ScalarField operator+(const ScalarField& a, const ScalarField& b) {
  check_same(a.grid(), b.grid());
  ScalarField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

ScalarField operator-(const ScalarField& a, const ScalarField& b) {
  check_same(a.grid(), b.grid());
  ScalarField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

ScalarField operator*(const ScalarField& a, const ScalarField& b) {
  check_same(a.grid(), b.grid());
  ScalarField out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= b[i];
  return out;
}

ScalarField operator*(double c, const ScalarField& a) {
  ScalarField out = a;
  for (auto& v : out.values()) v *= c;
  return out;
}

VectorField operator+(const VectorField& a, const VectorField& b) {
  check_same(a.grid(), b.grid());
  VectorField out = a;
  for (int c = 0; c < out.components(); ++c) out.comp(c) += b.comp(c);
  return out;
}

VectorField operator-(const VectorField& a, const VectorField& b) {
  check_same(a.grid(), b.grid());
  VectorField out = a;
  for (int c = 0; c < out.components(); ++c) out.comp(c) -= b.comp(c);
  return out;
}

VectorField operator*(double c, const VectorField& a) {
  VectorField out = a;
  for (int k = 0; k < out.components(); ++k)
    for (auto& v : out.comp(k).values()) v *= c;
  return out;
}

ScalarField& operator+=(ScalarField& a, const ScalarField& b) {
  check_same(a.grid(), b.grid());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += b[i];
  return a;
}

ScalarField& operator-=(ScalarField& a, const ScalarField& b) {
  check_same(a.grid(), b.grid());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] -= b[i];
  return a;
}

VectorField& operator+=(VectorField& a, const VectorField& b) {
  check_same(a.grid(), b.grid());
  for (int c = 0; c < a.components(); ++c) a.comp(c) += b.comp(c);
  return a;
}

void shift_by_constant(ScalarField& f, double c) {
  for (auto& v : f.values()) v += c;
}

double mean(const ScalarField& f) {
  return compensated_sum(f.values()) / static_cast<double>(f.size());
}

double integral(const ScalarField& f) {
  return compensated_sum(f.values()) * f.grid().cell_volume();
}

}  // namespace cilab
