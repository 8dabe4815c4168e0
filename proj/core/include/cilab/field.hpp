#pragma once

#include <array>
#include <functional>
#include <vector>

#include "cilab/grid.hpp"

namespace cilab {

/// Real scalar samples on a TorusGrid.
class ScalarField {
 public:
  explicit ScalarField(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return values_.size(); }
  double& operator[](std::size_t i) { return values_[i]; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::vector<double>& values() { return values_; }
  const std::vector<double>& values() const { return values_; }

  bool all_finite() const;

 private:
  TorusGrid grid_;
  std::vector<double> values_;
};

/// d real components on a TorusGrid.
class VectorField {
 public:
  explicit VectorField(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int components() const { return static_cast<int>(comp_.size()); }
  ScalarField& comp(int a) { return comp_[a]; }
  const ScalarField& comp(int a) const { return comp_[a]; }

  bool all_finite() const;

 private:
  TorusGrid grid_;
  std::vector<ScalarField> comp_;
};

/// Symmetric d x d tensor, upper triangle stored row-wise:
/// d = 2 -> (00, 01, 11); d = 3 -> (00, 01, 02, 11, 12, 22).
class SymTensorField {
 public:
  explicit SymTensorField(const TorusGrid& grid);

  const TorusGrid& grid() const { return grid_; }
  int components() const { return static_cast<int>(comp_.size()); }
  ScalarField& comp(int k) { return comp_[k]; }
  const ScalarField& comp(int k) const { return comp_[k]; }

  ScalarField& at(int i, int j) { return comp_[pack(i, j)]; }
  const ScalarField& at(int i, int j) const { return comp_[pack(i, j)]; }
  int pack(int i, int j) const;

  /// Pointwise trace into a scalar field.
  ScalarField trace() const;

 private:
  TorusGrid grid_;
  std::vector<ScalarField> comp_;
};

/// Evaluate f(x) at every grid point.  The callable receives the coordinates
/// as a 3-array; unused trailing entries are zero.
ScalarField sample(const TorusGrid& grid, const std::function<double(const std::array<double, 3>&)>& f);

ScalarField constant_field(const TorusGrid& grid, double c);

/// Pointwise arithmetic (grids must match).
ScalarField operator+(const ScalarField& a, const ScalarField& b);
ScalarField operator-(const ScalarField& a, const ScalarField& b);
ScalarField operator*(const ScalarField& a, const ScalarField& b);
ScalarField operator*(double c, const ScalarField& a);
VectorField operator+(const VectorField& a, const VectorField& b);
VectorField operator-(const VectorField& a, const VectorField& b);
VectorField operator*(double c, const VectorField& a);

ScalarField& operator+=(ScalarField& a, const ScalarField& b);
ScalarField& operator-=(ScalarField& a, const ScalarField& b);
VectorField& operator+=(VectorField& a, const VectorField& b);

void shift_by_constant(ScalarField& f, double c);

/// Mean over the torus (normalized integral, compensated summation).
double mean(const ScalarField& f);
/// Plain integral against the Lebesgue measure on [0, 2*pi)^d.
double integral(const ScalarField& f);

}  // namespace cilab
