#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace cilab {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform collocation grid on the d-torus [0, 2*pi)^d, n points per axis.
///
/// Points are x_a = 2*pi*i_a/n.  Row-major storage with axis 0 slowest, so
/// flat index = ((i_0*n + i_1)*n + i_2) for d = 3.  Quadrature weight of one
/// point is (2*pi/n)^d (trapezoid rule; spectrally accurate on periodic data).
class TorusGrid {
 public:
  TorusGrid(int d, int n);

  int dim() const { return d_; }
  int points_per_axis() const { return n_; }
  std::size_t size() const { return size_; }
  double spacing() const { return kTwoPi / n_; }
  double cell_volume() const { return cell_volume_; }
  double volume() const { return volume_; }

  double coord(int index_on_axis) const { return spacing() * index_on_axis; }

  std::size_t flat(const std::array<int, 3>& idx) const {
    std::size_t f = 0;
    for (int a = 0; a < d_; ++a) f = f * n_ + static_cast<std::size_t>(idx[a]);
    return f;
  }

  bool operator==(const TorusGrid& o) const { return d_ == o.d_ && n_ == o.n_; }
  bool operator!=(const TorusGrid& o) const { return !(*this == o); }

 private:
  int d_;
  int n_;
  std::size_t size_;
  double cell_volume_;
  double volume_;
};

/// Uniform samples of [0, T], both endpoints included.
class TimeGrid {
 public:
  TimeGrid() : TimeGrid(1.0, 2) {}
  TimeGrid(double T, int m);

  double horizon() const { return T_; }
  int samples() const { return m_; }
  double dt() const { return dt_; }
  double t(int i) const { return dt_ * i; }

  bool operator==(const TimeGrid& o) const { return T_ == o.T_ && m_ == o.m_; }
  bool operator!=(const TimeGrid& o) const { return !(*this == o); }

 private:
  double T_;
  int m_;
  double dt_;
};

/// Wrap a coordinate into [0, 2*pi).
double wrap_torus(double x);
/// Wrap into [-pi, pi): signed distance to 0 on the circle.
double wrap_signed(double x);

}  // namespace cilab
