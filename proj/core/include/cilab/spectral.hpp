#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include "cilab/field.hpp"

namespace cilab {

/// Half-spectrum (real-to-complex layout, last axis halved to n/2+1).
class Spectrum {
 public:
  Spectrum(const TorusGrid& grid);
  const TorusGrid& grid() const { return grid_; }
  std::vector<std::complex<double>>& coeff() { return coeff_; }
  const std::vector<std::complex<double>>& coeff() const { return coeff_; }

 private:
  TorusGrid grid_;
  std::vector<std::complex<double>> coeff_;
};

Spectrum forward(const ScalarField& f);
ScalarField inverse(const Spectrum& s);

/// Spectral first derivative along one axis (Nyquist modes zeroed).
ScalarField derivative(const ScalarField& f, int axis);

VectorField gradient(const ScalarField& f);
ScalarField divergence(const VectorField& F);
/// Row divergence (div S)_i = sum_j d_j S_ij.
VectorField divergence(const SymTensorField& S);
ScalarField laplacian(const ScalarField& f);
VectorField laplacian(const VectorField& f);

/// Solve laplacian(u) = f for the zero-mean u; the k = 0 mode of f is dropped.
ScalarField solve_poisson(const ScalarField& f);

/// R = grad(laplacian^-1 f): divergence(R) = f spectrally, R mean-zero.
/// Throws NonZeroMeanError when |mean f| > tol_mean * (1 + mean |f|).
VectorField antidivergence(const ScalarField& f, double tol_mean = 1e-10);

/// Traceless symmetric S with divergence(S) = F.  Fourier-symbol solution of
///   i k . S^(k) = F^(k),  tr S^ = 0:
///   S^_ij = (-i/|k|^2) [ k_i F_j + k_j F_i
///                        + (2-d)/(d-1) (k.F) k_i k_j / |k|^2
///                        - 1/(d-1) (k.F) delta_ij ],   k != 0.
SymTensorField antidivergence_symmetric(const VectorField& F, double tol_mean = 1e-10);

/// Divergence-free (Leray) projection; also returns nothing extra: the
/// curl-free remainder is F - project.
VectorField leray_project(const VectorField& F);

/// Zero all modes with any |k_a| > kmax.
ScalarField low_pass(const ScalarField& f, int kmax);

/// Random real field with modes only in |k_a| <= kmax (top of the spectrum
/// empty), O(1) amplitude, zero mean.
ScalarField random_band_limited(const TorusGrid& grid, int kmax, std::mt19937_64& rng);
VectorField random_band_limited_vector(const TorusGrid& grid, int kmax, std::mt19937_64& rng);

}  // namespace cilab
