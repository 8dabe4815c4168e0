#pragma once

#include <limits>
#include <span>
#include <vector>

#include "cilab/field.hpp"

namespace cilab {

inline constexpr double kInfExponent = std::numeric_limits<double>::infinity();

/// Neumaier-compensated sum in fixed index order: deterministic and
/// order-robust to ~1e-13 relative.
double compensated_sum(std::span<const double> xs);

/// L^p norm by grid quadrature; p = infinity gives the sup over grid points.
/// Rejects p < 1.
double lp_norm(const ScalarField& f, double p);
/// Vector fields use the pointwise Euclidean magnitude.
double lp_norm(const VectorField& f, double p);
double lp_norm(const SymTensorField& f, double p);

/// lp_norm(f, p) + lp_norm(grad f, p), gradient spectral.  For vector fields
/// the Jacobian enters through its pointwise Frobenius norm.
double sobolev_norm(const ScalarField& f, double p);
double sobolev_norm(const VectorField& f, double p);

/// sup |f| + sup |grad f| over grid points.
double c1_norm(const ScalarField& f);
double c1_norm(const VectorField& f);

/// Measured averaging defect |integral(f g(lambda .)) - integral(f) mean(g)|.
/// g is sampled at lambda-fold wound grid indices, which is exact for integer
/// lambda.  Throws AliasRiskError for lambda > n/4.
double fast_osc_error(const ScalarField& f, const ScalarField& g_profile, int lambda);

/// Same contraction of the grid indices used by fast_osc_error: returns the
/// field x -> g(lambda x + shift), with shift applied per axis in grid units.
ScalarField rescale_winding(const ScalarField& g, int lambda, const std::array<int, 3>& shift_cells = {0, 0, 0});

}  // namespace cilab
