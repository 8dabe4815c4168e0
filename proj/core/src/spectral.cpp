#include "cilab/spectral.hpp"

#include <fftw3.h>

#include <array>
#include <cmath>
#include <map>
#include <mutex>

#include "cilab/errors.hpp"
#include "cilab/norms.hpp"

namespace cilab {

namespace {

std::size_t spectrum_size(const TorusGrid& g) {
  std::size_t s = 1;
  for (int a = 0; a < g.dim() - 1; ++a) s *= static_cast<std::size_t>(g.points_per_axis());
  return s * (g.points_per_axis() / 2 + 1);
}

// Plan cache keyed by (d, n).  Plans are created with FFTW_UNALIGNED so the
// new-array execute functions accept arbitrary buffers.
struct PlanPair {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
};

PlanPair& plans_for(const TorusGrid& g) {
  static std::map<std::pair<int, int>, PlanPair> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(g.dim(), g.points_per_axis());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  int n = g.points_per_axis();
  std::vector<int> dims(g.dim(), n);
  std::vector<double> real(g.size());
  std::vector<std::complex<double>> cplx(spectrum_size(g));
  PlanPair p;
  p.r2c = fftw_plan_dft_r2c(g.dim(), dims.data(), real.data(),
                            reinterpret_cast<fftw_complex*>(cplx.data()),
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  p.c2r = fftw_plan_dft_c2r(g.dim(), dims.data(),
                            reinterpret_cast<fftw_complex*>(cplx.data()), real.data(),
                            FFTW_ESTIMATE | FFTW_UNALIGNED);
  return cache.emplace(key, p).first->second;
}

// Iterate the half-spectrum; k holds signed wavenumbers, nyq marks any axis
// sitting exactly on the Nyquist frequency n/2.
template <typename Fn>
void for_each_mode(const TorusGrid& g, Fn&& fn) {
  const int d = g.dim();
  const int n = g.points_per_axis();
  const int half = n / 2 + 1;
  std::array<int, 3> idx{0, 0, 0};
  std::size_t count = spectrum_size(g);
  for (std::size_t i = 0; i < count; ++i) {
    std::array<int, 3> k{0, 0, 0};
    bool nyq = false;
    for (int a = 0; a < d; ++a) {
      int j = idx[a];
      int ka = (a == d - 1) ? j : (j <= n / 2 ? j : j - n);
      if (std::abs(ka) == n / 2) nyq = true;
      k[a] = ka;
    }
    fn(i, k, nyq);
    int a = d - 1;
    while (a >= 0) {
      int limit = (a == d - 1) ? half : n;
      if (++idx[a] < limit) break;
      idx[a--] = 0;
    }
    if (a < 0) break;
  }
}

}  // namespace

Spectrum::Spectrum(const TorusGrid& grid) : grid_(grid), coeff_(spectrum_size(grid)) {}

Spectrum forward(const ScalarField& f) {
  Spectrum s(f.grid());
  std::vector<double> scratch = f.values();
  fftw_execute_dft_r2c(plans_for(f.grid()).r2c, scratch.data(),
                       reinterpret_cast<fftw_complex*>(s.coeff().data()));
  return s;
}

ScalarField inverse(const Spectrum& s) {
  ScalarField f(s.grid());
  std::vector<std::complex<double>> scratch = s.coeff();
  fftw_execute_dft_c2r(plans_for(s.grid()).c2r,
                       reinterpret_cast<fftw_complex*>(scratch.data()), f.values().data());
  double scale = 1.0 / static_cast<double>(s.grid().size());
  for (auto& v : f.values()) v *= scale;
  return f;
}

ScalarField derivative(const ScalarField& f, int axis) {
  Spectrum s = forward(f);
  for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k, bool nyq) {
    if (nyq) {
      s.coeff()[i] = 0.0;
      return;
    }
    s.coeff()[i] *= std::complex<double>(0.0, static_cast<double>(k[axis]));
  });
  return inverse(s);
}

VectorField gradient(const ScalarField& f) {
  Spectrum s = forward(f);
  VectorField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) {
    Spectrum da(f.grid());
    for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k, bool nyq) {
      da.coeff()[i] = nyq ? 0.0 : s.coeff()[i] * std::complex<double>(0.0, k[a]);
    });
    out.comp(a) = inverse(da);
  }
  return out;
}

ScalarField divergence(const VectorField& F) {
  Spectrum acc(F.grid());
  for (int a = 0; a < F.grid().dim(); ++a) {
    Spectrum s = forward(F.comp(a));
    for_each_mode(F.grid(), [&](std::size_t i, const std::array<int, 3>& k, bool nyq) {
      if (!nyq) acc.coeff()[i] += s.coeff()[i] * std::complex<double>(0.0, k[a]);
    });
  }
  return inverse(acc);
}

VectorField divergence(const SymTensorField& S) {
  const int d = S.grid().dim();
  VectorField out(S.grid());
  std::vector<Spectrum> specs;
  specs.reserve(S.components());
  for (int c = 0; c < S.components(); ++c) specs.push_back(forward(S.comp(c)));
  for (int i = 0; i < d; ++i) {
    Spectrum acc(S.grid());
    for (int j = 0; j < d; ++j) {
      const Spectrum& s = specs[S.pack(i, j)];
      for_each_mode(S.grid(), [&](std::size_t m, const std::array<int, 3>& k, bool nyq) {
        if (!nyq) acc.coeff()[m] += s.coeff()[m] * std::complex<double>(0.0, k[j]);
      });
    }
    out.comp(i) = inverse(acc);
  }
  return out;
}

ScalarField laplacian(const ScalarField& f) {
  Spectrum s = forward(f);
  for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k, bool) {
    double k2 = 0.0;
    for (int a = 0; a < f.grid().dim(); ++a) k2 += static_cast<double>(k[a]) * k[a];
    s.coeff()[i] *= -k2;
  });
  return inverse(s);
}

VectorField laplacian(const VectorField& f) {
  VectorField out(f.grid());
  for (int a = 0; a < f.components(); ++a) out.comp(a) = laplacian(f.comp(a));
  return out;
}

ScalarField solve_poisson(const ScalarField& f) {
  Spectrum s = forward(f);
  for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k, bool) {
    double k2 = 0.0;
    for (int a = 0; a < f.grid().dim(); ++a) k2 += static_cast<double>(k[a]) * k[a];
    s.coeff()[i] = (k2 == 0.0) ? 0.0 : s.coeff()[i] / (-k2);
  });
  return inverse(s);
}

namespace {
void require_small_mean(double m, double scale, double tol) {
  if (std::abs(m) > tol * (1.0 + scale)) throw NonZeroMeanError(m);
}
}  // namespace

VectorField antidivergence(const ScalarField& f, double tol_mean) {
  double abs_scale = 0.0;
  {
    std::vector<double> a(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::abs(f[i]);
    abs_scale = compensated_sum(a) / static_cast<double>(f.size());
  }
  require_small_mean(mean(f), abs_scale, tol_mean);
  Spectrum s = forward(f);
  VectorField out(f.grid());
  for (int a = 0; a < f.grid().dim(); ++a) {
    Spectrum da(f.grid());
    for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k, bool nyq) {
      double k2 = 0.0;
      for (int b = 0; b < f.grid().dim(); ++b) k2 += static_cast<double>(k[b]) * k[b];
      if (k2 == 0.0 || nyq) {
        da.coeff()[i] = 0.0;
        return;
      }
      // grad(poisson^-1): symbol (i k_a) / (-|k|^2)
      da.coeff()[i] = s.coeff()[i] * std::complex<double>(0.0, -static_cast<double>(k[a]) / k2);
    });
    out.comp(a) = inverse(da);
  }
  return out;
}

SymTensorField antidivergence_symmetric(const VectorField& F, double tol_mean) {
  const int d = F.grid().dim();
  if (d < 2) throw ConfigError("symmetric antidivergence needs d >= 2");
  for (int a = 0; a < d; ++a) {
    const auto& c = F.comp(a);
    std::vector<double> absv(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) absv[i] = std::abs(c[i]);
    double scale = compensated_sum(absv) / static_cast<double>(c.size());
    require_small_mean(mean(c), scale, tol_mean);
  }

  std::vector<Spectrum> fs;
  fs.reserve(d);
  for (int a = 0; a < d; ++a) fs.push_back(forward(F.comp(a)));

  SymTensorField S(F.grid());
  const double cd = static_cast<double>(2 - d) / (d - 1);
  const double ct = 1.0 / (d - 1);
  for (int i = 0; i < d; ++i) {
    for (int j = i; j < d; ++j) {
      Spectrum sij(F.grid());
      for_each_mode(F.grid(), [&](std::size_t m, const std::array<int, 3>& k, bool nyq) {
        double k2 = 0.0;
        for (int b = 0; b < d; ++b) k2 += static_cast<double>(k[b]) * k[b];
        if (k2 == 0.0 || nyq) {
          sij.coeff()[m] = 0.0;
          return;
        }
        std::complex<double> kdotF = 0.0;
        for (int b = 0; b < d; ++b) kdotF += static_cast<double>(k[b]) * fs[b].coeff()[m];
        std::complex<double> val =
            static_cast<double>(k[i]) * fs[j].coeff()[m] + static_cast<double>(k[j]) * fs[i].coeff()[m];
        val += cd * kdotF * static_cast<double>(k[i]) * static_cast<double>(k[j]) / k2;
        if (i == j) val -= ct * kdotF;
        sij.coeff()[m] = std::complex<double>(0.0, -1.0 / k2) * val;
      });
      S.at(i, j) = inverse(sij);
    }
  }
  return S;
}

VectorField leray_project(const VectorField& F) {
  const int d = F.grid().dim();
  std::vector<Spectrum> fs;
  fs.reserve(d);
  for (int a = 0; a < d; ++a) fs.push_back(forward(F.comp(a)));
  VectorField out(F.grid());
  for (int a = 0; a < d; ++a) {
    Spectrum pa(F.grid());
    for_each_mode(F.grid(), [&](std::size_t m, const std::array<int, 3>& k, bool nyq) {
      double k2 = 0.0;
      for (int b = 0; b < d; ++b) k2 += static_cast<double>(k[b]) * k[b];
      if (k2 == 0.0) {
        pa.coeff()[m] = fs[a].coeff()[m];  // keep the mean flow
        return;
      }
      if (nyq) {
        pa.coeff()[m] = 0.0;
        return;
      }
      std::complex<double> kdotF = 0.0;
      for (int b = 0; b < d; ++b) kdotF += static_cast<double>(k[b]) * fs[b].coeff()[m];
      pa.coeff()[m] = fs[a].coeff()[m] - kdotF * static_cast<double>(k[a]) / k2;
    });
    out.comp(a) = inverse(pa);
  }
  return out;
}

ScalarField low_pass(const ScalarField& f, int kmax) {
  Spectrum s = forward(f);
  for_each_mode(f.grid(), [&](std::size_t i, const std::array<int, 3>& k, bool) {
    for (int a = 0; a < f.grid().dim(); ++a)
      if (std::abs(k[a]) > kmax) {
        s.coeff()[i] = 0.0;
        return;
      }
  });
  return inverse(s);
}

ScalarField random_band_limited(const TorusGrid& grid, int kmax, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ScalarField white(grid);
  for (auto& v : white.values()) v = gauss(rng);
  ScalarField f = low_pass(white, kmax);
  shift_by_constant(f, -mean(f));
  double sup = lp_norm(f, kInfExponent);
  if (sup > 0) {
    for (auto& v : f.values()) v /= sup;
  }
  return f;
}

VectorField random_band_limited_vector(const TorusGrid& grid, int kmax, std::mt19937_64& rng) {
  VectorField out(grid);
  for (int a = 0; a < grid.dim(); ++a) out.comp(a) = random_band_limited(grid, kmax, rng);
  return out;
}

}  // namespace cilab
