#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cilab/mikado.hpp"

namespace cilab {

enum class RunMode {
  TransportStep,
  TransportIterate,
  NsBookkeeping,
  CalibrateM,
  LemmaSuite,
  IntermittencySweep,
};

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& name);

struct SweepSpec {
  std::vector<int> lambdas;
  std::vector<double> mus;     // aligned overrides, optional
  std::vector<long> nus;
  std::vector<double> omegas;
};

struct DemoKnobs {
  double rho_amp = 0.3;
  double rho_drift = 0.05;
  double u_amp = 0.02;
  double margin = 0.5;
  double defect_scale = 1.0;  // scales the time drift that generates R
  double ns_amp = 1.0;
  double ns_perturbation = 0.0;
};

struct RunConfig {
  RunMode mode = RunMode::TransportStep;
  int grid_d = 2;
  int grid_n = 128;
  double time_T = 0.1;
  int time_m = 9;
  double p = 1.5;
  double p_tilde = 1.0;
  double r = 1.0;
  MikadoParams mikado;
  std::optional<double> delta;  // absent -> chosen from the margin
  double M = 1.0;
  std::vector<double> profile_poly{};     // energy profile coefficients
  std::vector<double> profile_cosine{};   // empty profile -> demo-derived
  DemoKnobs demo;
  SweepSpec sweep;
  int k_max = 3;
  std::string out_dir = "out";
  int dump_every = 0;
  unsigned long seed = 20260810;

  /// Exponent conditions and basic ranges; ConfigError with a field-level
  /// message on violation.
  void validate() const;

  std::string to_json() const;
  static RunConfig from_json(const std::string& text);
  /// FNV-1a hash of the canonical JSON dump.
  std::string hash() const;
};

}  // namespace cilab
