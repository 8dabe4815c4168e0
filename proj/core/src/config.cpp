#include "cilab/config.hpp"

#include <nlohmann/json.hpp>

#include "cilab/errors.hpp"

namespace cilab {

using nlohmann::json;

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::TransportStep: return "transport-step";
    case RunMode::TransportIterate: return "transport-iterate";
    case RunMode::NsBookkeeping: return "ns-bookkeeping";
    case RunMode::CalibrateM: return "calibrate-M";
    case RunMode::LemmaSuite: return "lemma-suite";
    case RunMode::IntermittencySweep: return "intermittency-sweep";
  }
  return "?";
}

RunMode run_mode_from_string(const std::string& name) {
  if (name == "transport-step") return RunMode::TransportStep;
  if (name == "transport-iterate") return RunMode::TransportIterate;
  if (name == "ns-bookkeeping") return RunMode::NsBookkeeping;
  if (name == "calibrate-M") return RunMode::CalibrateM;
  if (name == "lemma-suite") return RunMode::LemmaSuite;
  if (name == "intermittency-sweep") return RunMode::IntermittencySweep;
  throw ConfigError("unknown mode '" + name + "'");
}

namespace {

std::string axial_name(AxialKind k) {
  switch (k) {
    case AxialKind::Flat: return "flat";
    case AxialKind::Harmonic: return "harmonic";
    case AxialKind::Bump: return "bump";
  }
  return "?";
}

AxialKind axial_from(const std::string& s) {
  if (s == "flat") return AxialKind::Flat;
  if (s == "harmonic") return AxialKind::Harmonic;
  if (s == "bump") return AxialKind::Bump;
  throw ConfigError("axial kind must be flat, harmonic or bump");
}

}  // namespace

void RunConfig::validate() const {
  if (grid_d < 1 || grid_d > 3) throw ConfigError("grid.d must be 1, 2 or 3");
  if (grid_n < 8 || (grid_n & (grid_n - 1)) != 0)
    throw ConfigError("grid.n must be a power of two >= 8");
  if (!(time_T > 0)) throw ConfigError("time.T must be positive");
  if (time_m < 2) throw ConfigError("time.m must be >= 2");
  if (!(p > 1.0)) throw ConfigError("exponents.p: requires p > 1");
  if (!(p_tilde >= 1.0)) throw ConfigError("exponents.p_tilde: requires p~ >= 1");
  if (1.0 / p + 1.0 / p_tilde <= 1.0 + 1.0 / grid_d)
    throw ConfigError("exponents: requires 1/p + 1/p~ > 1 + 1/d");
  if (mode == RunMode::NsBookkeeping || mode == RunMode::IntermittencySweep) {
    double threshold = 2.0 * grid_d / (grid_d + 2.0);
    if (!(r >= 1.0 && r < threshold))
      throw ConfigError("exponents.r: requires 1 <= r < 2d/(d+2)");
  }
  if (!(M >= 1.0)) throw ConfigError("M must be >= 1");
  if (delta && !(*delta > 0.0)) throw ConfigError("delta must be positive");
  if (k_max < 1) throw ConfigError("k-max must be >= 1");
  if (dump_every < 0) throw ConfigError("dump-every must be >= 0");
  if (out_dir.empty()) throw ConfigError("out directory must be set");
}

std::string RunConfig::to_json() const {
  json j;
  j["schema"] = "cilab-config-v1";
  j["mode"] = to_string(mode);
  j["grid"] = {{"d", grid_d}, {"n", grid_n}};
  j["time"] = {{"T", time_T}, {"m", time_m}};
  j["exponents"] = {{"p", p}, {"p_tilde", p_tilde}, {"r", r}};
  json mk;
  mk["lambda"] = mikado.lambda;
  mk["alpha"] = mikado.alpha;
  mk["beta"] = mikado.beta;
  mk["gamma"] = mikado.gamma;
  if (mikado.mu_override > 0) mk["mu"] = mikado.mu_override;
  if (mikado.nu_override > 0) mk["nu"] = mikado.nu_override;
  if (mikado.omega_override > 0) mk["omega"] = mikado.omega_override;
  if (mikado.transverse_freq > 0) mk["transverse_freq"] = mikado.transverse_freq;
  mk["axial"] = axial_name(mikado.axial);
  mk["axial_conc"] = mikado.axial_conc;
  mk["alternate_signs"] = mikado.alternate_signs;
  mk["balance"] = mikado.balance;
  j["mikado"] = mk;
  if (delta)
    j["delta"] = *delta;
  else
    j["delta"] = "auto";
  j["M"] = M;
  j["energy_profile"] = {{"poly", profile_poly}, {"cosine", profile_cosine}};
  j["demo"] = {{"rho_amp", demo.rho_amp},       {"rho_drift", demo.rho_drift},
               {"u_amp", demo.u_amp},           {"margin", demo.margin},
               {"defect_scale", demo.defect_scale}, {"ns_amp", demo.ns_amp},
               {"ns_perturbation", demo.ns_perturbation}};
  json sw;
  sw["lambdas"] = sweep.lambdas;
  if (!sweep.mus.empty()) sw["mus"] = sweep.mus;
  if (!sweep.nus.empty()) sw["nus"] = sweep.nus;
  if (!sweep.omegas.empty()) sw["omegas"] = sweep.omegas;
  j["sweep"] = sw;
  j["k_max"] = k_max;
  j["out"] = out_dir;
  j["dump_every"] = dump_every;
  j["seed"] = seed;
  return j.dump(2);
}

RunConfig RunConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("config is not valid JSON: ") + ex.what());
  }
  RunConfig c;
  try {
    if (j.contains("mode")) c.mode = run_mode_from_string(j["mode"].get<std::string>());
    if (j.contains("grid")) {
      c.grid_d = j["grid"].value("d", c.grid_d);
      c.grid_n = j["grid"].value("n", c.grid_n);
    }
    if (j.contains("time")) {
      c.time_T = j["time"].value("T", c.time_T);
      c.time_m = j["time"].value("m", c.time_m);
    }
    if (j.contains("exponents")) {
      c.p = j["exponents"].value("p", c.p);
      c.p_tilde = j["exponents"].value("p_tilde", c.p_tilde);
      c.r = j["exponents"].value("r", c.r);
    }
    if (j.contains("mikado")) {
      const auto& mk = j["mikado"];
      c.mikado.lambda = mk.value("lambda", c.mikado.lambda);
      c.mikado.alpha = mk.value("alpha", c.mikado.alpha);
      c.mikado.beta = mk.value("beta", c.mikado.beta);
      c.mikado.gamma = mk.value("gamma", c.mikado.gamma);
      c.mikado.mu_override = mk.value("mu", 0.0);
      c.mikado.nu_override = mk.value("nu", 0L);
      c.mikado.omega_override = mk.value("omega", 0.0);
      c.mikado.transverse_freq = mk.value("transverse_freq", 0);
      if (mk.contains("axial")) c.mikado.axial = axial_from(mk["axial"].get<std::string>());
      c.mikado.axial_conc = mk.value("axial_conc", c.mikado.axial_conc);
      c.mikado.alternate_signs = mk.value("alternate_signs", c.mikado.alternate_signs);
      c.mikado.balance = mk.value("balance", c.mikado.balance);
    }
    if (j.contains("delta") && j["delta"].is_number()) c.delta = j["delta"].get<double>();
    c.M = j.value("M", c.M);
    if (j.contains("energy_profile")) {
      c.profile_poly = j["energy_profile"].value("poly", c.profile_poly);
      c.profile_cosine = j["energy_profile"].value("cosine", c.profile_cosine);
    }
    if (j.contains("demo")) {
      const auto& dm = j["demo"];
      c.demo.rho_amp = dm.value("rho_amp", c.demo.rho_amp);
      c.demo.rho_drift = dm.value("rho_drift", c.demo.rho_drift);
      c.demo.u_amp = dm.value("u_amp", c.demo.u_amp);
      c.demo.margin = dm.value("margin", c.demo.margin);
      c.demo.defect_scale = dm.value("defect_scale", c.demo.defect_scale);
      c.demo.ns_amp = dm.value("ns_amp", c.demo.ns_amp);
      c.demo.ns_perturbation = dm.value("ns_perturbation", c.demo.ns_perturbation);
    }
    if (j.contains("sweep")) {
      const auto& sw = j["sweep"];
      c.sweep.lambdas = sw.value("lambdas", c.sweep.lambdas);
      c.sweep.mus = sw.value("mus", c.sweep.mus);
      c.sweep.nus = sw.value("nus", c.sweep.nus);
      c.sweep.omegas = sw.value("omegas", c.sweep.omegas);
    }
    c.k_max = j.value("k_max", c.k_max);
    c.out_dir = j.value("out", c.out_dir);
    c.dump_every = j.value("dump_every", c.dump_every);
    c.seed = j.value("seed", c.seed);
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("malformed config field: ") + ex.what());
  }
  c.validate();
  return c;
}

std::string RunConfig::hash() const {
  std::string s = to_json();
  unsigned long long h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016llx", h);
  return buf;
}

}  // namespace cilab
