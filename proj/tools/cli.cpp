#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cavicool/analysis.hpp"
#include "cavicool/dynamics.hpp"
#include "cavicool/errors.hpp"
#include "cavicool/oracle.hpp"
#include "cavicool/params.hpp"
#include "cavicool/rates.hpp"

namespace cavicool::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();
constexpr double kVerifyTolerance = 1e-10;
constexpr double kVerifyGuard = 1e-6;

struct Settings {
  Params params = contour_preset();
  std::string preset = "contour";
  std::string out;
  std::string format = "csv";
  bool strong_coupling = false;

  double theta_L_deg = kUnset;
  double theta_c_deg = kUnset;
  double phi_deg = kUnset;

  double delta_c_min = -20.0;
  double delta_c_max = 60.0;
  int delta_c_steps = 0;  // 0: subcommand default
  double Delta_min = -10.0;
  double Delta_max = 10.0;
  int Delta_steps = 0;
  double g_min = 1.0;
  double g_max = 12.0;
  int g_steps = 45;

  double t_final = 0.0;  // 0: five relaxation times
  double dt = 0.0;       // 0: t_final / 200
  double n0 = 3.0;
  std::string initial = "thermal";
  int n_max = static_cast<int>(kDefaultMaxPhonon);

  int samples = 1000;
  std::uint64_t seed = 20061;
};

// One flag that may also come from the config file. The CLI value is parsed
// into a staging copy; resolution order is preset < config file < flag.
struct Binding {
  std::string key;
  CLI::Option* option;
  std::function<void(Settings&, Settings&)> copy;
  std::function<void(Settings&, const json&)> load;
};

template <class T, class Access>
void add_setting(CLI::App& app, std::vector<Binding>& registry, Settings& staging, const std::string& key,
          Access access, const std::string& help) {
  CLI::Option* opt = app.add_option("--" + key, access(staging), help);
  registry.push_back({key, opt, [access](Settings& dst, Settings& src) { access(dst) = access(src); },
                      [access](Settings& dst, const json& v) { access(dst) = v.get<T>(); }});
}

Params preset_params(const std::string& name) {
  if (name == "contour") return contour_preset();
  if (name == "sideband") return sideband_comparison_preset();
  if (name == "interference") return interference_preset();
  throw InvalidParams("unknown preset '" + name + "' (contour | sideband | interference)");
}

std::string number(double v) {
  if (std::isnan(v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json nullable(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

json params_json(const Params& p) {
  return json{{"nu", kNu},           {"gamma", p.gamma},     {"kappa", p.kappa},     {"Omega", p.Omega},
              {"g-tilde", p.g_tilde}, {"phi", p.phi},         {"theta-L", p.theta_L}, {"theta-c", p.theta_c},
              {"Delta", p.Delta},    {"delta-c", p.delta_c}, {"eta", p.eta},         {"alpha", p.alpha},
              {"varphi-L", p.varphi_L()}, {"varphi-c", p.varphi_c()}, {"bare-g", p.bare_g()}};
}

json complex_json(complex z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json rates_json(const RateSet& r) {
  return json{{"A_plus_gamma", r.A_plus_gamma}, {"A_minus_gamma", r.A_minus_gamma},
              {"A_plus_kappa", r.A_plus_kappa}, {"A_minus_kappa", r.A_minus_kappa},
              {"A_plus", r.A_plus},             {"A_minus", r.A_minus}};
}

class Output {
 public:
  Output(const Settings& s, std::ostream& fallback) : settings_(s), fallback_(fallback) {}

  bool json_format() const { return settings_.format == "json"; }

  void csv_preamble(std::ostream& os, const Params& p) const {
    os << "# params: " << params_json(p).dump() << '\n';
  }

  void emit(const std::string& text) const {
    if (settings_.out.empty()) {
      fallback_ << text;
      return;
    }
    std::ofstream file(settings_.out, std::ios::binary);
    if (!file) throw InvalidParams("cannot open output file " + settings_.out);
    file << text;
  }

 private:
  const Settings& settings_;
  std::ostream& fallback_;
};

void report_warnings(const Params& p, bool strong, std::ostream& err) {
  for (Warning w : validity_check(p, strong)) err << "warning: " << describe(w) << '\n';
}

json warnings_json(const Params& p, bool strong) {
  json arr = json::array();
  for (Warning w : validity_check(p, strong)) arr.push_back(std::string(code(w)));
  return arr;
}

int cmd_rates(const Settings& s, const Output& o) {
  const Params& p = s.params;
  const Amplitudes a = amplitudes(p);
  const RateSet r = assemble_rates(p, a);
  std::ostringstream os;
  const std::pair<const char*, const SidebandAmplitudes*> sides[] = {{"plus", &a.plus}, {"minus", &a.minus}};
  if (o.json_format()) {
    json amps;
    for (auto [name, sa] : sides) {
      amps[std::string("T_S_") + name] = complex_json(sa->carrier);
      amps[std::string("T_L_gamma_") + name] = complex_json(sa->laser_gamma);
      amps[std::string("T_L_kappa_") + name] = complex_json(sa->laser_kappa);
      amps[std::string("T_c_gamma_") + name] = complex_json(sa->cavity_gamma);
      amps[std::string("T_c_kappa_") + name] = complex_json(sa->cavity_kappa);
    }
    json doc{{"params", params_json(p)},
             {"amplitudes", amps},
             {"rates", rates_json(r)},
             {"warnings", warnings_json(p, s.strong_coupling)}};
    os << doc.dump(2) << '\n';
  } else {
    o.csv_preamble(os, p);
    os << "quantity,re,im\n";
    auto row = [&](const std::string& name, complex z) {
      os << name << ',' << number(z.real()) << ',' << number(z.imag()) << '\n';
    };
    for (auto [name, sa] : sides) {
      row(std::string("T_S_") + name, sa->carrier);
      row(std::string("T_L_gamma_") + name, sa->laser_gamma);
      row(std::string("T_L_kappa_") + name, sa->laser_kappa);
      row(std::string("T_c_gamma_") + name, sa->cavity_gamma);
      row(std::string("T_c_kappa_") + name, sa->cavity_kappa);
    }
    const json coefficients = rates_json(r);
    for (auto& [k, v] : coefficients.items()) os << k << ',' << number(v.get<double>()) << ",0\n";
  }
  o.emit(os.str());
  return kOk;
}

void sweep_row(std::ostream& os, double dc, double D, double n_st, double W, PointStatus st) {
  const bool ok = st == PointStatus::Ok;
  os << number(dc) << ',' << number(D) << ',' << (ok ? number(n_st) : "") << ',' << (ok ? number(W) : "")
     << ',' << to_string(st) << '\n';
}

json sweep_point(double dc, double D, double n_st, double W, PointStatus st) {
  const bool ok = st == PointStatus::Ok;
  return json{{"delta_c", dc},
              {"Delta", D},
              {"n_st", ok ? nullable(n_st) : json(nullptr)},
              {"W", ok ? nullable(W) : json(nullptr)},
              {"status", std::string(to_string(st))}};
}

int cmd_steady(const Settings& s, const Output& o, std::ostream& err) {
  const Params& p = s.params;
  const PointOutcome r = evaluate_point(p);
  std::ostringstream os;
  if (o.json_format()) {
    json doc = sweep_point(p.delta_c, p.Delta, r.n_st, r.W, r.status);
    doc["params"] = params_json(p);
    if (r.status != PointStatus::Singular) doc["rates"] = rates_json(r.rates);
    doc["warnings"] = warnings_json(p, s.strong_coupling);
    os << doc.dump(2) << '\n';
  } else {
    o.csv_preamble(os, p);
    os << "delta_c,Delta,n_st,W,status\n";
    sweep_row(os, p.delta_c, p.Delta, r.n_st, r.W, r.status);
  }
  o.emit(os.str());
  if (r.status != PointStatus::Singular) return kOk;
  err << "error: near-singular denominator at this point\n";
  return kComputationError;
}

int cmd_evolve(const Settings& s, const Output& o, std::ostream& err) {
  const Params& p = s.params;
  const RateSet r = rates(p);
  if (s.n_max < 1) throw InvalidParams("--n-max must be >= 1");
  const auto n_max = static_cast<std::size_t>(s.n_max);
  OccupationDistribution p0 = OccupationDistribution::fock(0, n_max);
  if (s.initial == "thermal") {
    p0 = OccupationDistribution::thermal(s.n0, n_max);
  } else if (s.initial == "fock") {
    if (s.n0 < 0 || s.n0 != std::floor(s.n0)) throw InvalidParams("--n0 must be a phonon number for fock");
    p0 = OccupationDistribution::fock(static_cast<std::size_t>(s.n0), n_max);
  } else {
    throw InvalidParams("--initial must be thermal or fock");
  }

  const double W = cooling_rate(r, p.eta);
  double t_final = s.t_final;
  if (t_final <= 0.0) {
    if (!(W > 0.0)) throw InvalidParams("heating regime: pass --t-final explicitly");
    t_final = 5.0 / W;
  }
  const double dt = s.dt > 0.0 ? s.dt : t_final / 200.0;
  const Trajectory traj = evolve(p0, r, p.eta, t_final, dt);
  const std::vector<double> means = traj.means();
  double fitted = kUnset;
  try {
    fitted = fit_relaxation_rate(traj.times, means);
  } catch (const InvalidParams& e) {
    err << "note: " << e.what() << '\n';
  }

  std::ostringstream os;
  if (o.json_format()) {
    json probs = json::array();
    for (const auto& st : traj.states) probs.push_back(std::vector<double>(st.probs().begin(), st.probs().end()));
    json doc{{"params", params_json(p)},      {"rates", rates_json(r)},  {"W", W},
             {"fitted_rate", nullable(fitted)}, {"times", traj.times}, {"mean_n", means},
             {"probs", probs}};
    os << doc.dump() << '\n';
  } else {
    o.csv_preamble(os, p);
    os << "# W: " << number(W) << "\n# fitted_rate: " << number(fitted) << '\n';
    os << "t,mean_n";
    const std::size_t levels = traj.states.front().probs().size();
    for (std::size_t n = 0; n < levels; ++n) os << ",p_" << n;
    os << '\n';
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
      os << number(traj.times[k]) << ',' << number(means[k]);
      for (double v : traj.states[k].probs()) os << ',' << number(v);
      os << '\n';
    }
  }
  o.emit(os.str());
  return kOk;
}

int cmd_sweep(const Settings& s, const Output& o, std::ostream& err) {
  const auto dc_axis = linspace(s.delta_c_min, s.delta_c_max, s.delta_c_steps > 0 ? s.delta_c_steps : 161);
  const auto D_axis = linspace(s.Delta_min, s.Delta_max, s.Delta_steps > 0 ? s.Delta_steps : 81);
  const SweepResult res = sweep(s.params, dc_axis, D_axis);

  std::ostringstream os;
  if (o.json_format()) {
    json points = json::array();
    for (std::size_t i = 0; i < D_axis.size(); ++i)
      for (std::size_t j = 0; j < dc_axis.size(); ++j) {
        const std::size_t k = res.index(i, j);
        points.push_back(sweep_point(dc_axis[j], D_axis[i], res.n_st[k], res.W[k], res.status[k]));
      }
    json doc{{"params", params_json(s.params)},
             {"delta_c_axis", dc_axis},
             {"Delta_axis", D_axis},
             {"points", points}};
    os << doc.dump() << '\n';
  } else {
    o.csv_preamble(os, s.params);
    os << "delta_c,Delta,n_st,W,status\n";
    for (std::size_t i = 0; i < D_axis.size(); ++i)
      for (std::size_t j = 0; j < dc_axis.size(); ++j) {
        const std::size_t k = res.index(i, j);
        sweep_row(os, dc_axis[j], D_axis[i], res.n_st[k], res.W[k], res.status[k]);
      }
  }
  o.emit(os.str());

  const std::size_t singular = res.count(PointStatus::Singular);
  if (2 * singular > res.status.size()) {
    err << "error: " << singular << " of " << res.status.size() << " sweep points are singular\n";
    return kSweepFailures;
  }
  return kOk;
}

int cmd_opt_detuning(const Settings& s, const Output& o) {
  const auto D_axis = linspace(s.Delta_min, s.Delta_max, s.Delta_steps > 0 ? s.Delta_steps : 41);
  std::ostringstream os;
  json rows = json::array();
  if (!o.json_format()) {
    o.csv_preamble(os, s.params);
    os << "Delta,delta_opt,status\n";
  }
  for (double D : D_axis) {
    double v = kUnset;
    try {
      v = optimal_detuning(D, s.params);
    } catch (const PoleAtDelta&) {
    }
    const char* status = std::isnan(v) ? "pole" : "ok";
    if (o.json_format()) {
      rows.push_back(json{{"Delta", D}, {"delta_opt", nullable(v)}, {"status", status}});
    } else {
      os << number(D) << ',' << number(v) << ',' << status << '\n';
    }
  }
  if (o.json_format()) os << json{{"params", params_json(s.params)}, {"rows", rows}}.dump(2) << '\n';
  o.emit(os.str());
  return kOk;
}

int cmd_interference(const Settings& s, const Output& o, std::ostream& err) {
  SearchBox box;
  box.delta_c_min = s.delta_c_min;
  box.delta_c_max = s.delta_c_max;
  box.Delta_min = s.Delta_min;
  box.Delta_max = s.Delta_max;
  if (s.delta_c_steps > 0) box.delta_c_seeds = s.delta_c_steps;
  if (s.Delta_steps > 0) box.Delta_seeds = s.Delta_steps;

  RootSearch found;
  try {
    found = find_interference_roots(s.params, box);
  } catch (const NoRootsFound& e) {
    err << "note: " << e.what() << '\n';
  }
  if (!found.diagnostic.empty()) err << "warning: " << found.diagnostic << '\n';

  json existence = nullptr;
  try {
    const ExistenceDiagnosis d = existence_condition(s.params);
    existence = json{{"varphi", d.varphi},
                     {"branch", d.positive_branch ? "positive" : "negative"},
                     {"measure", d.measure},
                     {"holds", d.holds},
                     {"lossless_measure", d.lossless_measure},
                     {"lossless_holds", d.lossless_holds}};
  } catch (const UndefinedPhi& e) {
    err << "note: " << e.what() << '\n';
  }

  std::ostringstream os;
  if (o.json_format()) {
    json roots = json::array();
    for (const auto& r : found.roots)
      roots.push_back(json{{"branch", std::string(to_string(r.branch))},
                           {"delta_c", r.delta_c},
                           {"Delta", r.Delta},
                           {"residual", r.residual}});
    json doc{{"params", params_json(s.params)},
             {"roots", roots},
             {"seeds", found.seeds},
             {"non_converged", found.non_converged},
             {"diagnostic", found.diagnostic},
             {"existence", existence}};
    os << doc.dump(2) << '\n';
  } else {
    o.csv_preamble(os, s.params);
    if (!existence.is_null()) os << "# existence: " << existence.dump() << '\n';
    os << "branch,delta_c,Delta,residual\n";
    for (const auto& r : found.roots)
      os << to_string(r.branch) << ',' << number(r.delta_c) << ',' << number(r.Delta) << ','
         << number(r.residual) << '\n';
  }
  o.emit(os.str());
  return kOk;
}

int cmd_compare_sideband(const Settings& s, const Output& o) {
  const auto g_axis = linspace(s.g_min, s.g_max, s.g_steps);
  const auto rows = compare_sideband(s.params, g_axis);
  auto cell = [](const PointOutcome& x, double v) { return x.status == PointStatus::Ok ? v : kUnset; };

  std::ostringstream os;
  if (o.json_format()) {
    json arr = json::array();
    for (const auto& r : rows)
      arr.push_back(json{{"g_tilde", r.g_tilde},
                         {"delta_c", r.delta_c},
                         {"n_cavity", nullable(cell(r.cavity, r.cavity.n_st))},
                         {"W_cavity", nullable(cell(r.cavity, r.cavity.W))},
                         {"status_cavity", std::string(to_string(r.cavity.status))},
                         {"n_sideband", nullable(cell(r.sideband, r.sideband.n_st))},
                         {"W_sideband", nullable(cell(r.sideband, r.sideband.W))},
                         {"status_sideband", std::string(to_string(r.sideband.status))}});
    os << json{{"params", params_json(s.params)}, {"rows", arr}}.dump(2) << '\n';
  } else {
    o.csv_preamble(os, s.params);
    os << "g_tilde,delta_c,n_cavity,W_cavity,status_cavity,n_sideband,W_sideband,status_sideband\n";
    for (const auto& r : rows)
      os << number(r.g_tilde) << ',' << number(r.delta_c) << ',' << number(cell(r.cavity, r.cavity.n_st)) << ','
         << number(cell(r.cavity, r.cavity.W)) << ',' << to_string(r.cavity.status) << ','
         << number(cell(r.sideband, r.sideband.n_st)) << ',' << number(cell(r.sideband, r.sideband.W)) << ','
         << to_string(r.sideband.status) << '\n';
  }
  o.emit(os.str());
  return kOk;
}

int cmd_verify(const Settings& s, const Output& o, std::ostream& err) {
  if (s.samples < 1) throw InvalidParams("--samples must be >= 1");
  const oracle::VerifyReport rep =
      oracle::verify_random(static_cast<std::size_t>(s.samples), s.seed, kVerifyGuard);
  const bool pass = rep.max_relative_error <= kVerifyTolerance;
  std::ostringstream os;
  if (o.json_format()) {
    json doc{{"samples", rep.samples},
             {"seed", s.seed},
             {"max_relative_error", rep.max_relative_error},
             {"tolerance", kVerifyTolerance},
             {"pass", pass},
             {"worst_params", params_json(rep.worst)}};
    os << doc.dump(2) << '\n';
  } else {
    os << "# worst params: " << params_json(rep.worst).dump() << '\n';
    os << "samples,seed,max_relative_error,tolerance,pass\n";
    os << rep.samples << ',' << s.seed << ',' << number(rep.max_relative_error) << ','
       << number(kVerifyTolerance) << ',' << (pass ? "true" : "false") << '\n';
  }
  o.emit(os.str());
  if (!pass) err << "error: oracle disagreement " << rep.max_relative_error << " exceeds " << kVerifyTolerance << '\n';
  return pass ? kOk : kComputationError;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cavity-assisted cooling of a trapped atom: rates, steady state and parameter analysis"};
  app.fallthrough();
  app.require_subcommand(1);

  Settings staging;
  std::vector<Binding> registry;
  std::string config_path;
  app.add_option("--config", config_path, "Flat JSON file with flag names as keys");

  auto P = [](auto field) { return [field](Settings& s) -> double& { return s.params.*field; }; };
  add_setting<double>(app, registry, staging, "gamma", P(&Params::gamma), "Spontaneous decay rate [nu]");
  add_setting<double>(app, registry, staging, "kappa", P(&Params::kappa), "Cavity decay rate [nu]");
  add_setting<double>(app, registry, staging, "Omega", P(&Params::Omega), "Laser Rabi frequency [nu]");
  add_setting<double>(app, registry, staging, "g-tilde", P(&Params::g_tilde), "Coupling at trap center [nu]");
  add_setting<double>(app, registry, staging, "phi", P(&Params::phi), "Trap position phase [rad]");
  add_setting<double>(app, registry, staging, "theta-L", P(&Params::theta_L), "Laser angle [rad]");
  add_setting<double>(app, registry, staging, "theta-c", P(&Params::theta_c), "Cavity angle [rad]");
  add_setting<double>(app, registry, staging, "Delta", P(&Params::Delta), "Laser-atom detuning [nu]");
  add_setting<double>(app, registry, staging, "delta-c", P(&Params::delta_c), "Laser-cavity detuning [nu]");
  add_setting<double>(app, registry, staging, "eta", P(&Params::eta), "Lamb-Dicke parameter");
  add_setting<double>(app, registry, staging, "alpha", P(&Params::alpha), "Emission angular dispersion");

  auto S = [](auto field) { return [field](Settings& s) -> auto& { return s.*field; }; };
  add_setting<double>(app, registry, staging, "theta-L-deg", S(&Settings::theta_L_deg), "Laser angle [deg]");
  add_setting<double>(app, registry, staging, "theta-c-deg", S(&Settings::theta_c_deg), "Cavity angle [deg]");
  add_setting<double>(app, registry, staging, "phi-deg", S(&Settings::phi_deg), "Trap position phase [deg]");
  add_setting<std::string>(app, registry, staging, "preset", S(&Settings::preset), "contour | sideband | interference");
  add_setting<std::string>(app, registry, staging, "out", S(&Settings::out), "Output file (default stdout)");
  add_setting<std::string>(app, registry, staging, "format", S(&Settings::format), "csv | json");
  add_setting<double>(app, registry, staging, "delta-c-min", S(&Settings::delta_c_min), "delta_c axis start (sweep, interference box) [nu]");
  add_setting<double>(app, registry, staging, "delta-c-max", S(&Settings::delta_c_max), "delta_c axis end [nu]");
  add_setting<int>(app, registry, staging, "delta-c-steps", S(&Settings::delta_c_steps), "delta_c grid points (sweep default 161)");
  add_setting<double>(app, registry, staging, "Delta-min", S(&Settings::Delta_min), "Delta axis start (sweep, opt-detuning, interference box) [nu]");
  add_setting<double>(app, registry, staging, "Delta-max", S(&Settings::Delta_max), "Delta axis end [nu]");
  add_setting<int>(app, registry, staging, "Delta-steps", S(&Settings::Delta_steps), "Delta grid points (sweep 81, opt-detuning 41)");
  add_setting<double>(app, registry, staging, "g-min", S(&Settings::g_min), "g_tilde axis start (compare-sideband) [nu]");
  add_setting<double>(app, registry, staging, "g-max", S(&Settings::g_max), "g_tilde axis end [nu]");
  add_setting<int>(app, registry, staging, "g-steps", S(&Settings::g_steps), "g_tilde grid points");
  add_setting<double>(app, registry, staging, "t-final", S(&Settings::t_final), "Integration time [1/nu]");
  add_setting<double>(app, registry, staging, "dt", S(&Settings::dt), "Output interval and maximum step [1/nu]");
  add_setting<double>(app, registry, staging, "n0", S(&Settings::n0), "Initial mean (thermal) or level (fock)");
  add_setting<std::string>(app, registry, staging, "initial", S(&Settings::initial), "thermal | fock");
  add_setting<int>(app, registry, staging, "n-max", S(&Settings::n_max), "Phonon truncation");
  add_setting<int>(app, registry, staging, "samples", S(&Settings::samples), "Random parameter sets for verify");
  add_setting<std::uint64_t>(app, registry, staging, "seed", S(&Settings::seed), "Seed for verify");
  {
    CLI::Option* opt = app.add_flag("--strong-coupling", staging.strong_coupling,
                                    "Warn when g_tilde^2/(gamma kappa) <= 1");
    registry.push_back({"strong-coupling", opt, [](Settings& d, Settings& s) { d.strong_coupling = s.strong_coupling; },
                        [](Settings& d, const json& v) { d.strong_coupling = v.get<bool>(); }});
  }

  const std::pair<const char*, const char*> commands[] = {
      {"rates", "Amplitudes and heating/cooling coefficients at one point"},
      {"steady", "Steady-state phonon number and cooling rate at one point"},
      {"evolve", "Integrate the phonon rate equation"},
      {"sweep", "Steady state over a (delta_c, Delta) grid"},
      {"opt-detuning", "Optimal cavity detuning versus Delta"},
      {"interference", "Detunings where the blue-sideband cavity amplitude vanishes"},
      {"compare-sideband", "Cavity cooling at Delta = 0 versus free-space sideband cooling"},
      {"verify", "Closed-form amplitudes against the resolvent oracle"},
  };
  for (auto [name, help] : commands) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream help_out;
    std::ostringstream help_err;
    const int code = app.exit(e, help_out, help_err);
    out << help_out.str();
    err << help_err.str();
    return code == 0 ? kOk : kInvalidConfig;
  }

  Settings settings;
  try {
    json config = json::object();
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) throw InvalidParams("cannot read config file " + config_path);
      config = json::parse(in);
      if (!config.is_object()) throw InvalidParams("config file must hold a flat JSON object");
      for (auto& [key, value] : config.items()) {
        const bool known = std::any_of(registry.begin(), registry.end(),
                                       [&](const Binding& b) { return b.key == key; });
        if (!known) throw InvalidParams("unknown config key '" + key + "'");
        if (value.is_structured()) throw InvalidParams("config key '" + key + "' must be a scalar");
      }
    }
    std::string preset = "contour";
    if (config.contains("preset")) preset = config["preset"].get<std::string>();
    if (app.count("--preset") > 0) preset = staging.preset;
    settings.params = preset_params(preset);

    for (const Binding& b : registry) {
      if (b.option->count() > 0) {
        b.copy(settings, staging);
      } else if (config.contains(b.key)) {
        b.load(settings, config[b.key]);
      }
    }
    constexpr double deg = std::numbers::pi / 180.0;
    if (!std::isnan(settings.theta_L_deg)) settings.params.theta_L = settings.theta_L_deg * deg;
    if (!std::isnan(settings.theta_c_deg)) settings.params.theta_c = settings.theta_c_deg * deg;
    if (!std::isnan(settings.phi_deg)) settings.params.phi = settings.phi_deg * deg;

    if (settings.format != "csv" && settings.format != "json")
      throw InvalidParams("--format must be csv or json");
    if (!(settings.delta_c_max > settings.delta_c_min) || !(settings.Delta_max > settings.Delta_min) ||
        !(settings.g_max > settings.g_min) || settings.delta_c_steps < 0 || settings.Delta_steps < 0 ||
        settings.g_steps < 1)
      throw InvalidParams("ranges must be non-empty and increasing");
  } catch (const nlohmann::json::exception& e) {
    err << "error: invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  const Output output(settings, out);
  try {
    if (command != "verify") {
      validate(settings.params);
      report_warnings(settings.params, settings.strong_coupling, err);
    }
    if (command == "rates") return cmd_rates(settings, output);
    if (command == "steady") return cmd_steady(settings, output, err);
    if (command == "evolve") return cmd_evolve(settings, output, err);
    if (command == "sweep") return cmd_sweep(settings, output, err);
    if (command == "opt-detuning") return cmd_opt_detuning(settings, output);
    if (command == "interference") return cmd_interference(settings, output, err);
    if (command == "compare-sideband") return cmd_compare_sideband(settings, output);
    if (command == "verify") return cmd_verify(settings, output, err);
  } catch (const InvalidParams& e) {
    err << "error: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kComputationError;
  }
  return kInvalidConfig;
}

}  // namespace cavicool::cli
