// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "cavicool/analysis.hpp"
#include "cavicool/dynamics.hpp"
#include "cavicool/errors.hpp"
#include "cavicool/oracle.hpp"
#include "cavicool/rates.hpp"
#include "cli.hpp"
#include "support.hpp"

using namespace cavicool;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, double time_limit_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const bool in_time = time_limit_s <= 0.0 || secs < time_limit_s;
  const bool pass = o.pass && in_time;
  if (!pass) ++failures;
  std::printf("%s  %-28s %s  [%.2f s%s]\n", pass ? "PASS" : "FAIL", name, o.detail.c_str(), secs,
              in_time ? "" : ", over time limit");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// Interference roots for the reference parameters, against the expected
// coordinates with a per-coordinate tolerance.
Outcome interference_roots() {
  constexpr double kTol = 0.15;
  const double target[2][2] = {{7.8, 0.2}, {3.2, -0.3}};
  const RootSearch rs = find_interference_roots(interference_preset());
  std::string d = fmt("roots=%zu", rs.roots.size());
  bool ok = rs.roots.size() == 2;
  for (std::size_t i = 0; i < rs.roots.size() && i < 2; ++i) {
    const auto& r = rs.roots[i];
    const double e1 = std::abs(r.delta_c - target[i][0]), e2 = std::abs(r.Delta - target[i][1]);
    d += fmt(" (%.4f,%.4f) err=(%.3f,%.3f)", r.delta_c, r.Delta, e1, e2);
    ok = ok && e1 <= kTol && e2 <= kTol;
  }
  return {ok, d + fmt(" tol=%.2f", kTol)};
}

void interference_info() {
  Params p = interference_preset();
  p.g_tilde = std::sqrt(5.5);
  const RootSearch rs = find_interference_roots(p);
  std::printf("INFO  %-28s g_tilde^2=5.5:", "interference_roots");
  for (const auto& r : rs.roots) std::printf(" (%.4f,%.4f)", r.delta_c, r.Delta);
  std::printf("\n");
}

Outcome oracle_equivalence() {
  constexpr std::size_t kSamples = 1000;
  constexpr double kTol = 1e-10;
  const oracle::VerifyReport rep = oracle::verify_random(kSamples, 20061, 1e-6);
  return {rep.samples >= kSamples && rep.max_relative_error <= kTol,
          fmt("samples=%zu max_rel_err=%.3g limit=%.0e", rep.samples, rep.max_relative_error, kTol)};
}

// Global argmax of A_minus over a fixed delta_c grid against delta_opt(Delta).
Outcome delta_opt_maximization() {
  constexpr std::size_t kDeltaPoints = 50, kDetuningPoints = 400;
  constexpr double kMaxSteps = 2.0;
  const Params p = contour_preset();
  const auto Ds = linspace(-10.0, 10.0, kDeltaPoints);
  const auto dcs = linspace(-200.0, 200.0, kDetuningPoints);
  const double step = dcs[1] - dcs[0];
  int tested = 0, bad = 0;
  double worst = 0.0, worst_D = 0.0;
  for (const double D : Ds) {
    if (std::abs(D + kNu) < 0.3) continue;
    ++tested;
    std::size_t best = 0;
    double best_A = -1.0;
    for (std::size_t j = 0; j < dcs.size(); ++j) {
      const double A = rates(p.at(dcs[j], D)).A_minus;
      if (A > best_A) {
        best_A = A;
        best = j;
      }
    }
    const double off = std::abs(dcs[best] - optimal_detuning(D, p)) / step;
    if (off > kMaxSteps) ++bad;
    if (off > worst) {
      worst = off;
      worst_D = D;
    }
  }
  return {bad == 0, fmt("rows=%d outside=%d worst=%.1f steps at Delta=%.3f limit=%.0f steps", tested, bad, worst,
                        worst_D, kMaxSteps)};
}

// Stationary mean against the closed form, and the relaxation rate fitted
// from the integrated rate equation against the cooling rate.
Outcome rate_equation_consistency() {
  constexpr int kSets = 20;
  constexpr double kMaxRatio = 0.9, kMeanTol = 1e-8, kRateTol = 0.01;
  std::mt19937_64 rng(424242);
  double worst_mean = 0.0, worst_rate = 0.0;
  int found = 0;
  while (found < kSets) {
    const Params p = oracle::random_params(rng);
    RateSet r;
    try {
      r = rates(p);
    } catch (const NearSingularDenominator&) {
      continue;
    }
    if (!(r.A_minus > r.A_plus) || r.A_plus / r.A_minus > kMaxRatio) continue;
    ++found;
    const double n_st = steady_state_n(r);
    const auto ref = testing::stationary_by_nullspace(r.A_plus, r.A_minus, p.eta, 600);
    worst_mean = std::max(worst_mean, testing::rel_diff(testing::mean_of(ref), n_st));
    worst_mean = std::max(worst_mean, testing::rel_diff(stationary_distribution(r, 600).mean(), n_st));

    const double W = cooling_rate(r, p.eta);
    const double t_final = 5.0 / W;
    const auto traj = evolve(OccupationDistribution::thermal(n_st + 3.0, 400), r, p.eta, t_final, t_final / 200.0);
    worst_rate = std::max(worst_rate, testing::rel_diff(fit_relaxation_rate(traj.times, traj.means()), W));
  }
  return {worst_mean <= kMeanTol && worst_rate <= kRateTol,
          fmt("sets=%d mean_rel_err=%.2g (limit %.0e) rate_rel_err=%.2g (limit %.2f)", kSets, worst_mean, kMeanTol,
              worst_rate, kRateTol)};
}

Outcome free_space_limit() {
  Params p = contour_preset();
  p.g_tilde = 0.0;
  p.Delta = -kNu;
  p.gamma = 0.1;
  p.theta_L = std::numbers::pi / 4;
  p.alpha = 0.4;
  const RateSet r = rates(p);
  const double n = steady_state_n(r);
  const double phiL = std::cos(p.theta_L);
  const double asymptotic = std::pow(p.gamma / (2 * kNu), 2) * (p.alpha / (phiL * phiL) + 0.25);
  const double rel = testing::rel_diff(n, asymptotic);
  const bool zero = r.A_plus_kappa == 0.0 && r.A_minus_kappa == 0.0;
  return {zero && rel <= 0.1, fmt("A_kappa=(%g,%g) n_st=%.6g asymptotic=%.6g rel=%.3g limit=0.10", r.A_plus_kappa,
                                  r.A_minus_kappa, n, asymptotic, rel)};
}

Outcome cavity_enhanced_cooling() {
  const Params p = sideband_comparison_preset();
  const auto rows = compare_sideband(p, linspace(1.0, 12.0, 111));
  double lo = NAN, hi = NAN;
  int better = 0;
  for (const auto& row : rows) {
    if (row.cavity.status != PointStatus::Ok || row.sideband.status != PointStatus::Ok) continue;
    if (row.cavity.n_st < row.sideband.n_st && row.cavity.W > row.sideband.W) {
      if (better == 0) lo = row.g_tilde;
      hi = row.g_tilde;
      ++better;
    }
  }
  return {better > 0, fmt("g_tilde points beating sideband=%d range=[%.2f, %.2f]", better, lo, hi)};
}

std::string run_cli(const std::vector<std::string>& args) {
  std::vector<const char*> argv{"cavicool"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  if (code != 0) throw std::runtime_error("sweep exited with " + std::to_string(code));
  return out.str();
}

Outcome determinism() {
  const std::vector<std::string> args{"sweep", "--preset", "contour"};
  std::vector<std::string> outs;
  for (const char* t : {"1", "3", "8"}) {
    ::setenv("CAVICOOL_THREADS", t, 1);
    outs.push_back(run_cli(args));
  }
  ::unsetenv("CAVICOOL_THREADS");
  const bool same = outs[0] == outs[1] && outs[0] == outs[2];
  return {same, fmt("threads={1,3,8} bytes=%zu identical=%s", outs[0].size(), same ? "yes" : "no")};
}

}  // namespace

int main() {
  criterion("interference_roots", 5.0, interference_roots);
  try {
    interference_info();
  } catch (const std::exception& e) {
    std::printf("INFO  interference_roots g_tilde^2=5.5: %s\n", e.what());
  }
  criterion("oracle_equivalence", 10.0, oracle_equivalence);
  criterion("delta_opt_maximization", 10.0, delta_opt_maximization);
  criterion("rate_equation_consistency", 30.0, rate_equation_consistency);
  criterion("free_space_sideband_limit", 1.0, free_space_limit);
  criterion("cavity_enhanced_cooling", 5.0, cavity_enhanced_cooling);
  criterion("sweep_determinism", 0.0, determinism);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? EXIT_SUCCESS : EXIT_FAILURE;
}
