#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cavicool/params.hpp"
#include "cavicool/rates.hpp"

namespace cavicool {

/// delta_opt(Delta) = (g_tilde^2 + gamma kappa / 4) / (Delta + nu) - nu.
///
/// Places the red sideband on the atom-cavity resonance. Throws PoleAtDelta
/// at Delta = -nu.
double optimal_detuning(double Delta, const Params& p);

enum class PointStatus { Ok, Heating, Singular };

std::string_view to_string(PointStatus s);

// Steady-state summary of one parameter point. n_st is NaN unless Ok;
// W is NaN only when Singular.
struct PointOutcome {
  PointStatus status = PointStatus::Ok;
  double n_st = 0.0;
  double W = 0.0;
  RateSet rates;
};

PointOutcome evaluate_point(const Params& p);

/// Grid over (delta_c, Delta). Row-major with rows indexed by Delta.
struct SweepResult {
  std::vector<double> delta_c_axis;
  std::vector<double> Delta_axis;
  std::vector<double> n_st;
  std::vector<double> W;
  std::vector<PointStatus> status;
  Params params;

  std::size_t index(std::size_t i_Delta, std::size_t j_delta_c) const {
    return i_Delta * delta_c_axis.size() + j_delta_c;
  }
  bool heating(std::size_t i_Delta, std::size_t j_delta_c) const {
    return status[index(i_Delta, j_delta_c)] == PointStatus::Heating;
  }
  std::size_t count(PointStatus s) const;
};

// Axes must be non-empty, finite and strictly increasing (InvalidParams).
// threads == 0 uses the CAVICOOL_THREADS / hardware default. Output does not
// depend on the thread count.
SweepResult sweep(const Params& p, std::span<const double> delta_c_axis,
                  std::span<const double> Delta_axis, unsigned threads = 0);

enum class RootBranch { Plus, Minus };

std::string_view to_string(RootBranch b);

struct InterferenceRoot {
  double delta_c = 0.0;
  double Delta = 0.0;
  // |varphi_L T_L^{kappa,+} + varphi_c T_c^{kappa,+}| / Omega at the root.
  double residual = 0.0;
  RootBranch branch = RootBranch::Plus;
};

struct SearchBox {
  double delta_c_min = -20.0;
  double delta_c_max = 60.0;
  double Delta_min = -10.0;
  double Delta_max = 10.0;
  int delta_c_seeds = 40;
  int Delta_seeds = 40;
};

// Geometric weights at or below this magnitude count as zero (cos(pi/2) is
// not exactly zero in floating point).
inline constexpr double kGeometricZero = 1e-12;

inline constexpr double kRootResidualTolerance = 1e-9;
inline constexpr double kRootMergeDistance = 1e-4;

struct RootSearch {
  std::vector<InterferenceRoot> roots;  // sorted by decreasing delta_c
  int seeds = 0;
  int non_converged = 0;
  // Non-empty when the root count is neither 0 nor 2.
  std::string diagnostic;
};

/// Solves varphi_L T_L^{kappa,+} + varphi_c T_c^{kappa,+} = 0 for
/// (delta_c, Delta) inside the box by damped Newton from a seed grid.
/// The delta_c and Delta fields of p are ignored. With two roots, the one at
/// larger delta_c is labelled Plus.
///
/// Throws InvalidParams (Omega or g_tilde not positive, both geometric
/// weights zero) and NoRootsFound.
RootSearch find_interference_roots(const Params& p, const SearchBox& box = {});

// One more Newton polish from a given point; used to check root stability.
InterferenceRoot polish_root(const Params& p, double delta_c, double Delta);

/// Interference existence inequality for varphi = varphi_L / varphi_c.
///
/// `holds` evaluates the commonly stated criterion
///   varphi g^2 / (kappa nu) > 1        (varphi >= 0)
///   g^2 / (kappa nu |varphi|) > 1      (varphi < 0).
/// `lossless_holds` is the exact gamma -> 0 boundary obtained by solving the
/// root condition in closed form, which carries an extra factor 2:
///   2 varphi g^2 / (kappa nu) > 1, resp. 2 g^2 / (kappa nu |varphi|) > 1.
struct ExistenceDiagnosis {
  double varphi = 0.0;
  bool positive_branch = true;
  double measure = 0.0;
  bool holds = false;
  double lossless_measure = 0.0;
  bool lossless_holds = false;
};

// Throws UndefinedPhi when |varphi_c| <= kGeometricZero.
ExistenceDiagnosis existence_condition(const Params& p);

struct SidebandComparisonRow {
  double g_tilde = 0.0;
  double delta_c = 0.0;  // delta_opt(0) used for the cavity branch
  PointOutcome cavity;
  PointOutcome sideband;
};

/// Cavity branch: Delta = 0, delta_c = delta_opt(0) for each g_tilde.
/// Sideband branch: Delta = -nu, g_tilde = 0.
std::vector<SidebandComparisonRow> compare_sideband(const Params& p,
                                                    std::span<const double> g_tilde_axis);

/// Mixing of |g,1_c> and |e,0_c> in the dressed states
///   |+> = sin(t)|g,1_c> + cos(t)|e,0_c>,  |-> = cos(t)|g,1_c> - sin(t)|e,0_c>
/// with tan(t) = g / (-Dc/2 + sqrt(g^2 + Dc^2/4)) and Dc = Delta - delta_c
/// (cavity minus atomic frequency).
struct DressedMixing {
  double theta = 0.0;
  double sin_theta = 0.0;
  double cos_theta = 1.0;
  double cavity_atom_detuning = 0.0;
};

DressedMixing dressed_mixing_angle(const Params& p);

std::vector<double> linspace(double lo, double hi, std::size_t n);

}  // namespace cavicool
