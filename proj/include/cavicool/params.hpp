#pragma once

#include <cmath>
#include <numbers>

namespace cavicool {

// All frequencies and rates are expressed in units of the trap frequency.
inline constexpr double kNu = 1.0;

// Angular-dispersion presets for spontaneous emission recoil.
inline constexpr double kAlphaDipole = 2.0 / 5.0;
inline constexpr double kAlphaIsotropic = 1.0 / 3.0;

// Soft bound of the Lamb-Dicke regime.
inline constexpr double kLambDickeLimit = 0.25;

/// Physical parameter set of the driven atom inside a lossy resonator.
///
/// Detunings follow the rotating-frame convention Delta = w_L - w_0 and
/// delta_c = w_L - w_c. Angles are in radians.
struct Params {
  double gamma = 0.1;    // spontaneous decay rate
  double kappa = 10.0;   // cavity decay rate
  double Omega = 0.03;   // laser Rabi frequency
  double g_tilde = 7.0;  // atom-cavity coupling at the trap center, g cos(phi)
  double phi = std::numbers::pi / 4;
  double theta_L = std::numbers::pi / 4;
  double theta_c = std::numbers::pi / 4;
  double Delta = 0.0;
  double delta_c = 0.0;
  double eta = 0.1;
  double alpha = kAlphaDipole;

  // Geometric weight of the laser recoil.
  double varphi_L() const { return std::cos(theta_L); }
  // Geometric weight of the cavity recoil.
  double varphi_c() const { return std::cos(theta_c) * std::tan(phi); }
  // Vacuum Rabi frequency at the mode antinode; display only.
  double bare_g() const { return g_tilde / std::cos(phi); }
  bool lamb_dicke() const { return eta <= kLambDickeLimit; }

  Params at(double new_delta_c, double new_Delta) const {
    Params q = *this;
    q.delta_c = new_delta_c;
    q.Delta = new_Delta;
    return q;
  }

  bool operator==(const Params&) const = default;
};

// Throws InvalidParams when a field violates its domain.
void validate(const Params& p);

// Strong-coupling bad-cavity set used for the detuning contour maps.
Params contour_preset();
// Set used to compare cavity cooling against free-space sideband cooling.
Params sideband_comparison_preset();
// Small-linewidth set where heating interference is visible.
Params interference_preset();

}  // namespace cavicool
