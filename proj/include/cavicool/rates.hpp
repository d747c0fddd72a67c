#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "cavicool/params.hpp"

namespace cavicool {

using complex = std::complex<double>;

// Lower bound on |f| (units of nu^2) below which amplitudes are refused.
inline constexpr double kSingularityGuard = 1e-12;

// Blue raises the phonon number (n -> n+1, the "+" amplitudes), red lowers
// it (n -> n-1, the "-" amplitudes).
enum class Sideband { Blue, Red };

// Argument of f entering the sideband amplitudes: -nu for blue, +nu for red.
constexpr double sideband_shift(Sideband s) { return s == Sideband::Blue ? -kNu : kNu; }

/// f(x) = (x + delta_c + i kappa/2)(x + Delta + i gamma/2) - g_tilde^2.
///
/// The zeros of f are the complex resonances of the atom-cavity system seen
/// from the initial state shifted by x.
complex characteristic_f(double x, const Params& p);

/// Transition amplitudes for one sideband, with the common eta sqrt(xi)
/// factor removed and before the geometric weights are applied.
struct SidebandAmplitudes {
  complex carrier;       // T_S: excitation without motional change
  complex laser_gamma;   // T_L^gamma: laser recoil, emission into free space
  complex laser_kappa;   // T_L^kappa: laser recoil, emission through the mirrors
  complex cavity_gamma;  // T_c^gamma: cavity recoil, free-space emission
  complex cavity_kappa;  // T_c^kappa: cavity recoil, cavity decay
};

struct Amplitudes {
  SidebandAmplitudes plus;   // n -> n+1
  SidebandAmplitudes minus;  // n -> n-1

  const SidebandAmplitudes& operator[](Sideband s) const {
    return s == Sideband::Blue ? plus : minus;
  }
};

/// Heating (plus) and cooling (minus) coefficients, such that
/// Gamma_{n->n+1} = eta^2 (n+1) A_plus and Gamma_{n->n-1} = eta^2 n A_minus.
struct RateSet {
  double A_plus_gamma = 0.0;
  double A_minus_gamma = 0.0;
  double A_plus_kappa = 0.0;
  double A_minus_kappa = 0.0;
  double A_plus = 0.0;
  double A_minus = 0.0;
};

SidebandAmplitudes sideband_amplitudes(const Params& p, Sideband s);

// Throws NearSingularDenominator when |f(0)| or |f(-+nu)| <= kSingularityGuard.
Amplitudes amplitudes(const Params& p);

// Combines amplitudes into rate coefficients. The laser and cavity recoil
// amplitudes add coherently inside each channel.
RateSet assemble_rates(const Params& p, const Amplitudes& a);

RateSet rates(const Params& p);

// varphi_L T_L^{kappa,+} + varphi_c T_c^{kappa,+}: vanishes where the
// cavity-decay heating channel is suppressed by interference.
complex blue_kappa_amplitude(const Params& p);

enum class Warning {
  LaserMechanicalCoupling,   // eta Omega |varphi_L| > 0.1 nu
  CavityMechanicalCoupling,  // eta |g_tilde varphi_c| > 0.1 nu
  LambDicke,                 // eta > 0.25
  WeakCoupling,              // g_tilde^2 / (gamma kappa) <= 1, when requested
};

inline constexpr double kCoherenceThreshold = 0.1;

std::vector<Warning> validity_check(const Params& p, bool require_strong_coupling = false);

std::string_view describe(Warning w);
std::string_view code(Warning w);

}  // namespace cavicool
