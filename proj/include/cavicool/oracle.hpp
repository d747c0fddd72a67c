#pragma once

#include <cstdint>
#include <random>

#include <Eigen/Dense>

#include "cavicool/params.hpp"
#include "cavicool/rates.hpp"

namespace cavicool::oracle {

// Zero-order effective Hamiltonian restricted to the single-excitation
// manifold at phonon number m, basis {|e,0_c;m>, |g,1_c;m>}.
using ExcitationBlock = Eigen::Matrix2cd;

inline constexpr double kResolventGuard = 1e-14;

ExcitationBlock excitation_block(const Params& p, int m);

// det(E I - block(m)).
complex resolvent_determinant(const Params& p, double energy, int m);

/// Components of the scattering amplitude for one sideband, projected on
/// free-space emission (excited state) and cavity decay (cavity photon).
struct PathAmplitudes {
  complex laser_emission;   // laser recoil, then free-space emission
  complex laser_cavity;     // laser recoil, then cavity decay
  complex cavity_emission;  // carrier excitation, cavity recoil, emission
  complex cavity_cavity;    // carrier excitation, cavity recoil, cavity decay
  complex carrier;          // carrier excitation projected on the excited state
};

/// Literal second-order T-matrix evaluation from |g,0_c;n>, with
/// E_i = n nu. The recoil couplings carry their full prefactors
/// (eta, varphi, ladder factor). Throws SingularResolvent.
PathAmplitudes path_amplitudes(const Params& p, int n, Sideband s);

/// Path amplitudes normalized to the closed-form conventions: recoil
/// prefactors eta sqrt(xi) varphi removed. Requires n >= 1 so both sidebands
/// exist.
Amplitudes oracle_amplitudes(const Params& p, int n = 1);

/// Rates assembled from the unnormalized path amplitudes and divided by
/// eta^2 xi. Requires n >= 1.
RateSet oracle_rates(const Params& p, int n = 1);

// Largest per-entry relative error over all ten amplitudes.
double max_relative_error(const Amplitudes& a, const Amplitudes& b);

struct VerifyReport {
  std::size_t samples = 0;
  double max_relative_error = 0.0;
  Params worst;
};

/// Compares closed-form amplitudes against the oracle on randomized
/// parameter sets whose |f(0)|, |f(+-nu)| all exceed f_guard.
VerifyReport verify_random(std::size_t samples, std::uint64_t seed, double f_guard = 1e-6);

// Draws a parameter set spanning good- and bad-cavity regimes.
Params random_params(std::mt19937_64& rng);

}  // namespace cavicool::oracle
