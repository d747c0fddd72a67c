#pragma once

// Test-side reference computations, kept independent of the library code
// paths they check.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "cavicool/params.hpp"
#include "cavicool/rates.hpp"

namespace testing {

inline double rel_diff(double a, double b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b) {
  const double s = std::max(std::abs(a), std::abs(b));
  return s == 0.0 ? 0.0 : std::abs(a - b) / s;
}

// Stationary populations of the truncated birth-death generator, from its
// null space (dense LU on the generator with one row replaced by the
// normalization).
inline std::vector<double> stationary_by_nullspace(double A_plus, double A_minus, double eta,
                                                   int n_max) {
  const int N = n_max + 1;
  const double e2 = eta * eta;
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(N, N);
  for (int n = 0; n < N; ++n) {
    const double up = n < n_max ? e2 * (n + 1) * A_plus : 0.0;
    const double down = e2 * n * A_minus;
    L(n, n) -= up + down;
    if (n < n_max) L(n + 1, n) += up;
    if (n > 0) L(n - 1, n) += down;
  }
  L.row(N - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  rhs(N - 1) = 1.0;
  const Eigen::VectorXd p = L.fullPivLu().solve(rhs);
  return {p.data(), p.data() + N};
}

inline double mean_of(const std::vector<double>& p) {
  double m = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) m += static_cast<double>(n) * p[n];
  return m;
}

// Cooling-regime rate sets with A_plus / A_minus <= max_ratio.
inline cavicool::RateSet random_cooling_rates(std::mt19937_64& rng, double max_ratio) {
  std::uniform_real_distribution<double> lg(-4.0, -1.0), u(0.0, 1.0);
  cavicool::RateSet r;
  r.A_minus = std::pow(10.0, lg(rng));
  r.A_plus = r.A_minus * max_ratio * u(rng);
  r.A_minus_gamma = r.A_minus;
  r.A_plus_gamma = r.A_plus;
  return r;
}

// Direct transcription of the closed-form coefficients, written out
// independently for cross-checking.
struct ReferenceRates {
  double A_plus, A_minus, A_plus_kappa, A_minus_kappa;
};

inline ReferenceRates reference_rates(const cavicool::Params& p) {
  using C = std::complex<double>;
  const C I(0.0, 1.0);
  const double wl = std::cos(p.theta_L), wc = std::cos(p.theta_c) * std::tan(p.phi);
  const double g = p.g_tilde;
  auto f = [&](double x) { return (x + p.delta_c + I * p.kappa / 2.0) * (x + p.Delta + I * p.gamma / 2.0) - g * g; };
  const C f0 = f(0.0);
  const C ts = p.Omega * (p.delta_c + I * p.kappa / 2.0) / f0;
  double Ag[2], Ak[2];
  for (int k = 0; k < 2; ++k) {
    const double x = k == 0 ? -1.0 : 1.0;
    const C fx = f(x);
    const C tlg = I * p.Omega * (p.delta_c + x + I * p.kappa / 2.0) / fx;
    const C tlk = I * p.Omega * g / fx;
    const C tcg = -p.Omega * g * g * (2.0 * p.delta_c + x + I * p.kappa) / (f0 * fx);
    const C tck = -p.Omega * g * ((p.Delta + x + I * p.gamma / 2.0) * (p.delta_c + I * p.kappa / 2.0) + g * g) / (f0 * fx);
    Ag[k] = p.gamma * (p.alpha * std::norm(ts) + std::norm(wl * tlg + wc * tcg));
    Ak[k] = p.kappa * std::norm(wl * tlk + wc * tck);
  }
  return {Ag[0] + Ak[0], Ag[1] + Ak[1], Ak[0], Ak[1]};
}

}  // namespace testing
