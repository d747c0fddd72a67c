#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "cavicool/rates.hpp"

namespace cavicool {

// Population at the truncation edge above which a result is truncation-limited.
inline constexpr double kTruncationThreshold = 1e-8;
inline constexpr std::size_t kDefaultMaxPhonon = 200;
inline constexpr std::size_t kMaxPhononCap = 4096;

/// Phonon-number populations p_0 .. p_{N_max}.
class OccupationDistribution {
 public:
  // Throws InvalidParams on negative or non-finite entries, or a total that
  // differs from one by more than 1e-12.
  explicit OccupationDistribution(std::vector<double> probs);

  static OccupationDistribution fock(std::size_t n, std::size_t n_max);
  // Geometric (thermal) populations with the given mean, renormalized after
  // truncation.
  static OccupationDistribution thermal(double mean, std::size_t n_max);

  std::span<const double> probs() const { return probs_; }
  std::size_t n_max() const { return probs_.size() - 1; }
  double operator[](std::size_t n) const { return probs_[n]; }

  double mean() const;
  double total() const;
  bool truncation_limited() const { return probs_.back() >= kTruncationThreshold; }

  // Copy with zero-padded populations up to new_n_max (>= n_max()).
  OccupationDistribution extended(std::size_t new_n_max) const;

 private:
  struct Unchecked {};
  OccupationDistribution(std::vector<double> probs, Unchecked) : probs_(std::move(probs)) {}
  friend struct DynamicsAccess;

  std::vector<double> probs_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<OccupationDistribution> states;

  std::vector<double> means() const;
};

struct EvolveOptions {
  // Bound on the estimated total-variation error of a single step.
  double tolerance = 1e-11;
  // Double N_max and restart when the edge population reaches the threshold.
  bool auto_extend = true;
  std::size_t max_n = kMaxPhononCap;
};

/// Integrates the phonon rate equation
///   dp_n/dt = -(G_{n->n+1} + G_{n->n-1}) p_n + G_{n+1->n} p_{n+1} + G_{n-1->n} p_{n-1}
/// from p0 up to t_final. States are recorded every dt (and at t_final);
/// dt also caps the internal adaptive step. The chain is closed at n = 0
/// and reflecting at N_max.
///
/// Throws NonFiniteRates, TruncationExceeded.
Trajectory evolve(const OccupationDistribution& p0, const RateSet& r, double eta, double t_final,
                  double dt, const EvolveOptions& options = {});

// A_plus / (A_minus - A_plus). Throws HeatingRegime when A_minus <= A_plus.
double steady_state_n(const RateSet& r);

// eta^2 (A_minus - A_plus); negative in the heating regime.
double cooling_rate(const RateSet& r, double eta);

// Truncated geometric populations with ratio A_plus / A_minus.
// Throws HeatingRegime.
OccupationDistribution stationary_distribution(const RateSet& r,
                                               std::size_t n_max = kDefaultMaxPhonon);

// Exponential relaxation rate of <n>(t), fitted from the decay of the
// increments of the sampled mean (independent of the asymptote).
double fit_relaxation_rate(std::span<const double> times, std::span<const double> means);

}  // namespace cavicool
