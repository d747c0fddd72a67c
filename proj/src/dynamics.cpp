#include "cavicool/dynamics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cavicool/errors.hpp"

namespace cavicool {

struct DynamicsAccess {
  static OccupationDistribution make(std::vector<double> probs) {
    return OccupationDistribution(std::move(probs), OccupationDistribution::Unchecked{});
  }
  // Snapshot of an integrator state; round-off negatives (far below the step
  // tolerance) are clipped to zero.
  static OccupationDistribution snapshot(std::vector<double> probs) {
    for (double& v : probs) v = std::max(v, 0.0);
    return make(std::move(probs));
  }
};

OccupationDistribution::OccupationDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw InvalidParams("occupation distribution needs at least one level");
  for (double v : probs_) {
    if (!std::isfinite(v) || v < 0.0) throw InvalidParams("populations must be finite and >= 0");
  }
  if (std::abs(total() - 1.0) > 1e-12) throw InvalidParams("populations must sum to 1");
}

OccupationDistribution OccupationDistribution::fock(std::size_t n, std::size_t n_max) {
  if (n > n_max) throw InvalidParams("Fock level beyond truncation");
  std::vector<double> p(n_max + 1, 0.0);
  p[n] = 1.0;
  return OccupationDistribution(std::move(p));
}

OccupationDistribution OccupationDistribution::thermal(double mean, std::size_t n_max) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw InvalidParams("thermal mean must be >= 0");
  const double ratio = mean / (1.0 + mean);
  std::vector<double> p(n_max + 1);
  double w = 1.0;
  for (auto& v : p) {
    v = w;
    w *= ratio;
  }
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
  return DynamicsAccess::make(std::move(p));
}

double OccupationDistribution::mean() const {
  double m = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n) m += static_cast<double>(n) * probs_[n];
  return m;
}

double OccupationDistribution::total() const {
  return std::accumulate(probs_.begin(), probs_.end(), 0.0);
}

OccupationDistribution OccupationDistribution::extended(std::size_t new_n_max) const {
  std::vector<double> p = probs_;
  p.resize(std::max(new_n_max + 1, p.size()), 0.0);
  return DynamicsAccess::make(std::move(p));
}

std::vector<double> Trajectory::means() const {
  std::vector<double> m;
  m.reserve(states.size());
  for (const auto& s : states) m.push_back(s.mean());
  return m;
}

namespace {

// Birth-death generator with Gamma_{n->n+1} = up (n+1), Gamma_{n->n-1} = down n.
struct Chain {
  double up;
  double down;

  void apply(const std::vector<double>& p, std::vector<double>& dp) const {
    const std::size_t last = p.size() - 1;
    for (std::size_t n = 0; n <= last; ++n) {
      const double k = static_cast<double>(n);
      const double birth = n < last ? up * (k + 1.0) : 0.0;
      double v = -(birth + down * k) * p[n];
      if (n < last) v += down * (k + 1.0) * p[n + 1];
      if (n > 0) v += up * k * p[n - 1];
      dp[n] = v;
    }
  }

  double stiffness(std::size_t n_max) const {
    return 2.0 * (up + down) * static_cast<double>(n_max + 1);
  }
};

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84},
};
constexpr std::array<double, 7> kB{35.0 / 384,     0.0, 500.0 / 1113, 125.0 / 192,
                                   -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr std::array<double, 7> kBStar{5179.0 / 57600,    0.0,           7571.0 / 16695, 393.0 / 640,
                                       -92097.0 / 339200, 187.0 / 2100, 1.0 / 40};

class Stepper {
 public:
  Stepper(const Chain& chain, std::size_t size) : chain_(chain), stage_(7, std::vector<double>(size)),
                                                  tmp_(size), next_(size) {}

  // Attempts one step of size h. Returns the L1 norm of the error estimate;
  // the candidate state is left in next().
  double attempt(const std::vector<double>& p, double h) {
    const std::size_t size = p.size();
    chain_.apply(p, stage_[0]);
    for (int s = 1; s < 7; ++s) {
      for (std::size_t n = 0; n < size; ++n) {
        double acc = 0.0;
        for (int j = 0; j < s; ++j) acc += kA[s][j] * stage_[j][n];
        tmp_[n] = p[n] + h * acc;
      }
      chain_.apply(tmp_, stage_[s]);
    }
    double err = 0.0;
    for (std::size_t n = 0; n < size; ++n) {
      double hi = 0.0;
      double lo = 0.0;
      for (int s = 0; s < 7; ++s) {
        hi += kB[s] * stage_[s][n];
        lo += kBStar[s] * stage_[s][n];
      }
      next_[n] = p[n] + h * hi;
      err += std::abs(h * (hi - lo));
    }
    return err;
  }

  std::vector<double>& next() { return next_; }

 private:
  Chain chain_;
  std::vector<std::vector<double>> stage_;
  std::vector<double> tmp_;
  std::vector<double> next_;
};

struct Overflow {};

Trajectory integrate(const OccupationDistribution& p0, const Chain& chain, double t_final, double dt,
                     double tolerance) {
  std::vector<double> p(p0.probs().begin(), p0.probs().end());
  const std::size_t size = p.size();
  Stepper stepper(chain, size);

  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(DynamicsAccess::snapshot(p));

  const double stiff = chain.stiffness(size - 1);
  double h = stiff > 0.0 ? std::min(dt, 0.5 / stiff) : dt;
  double t = 0.0;
  std::size_t sample = 1;

  while (t < t_final) {
    const double target = std::min(t_final, static_cast<double>(sample) * dt);
    const double remaining = target - t;
    const bool lands = h >= remaining;
    const double step = lands ? remaining : h;

    const double err = stepper.attempt(p, step);
    const double factor = err > 0.0 ? 0.9 * std::pow(tolerance / err, 0.2) : 5.0;
    if (err <= tolerance || step <= 1e-14 * std::max(1.0, t)) {
      p.swap(stepper.next());
      t = lands ? target : t + step;
      if (p.back() >= kTruncationThreshold) throw Overflow{};
      if (lands) {
        traj.times.push_back(t);
        traj.states.push_back(DynamicsAccess::snapshot(p));
        ++sample;
      }
      // A step shortened to hit a sample time says nothing about h.
      if (!lands || step == h) h = std::min(dt, h * std::clamp(factor, 0.2, 5.0));
    } else {
      h = step * std::clamp(factor, 0.1, 0.9);
    }
  }
  return traj;
}

}  // namespace

Trajectory evolve(const OccupationDistribution& p0, const RateSet& r, double eta, double t_final,
                  double dt, const EvolveOptions& options) {
  for (double v : {r.A_plus, r.A_minus, eta}) {
    if (!std::isfinite(v)) throw NonFiniteRates("rate coefficients must be finite");
  }
  if (r.A_plus < 0.0 || r.A_minus < 0.0) throw NonFiniteRates("rate coefficients must be >= 0");
  if (!(t_final >= 0.0) || !(dt > 0.0)) throw InvalidParams("need t_final >= 0 and dt > 0");
  if (p0.truncation_limited()) throw TruncationExceeded("initial distribution reaches the truncation edge");

  const Chain chain{eta * eta * r.A_plus, eta * eta * r.A_minus};
  OccupationDistribution start = p0;
  for (;;) {
    try {
      return integrate(start, chain, t_final, dt, options.tolerance);
    } catch (const Overflow&) {
      const std::size_t n = start.n_max();
      if (!options.auto_extend || n >= options.max_n) {
        std::ostringstream os;
        os << "population at N_max=" << n << " reached " << kTruncationThreshold;
        throw TruncationExceeded(os.str());
      }
      start = start.extended(std::min(2 * n, options.max_n));
    }
  }
}

double steady_state_n(const RateSet& r) {
  if (!(r.A_minus > r.A_plus)) {
    std::ostringstream os;
    os << "A_minus=" << r.A_minus << " <= A_plus=" << r.A_plus;
    throw HeatingRegime(os.str());
  }
  return r.A_plus / (r.A_minus - r.A_plus);
}

double cooling_rate(const RateSet& r, double eta) { return eta * eta * (r.A_minus - r.A_plus); }

OccupationDistribution stationary_distribution(const RateSet& r, std::size_t n_max) {
  if (!(r.A_minus > r.A_plus)) throw HeatingRegime("no stationary distribution in the heating regime");
  const double ratio = r.A_plus / r.A_minus;
  std::vector<double> p(n_max + 1);
  double w = 1.0;
  for (auto& v : p) {
    v = w;
    w *= ratio;
  }
  const double s = std::accumulate(p.begin(), p.end(), 0.0);
  for (auto& v : p) v /= s;
  return DynamicsAccess::make(std::move(p));
}

double fit_relaxation_rate(std::span<const double> times, std::span<const double> means) {
  if (times.size() != means.size() || times.size() < 3)
    throw InvalidParams("need at least three samples to fit a relaxation rate");
  const double h = times[1] - times[0];

  std::vector<double> xs;
  std::vector<double> ys;
  double peak = 0.0;
  for (std::size_t k = 0; k + 1 < means.size(); ++k) peak = std::max(peak, std::abs(means[k + 1] - means[k]));
  const double sign = means[1] >= means[0] ? 1.0 : -1.0;
  for (std::size_t k = 0; k + 1 < means.size(); ++k) {
    if (std::abs((times[k + 1] - times[k]) - h) > 1e-9 * h) continue;
    const double inc = sign * (means[k + 1] - means[k]);
    if (!(inc > 1e-8 * peak)) continue;
    xs.push_back(times[k]);
    ys.push_back(std::log(inc));
  }
  if (xs.size() < 2) throw InvalidParams("not enough monotone increments to fit a relaxation rate");

  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  return -sxy / sxx;
}

}  // namespace cavicool
