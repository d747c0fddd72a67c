#include "cavicool/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cavicool/errors.hpp"

namespace cavicool::oracle {

namespace {

using Vec = Eigen::Vector2cd;

constexpr complex I{0.0, 1.0};

Vec resolve(const Params& p, double energy, int m, const Vec& v) {
  const ExcitationBlock M = energy * ExcitationBlock::Identity() - excitation_block(p, m);
  const Eigen::PartialPivLU<ExcitationBlock> lu(M);
  const complex det = lu.determinant();
  if (!(std::abs(det) > kResolventGuard)) {
    std::ostringstream os;
    os << "resolvent at phonon " << m << " is singular (|det| = " << std::abs(det) << ")";
    throw SingularResolvent(os.str());
  }
  return lu.solve(v);
}

// Evaluates the two second-order paths with explicit recoil weights.
PathAmplitudes propagate(const Params& p, int n, Sideband s, double laser_weight, double cavity_weight) {
  const int m = s == Sideband::Blue ? n + 1 : n - 1;
  const double ladder = s == Sideband::Blue ? std::sqrt(n + 1.0) : std::sqrt(static_cast<double>(n));
  const double energy = n * kNu;

  PathAmplitudes out{};

  // Carrier excitation by the zero-order laser coupling, propagated at phonon n.
  const Vec excited = resolve(p, energy, n, Vec(p.Omega, 0.0));
  out.carrier = excited(0);

  if (m < 0) return out;

  // Laser recoil: i eta varphi_L Omega sigma^dagger (b + b^dagger) |g,0_c;n>.
  const Vec laser_kick(I * p.eta * laser_weight * p.Omega * ladder, 0.0);
  const Vec laser = resolve(p, energy, m, laser_kick);
  out.laser_emission = laser(0);
  out.laser_cavity = laser(1);

  // Cavity recoil: -eta varphi_c g_tilde (a^dagger sigma + sigma^dagger a)(b + b^dagger).
  ExcitationBlock exchange;
  exchange << 0.0, 1.0, 1.0, 0.0;
  const Vec cavity_kick = (-p.eta * cavity_weight * p.g_tilde * ladder) * (exchange * excited);
  const Vec cavity = resolve(p, energy, m, cavity_kick);
  out.cavity_emission = cavity(0);
  out.cavity_cavity = cavity(1);
  return out;
}

void require_sidebands(int n) {
  if (n < 1) throw InvalidParams("oracle normalization needs n >= 1 (no red sideband from n = 0)");
}

double relative(complex a, complex b) {
  const double scale = std::max(std::abs(a), std::abs(b));
  return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

double log_uniform(std::mt19937_64& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

}  // namespace

ExcitationBlock excitation_block(const Params& p, int m) {
  const double motion = m * kNu;
  ExcitationBlock h;
  h << motion - p.Delta - I * (p.gamma / 2), p.g_tilde,
       p.g_tilde, motion - p.delta_c - I * (p.kappa / 2);
  return h;
}

complex resolvent_determinant(const Params& p, double energy, int m) {
  const ExcitationBlock M = energy * ExcitationBlock::Identity() - excitation_block(p, m);
  return Eigen::PartialPivLU<ExcitationBlock>(M).determinant();
}

PathAmplitudes path_amplitudes(const Params& p, int n, Sideband s) {
  if (n < 0) throw InvalidParams("phonon number must be >= 0");
  return propagate(p, n, s, p.varphi_L(), p.varphi_c());
}

Amplitudes oracle_amplitudes(const Params& p, int n) {
  require_sidebands(n);
  auto normalized = [&](Sideband s) {
    const PathAmplitudes raw = propagate(p, n, s, 1.0, 1.0);
    const double xi = s == Sideband::Blue ? n + 1.0 : static_cast<double>(n);
    const double strip = p.eta * std::sqrt(xi);
    SidebandAmplitudes a;
    a.carrier = raw.carrier;
    a.laser_gamma = raw.laser_emission / strip;
    a.laser_kappa = raw.laser_cavity / strip;
    a.cavity_gamma = raw.cavity_emission / strip;
    a.cavity_kappa = raw.cavity_cavity / strip;
    return a;
  };
  return {normalized(Sideband::Blue), normalized(Sideband::Red)};
}

RateSet oracle_rates(const Params& p, int n) {
  require_sidebands(n);
  auto channel = [&](Sideband s, double& emission, double& decay) {
    const PathAmplitudes a = path_amplitudes(p, n, s);
    const double xi = s == Sideband::Blue ? n + 1.0 : static_cast<double>(n);
    const double recoil = p.eta * p.eta * xi;
    const double gamma_rate =
        p.gamma * (p.alpha * recoil * std::norm(a.carrier) + std::norm(a.laser_emission + a.cavity_emission));
    const double kappa_rate = p.kappa * std::norm(a.laser_cavity + a.cavity_cavity);
    emission = gamma_rate / recoil;
    decay = kappa_rate / recoil;
  };
  RateSet r;
  channel(Sideband::Blue, r.A_plus_gamma, r.A_plus_kappa);
  channel(Sideband::Red, r.A_minus_gamma, r.A_minus_kappa);
  r.A_plus = r.A_plus_gamma + r.A_plus_kappa;
  r.A_minus = r.A_minus_gamma + r.A_minus_kappa;
  return r;
}

double max_relative_error(const Amplitudes& a, const Amplitudes& b) {
  double worst = 0.0;
  for (Sideband s : {Sideband::Blue, Sideband::Red}) {
    const SidebandAmplitudes& x = a[s];
    const SidebandAmplitudes& y = b[s];
    worst = std::max({worst, relative(x.carrier, y.carrier), relative(x.laser_gamma, y.laser_gamma),
                      relative(x.laser_kappa, y.laser_kappa), relative(x.cavity_gamma, y.cavity_gamma),
                      relative(x.cavity_kappa, y.cavity_kappa)});
  }
  return worst;
}

Params random_params(std::mt19937_64& rng) {
  Params p;
  p.gamma = log_uniform(rng, 1e-3, 10.0);
  p.kappa = log_uniform(rng, 1e-2, 100.0);
  p.Omega = log_uniform(rng, 1e-3, 1.0);
  p.g_tilde = uniform(rng, 0.0, 15.0);
  p.phi = uniform(rng, -1.4, 1.4);
  p.theta_L = uniform(rng, 0.0, std::numbers::pi);
  p.theta_c = uniform(rng, 0.0, std::numbers::pi);
  p.Delta = uniform(rng, -15.0, 15.0);
  p.delta_c = uniform(rng, -30.0, 60.0);
  p.eta = uniform(rng, 0.01, 0.3);
  p.alpha = uniform(rng, 0.0, 1.0);
  return p;
}

VerifyReport verify_random(std::size_t samples, std::uint64_t seed, double f_guard) {
  std::mt19937_64 rng(seed);
  VerifyReport report;
  while (report.samples < samples) {
    const Params p = random_params(rng);
    const bool guarded = std::abs(characteristic_f(0.0, p)) >= f_guard &&
                         std::abs(characteristic_f(-kNu, p)) >= f_guard &&
                         std::abs(characteristic_f(kNu, p)) >= f_guard;
    if (!guarded) continue;
    const double err = max_relative_error(amplitudes(p), oracle_amplitudes(p, 1));
    if (err >= report.max_relative_error) {
      report.max_relative_error = err;
      report.worst = p;
    }
    ++report.samples;
  }
  return report;
}

}  // namespace cavicool::oracle
