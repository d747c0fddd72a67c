#include "cavicool/rates.hpp"

#include <cmath>
#include <sstream>

#include "cavicool/errors.hpp"

namespace cavicool {

namespace {

constexpr complex I{0.0, 1.0};

complex guarded_f(double x, const Params& p) {
  const complex f = characteristic_f(x, p);
  if (!(std::abs(f) > kSingularityGuard)) {
    std::ostringstream os;
    os << "|f(" << x << ")| = " << std::abs(f) << " at delta_c=" << p.delta_c
       << ", Delta=" << p.Delta;
    throw NearSingularDenominator(os.str());
  }
  return f;
}

}  // namespace

complex characteristic_f(double x, const Params& p) {
  return (x + p.delta_c + I * (p.kappa / 2)) * (x + p.Delta + I * (p.gamma / 2)) -
         p.g_tilde * p.g_tilde;
}

SidebandAmplitudes sideband_amplitudes(const Params& p, Sideband s) {
  validate(p);
  const double x = sideband_shift(s);
  const complex f0 = guarded_f(0.0, p);
  const complex fx = guarded_f(x, p);
  const double g = p.g_tilde;
  const double W = p.Omega;
  const complex cavity = p.delta_c + I * (p.kappa / 2);

  SidebandAmplitudes a;
  a.carrier = W * cavity / f0;
  a.laser_gamma = I * W * (cavity + x) / fx;
  a.laser_kappa = I * W * g / fx;
  a.cavity_gamma = -W * g * g * (2.0 * p.delta_c + x + I * p.kappa) / (f0 * fx);
  a.cavity_kappa = -W * g * ((p.Delta + x + I * (p.gamma / 2)) * cavity + g * g) / (f0 * fx);
  return a;
}

Amplitudes amplitudes(const Params& p) {
  return {sideband_amplitudes(p, Sideband::Blue), sideband_amplitudes(p, Sideband::Red)};
}

RateSet assemble_rates(const Params& p, const Amplitudes& a) {
  const double wL = p.varphi_L();
  const double wc = p.varphi_c();
  auto emission = [&](const SidebandAmplitudes& s) {
    return p.gamma * (p.alpha * std::norm(s.carrier) + std::norm(wL * s.laser_gamma + wc * s.cavity_gamma));
  };
  auto decay = [&](const SidebandAmplitudes& s) {
    return p.kappa * std::norm(wL * s.laser_kappa + wc * s.cavity_kappa);
  };

  RateSet r;
  r.A_plus_gamma = emission(a.plus);
  r.A_minus_gamma = emission(a.minus);
  r.A_plus_kappa = decay(a.plus);
  r.A_minus_kappa = decay(a.minus);
  r.A_plus = r.A_plus_gamma + r.A_plus_kappa;
  r.A_minus = r.A_minus_gamma + r.A_minus_kappa;
  return r;
}

RateSet rates(const Params& p) { return assemble_rates(p, amplitudes(p)); }

complex blue_kappa_amplitude(const Params& p) {
  const SidebandAmplitudes a = sideband_amplitudes(p, Sideband::Blue);
  return p.varphi_L() * a.laser_kappa + p.varphi_c() * a.cavity_kappa;
}

std::vector<Warning> validity_check(const Params& p, bool require_strong_coupling) {
  std::vector<Warning> out;
  if (p.eta * p.Omega * std::abs(p.varphi_L()) > kCoherenceThreshold * kNu)
    out.push_back(Warning::LaserMechanicalCoupling);
  if (p.eta * std::abs(p.g_tilde * p.varphi_c()) > kCoherenceThreshold * kNu)
    out.push_back(Warning::CavityMechanicalCoupling);
  if (!p.lamb_dicke()) out.push_back(Warning::LambDicke);
  if (require_strong_coupling && !(p.g_tilde * p.g_tilde > p.gamma * p.kappa))
    out.push_back(Warning::WeakCoupling);
  return out;
}

std::string_view describe(Warning w) {
  switch (w) {
    case Warning::LaserMechanicalCoupling:
      return "eta*Omega*|varphi_L| exceeds 0.1 nu; coherences between number states may matter";
    case Warning::CavityMechanicalCoupling:
      return "eta*|g_tilde*varphi_c| exceeds 0.1 nu; coherences between number states may matter";
    case Warning::LambDicke:
      return "eta exceeds 0.25; first-order Lamb-Dicke expansion is questionable";
    case Warning::WeakCoupling:
      return "g_tilde^2/(gamma*kappa) <= 1; not in the strong coupling regime";
  }
  return "";
}

std::string_view code(Warning w) {
  switch (w) {
    case Warning::LaserMechanicalCoupling: return "laser_mechanical_coupling";
    case Warning::CavityMechanicalCoupling: return "cavity_mechanical_coupling";
    case Warning::LambDicke: return "lamb_dicke";
    case Warning::WeakCoupling: return "weak_coupling";
  }
  return "";
}

}  // namespace cavicool
