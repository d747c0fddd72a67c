#include "cavicool/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "cavicool/dynamics.hpp"
#include "cavicool/errors.hpp"
#include "parallel.hpp"

namespace cavicool {

namespace {

constexpr complex I{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_axis(std::span<const double> axis, const char* name) {
  if (axis.empty()) throw InvalidParams(std::string(name) + " axis is empty");
  for (std::size_t i = 0; i < axis.size(); ++i) {
    if (!std::isfinite(axis[i])) throw InvalidParams(std::string(name) + " axis has non-finite values");
    if (i > 0 && !(axis[i] > axis[i - 1]))
      throw InvalidParams(std::string(name) + " axis must be strictly increasing");
  }
}

// Polynomial form of the blue-sideband cavity-decay amplitude:
//   varphi_L T_L^{k,+} + varphi_c T_c^{k,+} = Omega g G / (f(0) f(-nu)),
//   G = i varphi_L f(0) - varphi_c [(Delta - nu + i gamma/2)(delta_c + i kappa/2) + g^2].
// G is bilinear in (delta_c, Delta), so Newton on it is well conditioned
// away from the resonances where f vanishes.
struct InterferenceEquation {
  double wL;
  double wc;
  double gamma;
  double kappa;
  double g2;

  explicit InterferenceEquation(const Params& p)
      : wL(p.varphi_L()), wc(p.varphi_c()), gamma(p.gamma), kappa(p.kappa), g2(p.g_tilde * p.g_tilde) {}

  complex value(double dc, double D) const {
    const complex cav = dc + I * (kappa / 2);
    const complex f0 = cav * (D + I * (gamma / 2)) - g2;
    return I * wL * f0 - wc * ((D - kNu + I * (gamma / 2)) * cav + g2);
  }
  complex d_delta_c(double, double D) const {
    return I * wL * (D + I * (gamma / 2)) - wc * (D - kNu + I * (gamma / 2));
  }
  complex d_Delta(double dc, double) const { return (I * wL - wc) * (dc + I * (kappa / 2)); }
};

struct NewtonResult {
  double dc;
  double D;
  bool converged;
};

NewtonResult newton(const InterferenceEquation& eq, double dc, double D, int max_iter = 80) {
  complex G = eq.value(dc, D);
  for (int it = 0; it < max_iter; ++it) {
    const complex a = eq.d_delta_c(dc, D);
    const complex b = eq.d_Delta(dc, D);
    const double det = a.real() * b.imag() - b.real() * a.imag();
    if (!(std::abs(det) > 1e-300)) return {dc, D, false};
    // Solve [[Re a, Re b], [Im a, Im b]] s = -[Re G, Im G].
    const double s_dc = -(b.imag() * G.real() - b.real() * G.imag()) / det;
    const double s_D = -(-a.imag() * G.real() + a.real() * G.imag()) / det;

    double lambda = 1.0;
    const double base = std::norm(G);
    complex trial = eq.value(dc + s_dc, D + s_D);
    while (std::norm(trial) > (1.0 - 1e-4 * lambda) * base && lambda > 1.0 / 1024) {
      lambda /= 2;
      trial = eq.value(dc + lambda * s_dc, D + lambda * s_D);
    }
    dc += lambda * s_dc;
    D += lambda * s_D;
    G = trial;
    const double step = lambda * std::hypot(s_dc, s_D);
    if (!std::isfinite(dc) || !std::isfinite(D)) return {dc, D, false};
    if (step <= 1e-14 * (1.0 + std::hypot(dc, D)) || G == complex{}) {
      return {dc, D, true};
    }
  }
  return {dc, D, false};
}

std::optional<double> residual_at(const Params& p, double dc, double D) {
  try {
    return std::abs(blue_kappa_amplitude(p.at(dc, D))) / p.Omega;
  } catch (const NearSingularDenominator&) {
    return std::nullopt;
  }
}

}  // namespace

double optimal_detuning(double Delta, const Params& p) {
  if (Delta + kNu == 0.0) throw PoleAtDelta("delta_opt has a pole at Delta = -nu");
  return (p.g_tilde * p.g_tilde + p.gamma * p.kappa / 4) / (Delta + kNu) - kNu;
}

std::string_view to_string(PointStatus s) {
  switch (s) {
    case PointStatus::Ok: return "ok";
    case PointStatus::Heating: return "heating";
    case PointStatus::Singular: return "singular";
  }
  return "";
}

std::string_view to_string(RootBranch b) { return b == RootBranch::Plus ? "plus" : "minus"; }

PointOutcome evaluate_point(const Params& p) {
  PointOutcome out;
  try {
    out.rates = rates(p);
  } catch (const NearSingularDenominator&) {
    out.status = PointStatus::Singular;
    out.n_st = kNaN;
    out.W = kNaN;
    return out;
  }
  out.W = cooling_rate(out.rates, p.eta);
  if (out.rates.A_minus > out.rates.A_plus) {
    out.status = PointStatus::Ok;
    out.n_st = steady_state_n(out.rates);
  } else {
    out.status = PointStatus::Heating;
    out.n_st = kNaN;
  }
  return out;
}

std::size_t SweepResult::count(PointStatus s) const {
  return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
}

SweepResult sweep(const Params& p, std::span<const double> delta_c_axis, std::span<const double> Delta_axis,
                  unsigned threads) {
  check_axis(delta_c_axis, "delta_c");
  check_axis(Delta_axis, "Delta");
  validate(p);

  SweepResult out;
  out.delta_c_axis.assign(delta_c_axis.begin(), delta_c_axis.end());
  out.Delta_axis.assign(Delta_axis.begin(), Delta_axis.end());
  out.params = p;
  const std::size_t cols = delta_c_axis.size();
  const std::size_t total = cols * Delta_axis.size();
  out.n_st.assign(total, kNaN);
  out.W.assign(total, kNaN);
  out.status.assign(total, PointStatus::Singular);

  detail::parallel_for(total, threads == 0 ? detail::thread_count() : threads, [&](std::size_t k) {
    const PointOutcome o = evaluate_point(p.at(out.delta_c_axis[k % cols], out.Delta_axis[k / cols]));
    out.n_st[k] = o.n_st;
    out.W[k] = o.W;
    out.status[k] = o.status;
  });
  return out;
}

RootSearch find_interference_roots(const Params& p, const SearchBox& box) {
  if (!(p.Omega > 0.0)) throw InvalidParams("interference search needs Omega > 0");
  if (!(p.g_tilde > 0.0)) throw InvalidParams("interference search needs g_tilde > 0");
  if (std::abs(p.varphi_L()) <= kGeometricZero && std::abs(p.varphi_c()) <= kGeometricZero)
    throw InvalidParams("interference search needs a non-zero geometric weight");
  if (!(box.delta_c_max > box.delta_c_min) || !(box.Delta_max > box.Delta_min) || box.delta_c_seeds < 1 ||
      box.Delta_seeds < 1)
    throw InvalidParams("empty root search box");

  const InterferenceEquation eq(p);
  const std::vector<double> dc_seeds = linspace(box.delta_c_min, box.delta_c_max, box.delta_c_seeds);
  const std::vector<double> D_seeds = linspace(box.Delta_min, box.Delta_max, box.Delta_seeds);

  RootSearch out;
  for (double D0 : D_seeds) {
    for (double dc0 : dc_seeds) {
      ++out.seeds;
      const NewtonResult r = newton(eq, dc0, D0);
      const bool inside = r.dc >= box.delta_c_min && r.dc <= box.delta_c_max && r.D >= box.Delta_min &&
                          r.D <= box.Delta_max;
      if (!r.converged) {
        ++out.non_converged;
        continue;
      }
      if (!inside) continue;
      const std::optional<double> res = residual_at(p, r.dc, r.D);
      if (!res || *res > kRootResidualTolerance) {
        ++out.non_converged;
        continue;
      }
      auto same = std::find_if(out.roots.begin(), out.roots.end(), [&](const InterferenceRoot& x) {
        return std::hypot(x.delta_c - r.dc, x.Delta - r.D) < kRootMergeDistance;
      });
      if (same == out.roots.end()) {
        out.roots.push_back({r.dc, r.D, *res, RootBranch::Plus});
      } else if (*res < same->residual) {
        *same = {r.dc, r.D, *res, RootBranch::Plus};
      }
    }
  }

  if (out.roots.empty()) {
    std::ostringstream os;
    os << "no interference roots in the search box (" << out.seeds << " seeds, " << out.non_converged
       << " did not converge)";
    throw NoRootsFound(os.str());
  }
  std::sort(out.roots.begin(), out.roots.end(),
            [](const InterferenceRoot& a, const InterferenceRoot& b) { return a.delta_c > b.delta_c; });
  for (std::size_t i = 0; i < out.roots.size(); ++i)
    out.roots[i].branch = i == 0 ? RootBranch::Plus : RootBranch::Minus;
  if (out.roots.size() != 2) {
    std::ostringstream os;
    os << "expected 0 or 2 interference roots, found " << out.roots.size();
    out.diagnostic = os.str();
  }
  return out;
}

InterferenceRoot polish_root(const Params& p, double delta_c, double Delta) {
  const NewtonResult r = newton(InterferenceEquation(p), delta_c, Delta);
  const std::optional<double> res = residual_at(p, r.dc, r.D);
  return {r.dc, r.D, res.value_or(std::numeric_limits<double>::infinity()), RootBranch::Plus};
}

ExistenceDiagnosis existence_condition(const Params& p) {
  const double wc = p.varphi_c();
  if (std::abs(wc) <= kGeometricZero) throw UndefinedPhi("varphi_c = 0: the ratio varphi_L / varphi_c is undefined");
  ExistenceDiagnosis d;
  d.varphi = p.varphi_L() / wc;
  d.positive_branch = d.varphi >= 0.0;
  const double g2 = p.g_tilde * p.g_tilde;
  d.measure = d.positive_branch ? d.varphi * g2 / (p.kappa * kNu) : g2 / (p.kappa * kNu * std::abs(d.varphi));
  d.holds = d.measure > 1.0;
  d.lossless_measure = 2.0 * d.measure;
  d.lossless_holds = d.lossless_measure > 1.0;
  return d;
}

std::vector<SidebandComparisonRow> compare_sideband(const Params& p, std::span<const double> g_tilde_axis) {
  Params free_space = p;
  free_space.g_tilde = 0.0;
  free_space.Delta = -kNu;
  const PointOutcome baseline = evaluate_point(free_space);

  std::vector<SidebandComparisonRow> rows;
  rows.reserve(g_tilde_axis.size());
  for (double g : g_tilde_axis) {
    Params q = p;
    q.g_tilde = g;
    q.Delta = 0.0;
    q.delta_c = optimal_detuning(0.0, q);
    rows.push_back({g, q.delta_c, evaluate_point(q), baseline});
  }
  return rows;
}

DressedMixing dressed_mixing_angle(const Params& p) {
  DressedMixing m;
  const double g = p.g_tilde;
  const double dc = p.Delta - p.delta_c;
  m.cavity_atom_detuning = dc;
  if (g == 0.0 && dc == 0.0) {
    m.theta = std::numbers::pi / 4;
  } else {
    // tan(theta) = g / (R - Dc/2) = (R + Dc/2) / g with R = sqrt(g^2 + Dc^2/4);
    // pick the form without cancellation.
    const double R = std::hypot(g, dc / 2);
    const double upper = dc >= 0.0 ? R + dc / 2 : g * g / (R - dc / 2);
    m.theta = std::atan2(upper, g);
  }
  m.sin_theta = std::sin(m.theta);
  m.cos_theta = std::cos(m.theta);
  return m;
}

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  if (n == 1) {
    v[0] = lo;
    return v;
  }
  for (std::size_t i = 0; i < n; ++i)
    v[i] = i + 1 == n ? hi : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return v;
}

}  // namespace cavicool
