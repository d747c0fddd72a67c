#include "cavicool/params.hpp"

#include <cmath>
#include <string>

#include "cavicool/errors.hpp"

namespace cavicool {

namespace {

void require(bool ok, const std::string& what) {
  if (!ok) throw InvalidParams(what);
}

}  // namespace

void validate(const Params& p) {
  for (double v : {p.gamma, p.kappa, p.Omega, p.g_tilde, p.phi, p.theta_L, p.theta_c, p.Delta,
                   p.delta_c, p.eta, p.alpha}) {
    require(std::isfinite(v), "parameters must be finite");
  }
  require(p.gamma > 0.0, "gamma must be > 0");
  require(p.kappa > 0.0, "kappa must be > 0");
  require(p.Omega > 0.0, "Omega must be > 0");
  require(p.g_tilde >= 0.0, "g_tilde must be >= 0");
  require(p.eta > 0.0, "eta must be > 0");
  require(p.alpha >= 0.0 && p.alpha <= 1.0, "alpha must lie in [0, 1]");
  require(p.g_tilde == 0.0 || std::abs(std::cos(p.phi)) > 1e-12,
          "phi places the trap at a node of the mode (tan(phi) diverges)");
}

Params contour_preset() {
  Params p;
  p.eta = 0.1;
  p.phi = std::numbers::pi / 4;
  p.Omega = 0.03;
  p.g_tilde = 7.0;
  p.gamma = 0.1;
  p.kappa = 10.0;
  p.theta_L = std::numbers::pi / 4;
  p.theta_c = std::numbers::pi / 4;
  return p;
}

Params sideband_comparison_preset() {
  Params p = contour_preset();
  p.Delta = 0.0;
  p.delta_c = 0.0;
  return p;
}

Params interference_preset() {
  Params p = contour_preset();
  p.gamma = 0.01;
  p.g_tilde = 2.3;
  return p;
}

}  // namespace cavicool
