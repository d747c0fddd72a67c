#include <doctest.h>

#include <cmath>
#include <random>

#include "cavicool/errors.hpp"
#include "cavicool/oracle.hpp"
#include "cavicool/rates.hpp"
#include "support.hpp"

using namespace cavicool;
using testing::rel_diff;

TEST_CASE("block determinants reproduce f on and off the sidebands") {
  std::mt19937_64 rng(101);
  for (int i = 0; i < 300; ++i) {
    const Params p = oracle::random_params(rng);
    for (const int n : {1, 4, 13}) {
      const double E = n * kNu;
      CHECK(rel_diff(oracle::resolvent_determinant(p, E, n), characteristic_f(0.0, p)) < 1e-12);
      CHECK(rel_diff(oracle::resolvent_determinant(p, E, n + 1), characteristic_f(-kNu, p)) < 1e-12);
      CHECK(rel_diff(oracle::resolvent_determinant(p, E, n - 1), characteristic_f(kNu, p)) < 1e-12);
    }
  }
}

TEST_CASE("closed-form amplitudes agree with the resolvent evaluation") {
  const oracle::VerifyReport rep = oracle::verify_random(1000, 20061);
  CHECK(rep.samples == 1000);
  CHECK(rep.max_relative_error <= 1e-10);
}

TEST_CASE("normalized oracle amplitudes do not depend on the phonon number") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 100; ++i) {
    const Params p = oracle::random_params(rng);
    const Amplitudes ref = oracle::oracle_amplitudes(p, 1);
    for (const int n : {5, 20}) CHECK(oracle::max_relative_error(ref, oracle::oracle_amplitudes(p, n)) < 1e-11);
  }
}

TEST_CASE("no red sideband from the motional ground state") {
  const Params p = contour_preset();
  const oracle::PathAmplitudes red = oracle::path_amplitudes(p, 0, Sideband::Red);
  CHECK(red.laser_emission == complex(0.0));
  CHECK(red.laser_cavity == complex(0.0));
  CHECK(red.cavity_emission == complex(0.0));
  CHECK(red.cavity_cavity == complex(0.0));
  CHECK(std::abs(red.carrier) > 0.0);
  const oracle::PathAmplitudes blue = oracle::path_amplitudes(p, 0, Sideband::Blue);
  CHECK(std::abs(blue.laser_emission) > 0.0);
  CHECK_THROWS_AS(oracle::oracle_amplitudes(p, 0), InvalidParams);
  CHECK_THROWS_AS(oracle::path_amplitudes(p, -1, Sideband::Blue), InvalidParams);
}

TEST_CASE("raw path amplitudes scale linearly with Omega and eta") {
  std::mt19937_64 rng(9);
  for (int i = 0; i < 50; ++i) {
    const Params p = oracle::random_params(rng);
    const auto a = oracle::path_amplitudes(p, 3, Sideband::Red);
    Params q = p;
    q.Omega *= 3.0;
    const auto b = oracle::path_amplitudes(q, 3, Sideband::Red);
    CHECK(rel_diff(b.laser_cavity, 3.0 * a.laser_cavity) < 1e-13);
    CHECK(rel_diff(b.cavity_emission, 3.0 * a.cavity_emission) < 1e-13);
    CHECK(rel_diff(b.carrier, 3.0 * a.carrier) < 1e-13);
    Params r = p;
    r.eta *= 0.5;
    const auto c = oracle::path_amplitudes(r, 3, Sideband::Red);
    CHECK(rel_diff(c.laser_emission, 0.5 * a.laser_emission) < 1e-13);
    CHECK(rel_diff(c.cavity_cavity, 0.5 * a.cavity_cavity) < 1e-13);
    CHECK(c.carrier == a.carrier);
  }
}

TEST_CASE("free-space limit of the resolvent evaluation") {
  Params p = contour_preset();
  p.g_tilde = 0.0;
  p.Delta = -0.4;
  for (const Sideband s : {Sideband::Blue, Sideband::Red}) {
    const auto a = oracle::path_amplitudes(p, 2, s);
    CHECK(a.cavity_emission == complex(0.0));
    CHECK(a.cavity_cavity == complex(0.0));
    CHECK(a.laser_cavity == complex(0.0));
    const double x = sideband_shift(s);
    const double ladder = s == Sideband::Blue ? std::sqrt(3.0) : std::sqrt(2.0);
    const complex expected =
        complex(0.0, 1.0) * p.eta * p.varphi_L() * ladder * p.Omega / complex(x + p.Delta, p.gamma / 2.0);
    CHECK(rel_diff(a.laser_emission, expected) < 1e-13);
  }
}

TEST_CASE("rates from path amplitudes equal the closed-form rates") {
  std::mt19937_64 rng(31);
  int checked = 0;
  while (checked < 300) {
    const Params p = oracle::random_params(rng);
    if (std::abs(characteristic_f(0.0, p)) < 1e-6 || std::abs(characteristic_f(kNu, p)) < 1e-6 ||
        std::abs(characteristic_f(-kNu, p)) < 1e-6)
      continue;
    const RateSet a = rates(p);
    const RateSet b = oracle::oracle_rates(p, 2);
    CHECK(rel_diff(a.A_plus, b.A_plus) < 1e-10);
    CHECK(rel_diff(a.A_minus, b.A_minus) < 1e-10);
    CHECK(rel_diff(a.A_plus_kappa, b.A_plus_kappa) < 1e-10);
    CHECK(rel_diff(a.A_minus_gamma, b.A_minus_gamma) < 1e-10);
    ++checked;
  }
}

TEST_CASE("singular resolvent is refused") {
  Params p;
  p.gamma = 1e-8;
  p.kappa = 1e-8;
  p.g_tilde = 0.0;
  p.Delta = 0.0;
  p.delta_c = 0.0;
  CHECK_THROWS_AS(oracle::path_amplitudes(p, 1, Sideband::Blue), SingularResolvent);
}
