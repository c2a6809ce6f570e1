#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "kvlab/experiments.hpp"
#include "kvlab/symbol.hpp"
#include "oracles.hpp"

using namespace kvlab;

namespace {

EnergyTrace synthetic(double (*f)(double), double lo, double hi, std::size_t n) {
  EnergyTrace t;
  for (double x : log_spaced(lo, hi, n)) t.push_back({x, f(x), 0.0});
  return t;
}

}  // namespace

TEST_CASE("dissipation identity") {
  const Params p(1.0);
  const Grid g(160.0, 4096, Boundary::PeriodicLine);
  CHECK(dissipation_identity_check(State::zero(g), p, 1.0, 1e-4) == 0.0);
  // A lone xi = 0 mode neither loses energy nor dissipates.
  std::vector<Mode> modes(g.mode_count());
  for (std::size_t k = 0; k < modes.size(); ++k) modes[k] = {g.frequency(k), Vec2::Zero()};
  modes[0].a = Vec2(1.0, 0.5);
  const State zero_mode = to_physical(SpectralState(g, modes));
  CHECK(dissipation_identity_check(zero_mode, p, 1.0, 1e-4) < 1e-10);
  const State z = random_smooth_state(2, g, Profile::GaussianPacket);
  CHECK(dissipation_identity_check(z, p, 1.0, 1e-4) < 1e-6);
  CHECK_THROWS_AS(dissipation_identity_check(z, p, 1e-5, 1e-4), std::invalid_argument);
}

TEST_CASE("weyl residual identity and scaling") {
  const Params p(1.0);
  const Grid g(256.0, 16384, Boundary::PeriodicLine);
  double prev = 0.0;
  for (int k : {2, 4, 8}) {
    const WeylResidual w = weyl_residual(k, p, g);
    CHECK(w.identity_value == doctest::Approx(w.residual_sq).epsilon(1e-10));
    CHECK(w.norm_sq >= 2.0 * p.m());
    CHECK(w.ratio <= w.bound);
    if (prev > 0.0) CHECK(prev / w.residual_sq == doctest::Approx(16.0).epsilon(1e-6));
    prev = w.residual_sq;
  }
}

TEST_CASE("range symbol factors as B1 B2") {
  const double m = 2.0;
  const Params p(m);
  const double r = std::sqrt(m);
  for (double xi : {0.0, 0.2, 1.0, 4.0}) {
    const Eigen::Matrix2cd a = oracle::symbol(xi, m);
    const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
    const Eigen::Matrix2cd res1 = (id - a).inverse();
    const Eigen::Matrix2cd b1 = (cdouble(0.0, r) * id - a) * res1;
    const Eigen::Matrix2cd b2 = (cdouble(0.0, -r) * id - a) * res1;
    CHECK((range_symbol(xi, p) - b1 * b2).cwiseAbs().maxCoeff() < 1e-13);
  }
  CHECK(range_symbol(0.0, p).cwiseAbs().maxCoeff() < 1e-15);
  // O(xi^2) near the origin.
  const double a1 = range_symbol(1e-3, p).norm(), a2 = range_symbol(2e-3, p).norm();
  CHECK(a2 / a1 == doctest::Approx(4.0).epsilon(1e-4));
}

TEST_CASE("prepared data annihilates the zero mode") {
  const Params p(1.0);
  const Grid g(160.0, 4096, Boundary::PeriodicLine);
  const State y = random_smooth_state(9, g, Profile::GaussianPacket);
  const SpectralState z0 = to_spectral(prepare_range_data(y, p));
  CHECK(std::abs(z0.modes()[0].a(0)) < 1e-15);
  CHECK(std::abs(z0.modes()[0].a(1)) < 1e-15);
  const State zero = prepare_range_data(State::zero(g), p);
  CHECK(x_norm_sq(zero, p) == 0.0);
}

TEST_CASE("range conditions") {
  const Params p(1.0);
  const Grid g(160.0, 4096, Boundary::PeriodicLine);
  const RangeCheckReport zero = check_range_conditions(State::zero(g), p);
  CHECK(zero.all_passed());
  const State y = random_smooth_state(9, g, Profile::GaussianPacket);
  const RangeCheckReport generic = check_range_conditions(y, p);
  CHECK_FALSE(generic.all_passed());
  CHECK_FALSE(generic.edge_warning);
  const RangeCheckReport prepared = check_range_conditions(prepare_range_data(y, p), p);
  CHECK(prepared.all_passed());
  // A constant does not decay at the edge.
  const State flat(g, Field(g.size(), 1.0), Field(g.size(), 0.0));
  CHECK(check_range_conditions(flat, p).edge_warning);
  CHECK_THROWS_AS(check_range_conditions(State::zero(Grid(10.0, 64, Boundary::DirichletHalfline)), p),
                  std::invalid_argument);
}

TEST_CASE("decay fit on synthetic traces") {
  const DecayFit f = fit_decay_exponent(synthetic([](double t) { return 3.0 / (t * t); }, 1.0, 1e4, 40), 1e2, 1e4);
  CHECK(f.slope == doctest::Approx(-2.0).epsilon(1e-6));
  CHECK(f.r_squared == doctest::Approx(1.0));
  CHECK(f.conclusive());
  const EnergyTrace expo = synthetic([](double t) { return std::exp(-t / 50.0); }, 1.0, 1e3, 40);
  const DecayFit a = fit_decay_exponent(expo, 1.0, 30.0);
  const DecayFit b = fit_decay_exponent(expo, 30.0, 1e3);
  CHECK(std::abs(a.slope - b.slope) > 1.0);
  CHECK_THROWS_AS(fit_decay_exponent(expo, 1.0, 2.0), std::invalid_argument);
  EnergyTrace dead;
  for (double t : log_spaced(1.0, 100.0, 20)) dead.push_back({t, t < 10.0 ? 1.0 / t : 0.0, 0.0});
  CHECK_THROWS_AS(fit_decay_exponent(dead, 1.0, 100.0), std::domain_error);
}

TEST_CASE("decay trace is monotone and the zero mode is conserved") {
  const Params p(1.0);
  const Grid g(160.0, 2048, Boundary::PeriodicLine);
  const auto times = log_spaced(0.1, 1e3, 30);
  const EnergyTrace t = decay_trace(random_smooth_state(4, g, Profile::GaussianPacket), p, times);
  CHECK(t.size() == times.size());
  std::vector<Mode> modes(g.mode_count());
  for (std::size_t k = 0; k < modes.size(); ++k) modes[k] = {g.frequency(k), Vec2::Zero()};
  modes[0].a = Vec2(0.3, cdouble(0.0, 0.3));
  const EnergyTrace flat = decay_trace(SpectralState(g, modes), p, times);
  for (const auto& s : flat.samples()) {
    CHECK(s.energy == doctest::Approx(flat.samples()[0].energy).epsilon(1e-13));
  }
}

TEST_CASE("mode-integral oracle at t = 0 against a closed form") {
  const Params p(1.5);
  const Grid g(100.0, 1024, Boundary::PeriodicLine);
  SpectralProfile prof{Boundary::PeriodicLine, [](double xi) { return Vec2(std::exp(-xi * xi), 0.0); }, 12.0};
  // (1/2)(1/2pi) int (m + xi^2) e^{-2 xi^2}
  const double ref = 0.5 / (2.0 * std::numbers::pi) * std::sqrt(std::numbers::pi / 2.0) * (p.m() + 0.25);
  CHECK(mode_integral_oracle(prof, p, 0.0) == doctest::Approx(ref).epsilon(1e-12));
  // Sampling the same profile on a torus gives the trapezoid sum of that integral.
  const SpectralState s = sample_profile(prof, g);
  CHECK(energy(s, p) == doctest::Approx(ref).epsilon(1e-12));
  for (double t : {1.0, 10.0, 100.0}) {
    CHECK(energy(propagate(s, p, t), p) == doctest::Approx(mode_integral_oracle(prof, p, t)).epsilon(1e-6));
  }
}

TEST_CASE("decay cases") {
  const Params p(1.0);
  CHECK(parse_data_class("prepared-optimal-tail") == DataClass::PreparedOptimalTail);
  CHECK_THROWS_AS(parse_data_class("fast"), std::invalid_argument);
  CHECK(to_string(DataClass::Generic) == "generic");
  const Grid g(200.0, 2048, Boundary::PeriodicLine);
  const DecayCase c = make_decay_case(DataClass::Prepared, 3, g, p);
  CHECK(c.band.contains(-2.5));
  CHECK_FALSE(c.band.contains(-2.0));
  CHECK(std::abs(c.state.modes()[0].a.norm()) < 1e-15);
}

TEST_CASE("log spacing") {
  const auto t = log_spaced(1.0, 1e4, 5);
  CHECK(t[0] == 1.0);
  CHECK(t[2] == doctest::Approx(100.0));
  CHECK(t[4] == 1e4);
  CHECK_THROWS_AS(log_spaced(0.0, 1.0, 5), std::invalid_argument);
}
