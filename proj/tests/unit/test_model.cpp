#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kvlab/model.hpp"
#include "kvlab/transform.hpp"
#include "oracles.hpp"

using namespace kvlab;

namespace {

double gauss(double x, double c, double w) { return std::exp(-0.5 * (x - c) * (x - c) / (w * w)); }

}  // namespace

TEST_CASE("grid rejects bad sizes and lengths") {
  CHECK_THROWS_AS(Grid(10.0, 100, Boundary::PeriodicLine), std::invalid_argument);
  CHECK_THROWS_AS(Grid(10.0, 2, Boundary::PeriodicLine), std::invalid_argument);
  CHECK_THROWS_AS(Grid(-1.0, 64, Boundary::PeriodicLine), std::invalid_argument);
  const Grid g(10.0, 64, Boundary::PeriodicLine);
  CHECK(g.x(0) == doctest::Approx(-5.0));
  CHECK(g.mode_count() == 64);
  CHECK(g.frequency(1) == doctest::Approx(2.0 * std::numbers::pi / 10.0));
  CHECK(g.frequency(63) == doctest::Approx(-2.0 * std::numbers::pi / 10.0));
  const Grid hl(10.0, 64, Boundary::DirichletHalfline);
  CHECK(hl.x(0) == 0.0);
  CHECK(hl.mode_count() == 63);
  CHECK(hl.frequency(0) == doctest::Approx(std::numbers::pi / 10.0));
}

TEST_CASE("fft matches a direct DFT") {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  Field a(32);
  for (auto& c : a) c = {nd(rng), nd(rng)};
  Field b = a;
  fft_inplace(b, -1);
  for (std::size_t k = 0; k < a.size(); ++k) {
    cdouble ref = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
      ref += a[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(j * k) / 32.0);
    }
    CHECK(std::abs(b[k] - ref) < 1e-12);
  }
}

TEST_CASE("circular convolution matches the direct sum") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  Field a(16), b(16);
  for (auto& c : a) c = {nd(rng), nd(rng)};
  for (auto& c : b) c = {nd(rng), nd(rng)};
  const Field c = circular_convolve(a, b);
  for (std::size_t i = 0; i < 16; ++i) {
    cdouble ref = 0.0;
    for (std::size_t j = 0; j < 16; ++j) ref += a[(i + 16 - j) % 16] * b[j];
    CHECK(std::abs(c[i] - ref) < 1e-12);
  }
}

TEST_CASE("line coefficients sample the Fourier transform") {
  const Grid g(40.0, 512, Boundary::PeriodicLine);
  Field u(g.size());
  const double c = 1.3, w = 0.8;
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = gauss(g.x(j), c, w);
  const Field a = forward_transform(g, u);
  for (std::size_t k : {0, 1, 5, 20, 511}) {
    const double xi = g.frequency(k);
    const cdouble ft = w * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * w * w * xi * xi) *
                       std::polar(1.0, -xi * c);
    CHECK(std::abs(a[k] - ft / std::sqrt(g.length())) < 1e-13);
  }
  const Field back = inverse_transform(g, a);
  for (std::size_t j = 0; j < u.size(); ++j) CHECK(std::abs(back[j] - u[j]) < 1e-13);
}

TEST_CASE("sine coefficients sample the sine transform and keep Parseval") {
  const Grid g(60.0, 1024, Boundary::DirichletHalfline);
  Field u(g.size());
  const double c = 15.0, w = 1.1;
  for (std::size_t j = 1; j < u.size(); ++j) u[j] = gauss(g.x(j), c, w);
  const Field a = forward_transform(g, u);
  REQUIRE(a.size() == g.mode_count());
  for (std::size_t k : {0, 3, 40}) {
    const double xi = g.frequency(k);
    const double fs = w * std::sqrt(2.0 * std::numbers::pi) * std::exp(-0.5 * w * w * xi * xi) *
                      std::sin(xi * c);
    CHECK(std::abs(a[k] - std::sqrt(2.0 / g.length()) * fs) < 1e-12);
  }
  double coeff = 0.0;
  for (const auto& x : a) coeff += std::norm(x);
  CHECK(coeff == doctest::Approx(oracle::l2_sq(u, g.spacing())).epsilon(1e-13));
  const Field back = inverse_transform(g, a);
  for (std::size_t j = 0; j < u.size(); ++j) CHECK(std::abs(back[j] - u[j]) < 1e-13);
}

TEST_CASE("spectral derivatives of a Gaussian") {
  const Grid g(40.0, 1024, Boundary::PeriodicLine);
  Field u(g.size());
  for (std::size_t j = 0; j < u.size(); ++j) u[j] = gauss(g.x(j), 0.5, 1.0);
  const Field d1 = spectral_derivative(g, u, 1);
  const Field d2 = spectral_derivative(g, u, 2);
  for (std::size_t j = 0; j < u.size(); j += 37) {
    const double r = g.x(j) - 0.5;
    CHECK(std::abs(d1[j] - (-r) * u[j]) < 1e-11);
    CHECK(std::abs(d2[j] - (r * r - 1.0) * u[j]) < 1e-11);
  }
  const Grid hl(40.0, 1024, Boundary::DirichletHalfline);
  CHECK_THROWS_AS(spectral_derivative(hl, Field(1024), 1), std::invalid_argument);
}

TEST_CASE("params and state validation") {
  CHECK_THROWS_AS(Params(0.0), std::invalid_argument);
  CHECK_THROWS_AS(Params(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(Params(NAN), std::invalid_argument);
  const Grid g(10.0, 16, Boundary::PeriodicLine);
  CHECK_THROWS_AS(State(g, Field(8), Field(16)), std::invalid_argument);
  const Grid hl(10.0, 16, Boundary::DirichletHalfline);
  Field u(16, 1.0);
  CHECK_THROWS_AS(State(hl, u, Field(16)), std::invalid_argument);
  u[0] = 0.0;
  CHECK_NOTHROW(State(hl, u, Field(16)));
}

TEST_CASE("spectral X norm equals the physical quadrature") {
  const Params p(1.7);
  const Grid g(60.0, 2048, Boundary::PeriodicLine);
  Field u(g.size()), v(g.size()), du(g.size());
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.x(j);
    u[j] = gauss(x, 1.0, 0.9) * cdouble(1.0, 0.3);
    du[j] = -(x - 1.0) / (0.81) * u[j];
    v[j] = gauss(x, -2.0, 0.7);
  }
  const double h = g.spacing();
  const double ref = p.m() * oracle::l2_sq(u, h) + oracle::l2_sq(du, h) + oracle::l2_sq(v, h);
  const State z(g, u, v);
  CHECK(x_norm_sq(z, p) == doctest::Approx(ref).epsilon(1e-12));
  CHECK(energy(z, p) == doctest::Approx(0.5 * ref).epsilon(1e-12));
}

TEST_CASE("bump: flat top, compact support, derivatives agree with differences") {
  CHECK(bump_profile(0.0) == 1.0);
  CHECK(bump_profile(0.5) == doctest::Approx(1.0));
  CHECK(bump_profile(1.0) == 0.0);
  CHECK(bump_profile(-1.2) == 0.0);
  const double h = 1e-4;
  for (double x : {-0.9, -0.75, 0.55, 0.7, 0.8, 0.95}) {
    const double fd1 = (bump_profile(x + h) - bump_profile(x - h)) / (2 * h);
    const double fd2 = (bump_profile(x + h) - 2 * bump_profile(x) + bump_profile(x - h)) / (h * h);
    CHECK(bump_derivative(x) == doctest::Approx(fd1).epsilon(1e-6));
    CHECK(bump_second_derivative(x) == doctest::Approx(fd2).epsilon(1e-5));
  }
  // Dense finite-difference sweep of the profile itself.
  double sup = 0.0;
  const double hh = 1e-5;
  for (double x = 0.5; x <= 1.0; x += 1e-6) {
    const double fd2 = (bump_profile(x + hh) - 2 * bump_profile(x) + bump_profile(x - hh)) / (hh * hh);
    sup = std::max(sup, std::abs(fd2));
  }
  CHECK(bump_second_derivative_sup() == doctest::Approx(sup).epsilon(1e-4));
}

TEST_CASE("weyl states") {
  const Params p(1.0);
  const Grid g(256.0, 8192, Boundary::PeriodicLine);
  for (int k : {1, 4, 16}) {
    const State z = weyl_state(k, p, g);
    CHECK(x_norm_sq(z, p) >= 2.0 * p.m());
    CHECK(std::abs(z.v()[g.size() / 2] - cdouble(0.0, 1.0) * z.u()[g.size() / 2]) < 1e-14);
  }
  CHECK_THROWS_AS(weyl_state(0, p, g), std::invalid_argument);
  CHECK_THROWS_AS(weyl_state(128, p, g), std::invalid_argument);
  const Grid hl(256.0, 8192, Boundary::DirichletHalfline);
  const State zh = weyl_state(8, p, hl);
  CHECK(zh.u()[0] == 0.0);
}

TEST_CASE("random data is deterministic and sampled consistently") {
  const Grid g(80.0, 2048, Boundary::PeriodicLine);
  const State a = random_smooth_state(7, g, Profile::GaussianPacket);
  const State b = random_smooth_state(7, g, Profile::GaussianPacket);
  const State c = random_smooth_state(8, g, Profile::GaussianPacket);
  CHECK(a.u() == b.u());
  CHECK(a.u() != c.u());
  // The physical packet and its analytic transform describe the same datum.
  const SpectralState spec = to_spectral(a);
  const SpectralState prof = sample_profile(data_profile(7, g, Profile::GaussianPacket), g);
  CHECK(x_distance_sq(spec, prof, Params(1.0)) < 1e-24 * x_norm_sq(spec, Params(1.0)));

  const Grid hl(80.0, 2048, Boundary::DirichletHalfline);
  const SpectralState hs = to_spectral(random_smooth_state(7, hl, Profile::GaussianPacket));
  const SpectralState hp = sample_profile(data_profile(7, hl, Profile::GaussianPacket), hl);
  CHECK(x_distance_sq(hs, hp, Params(1.0)) < 1e-20 * x_norm_sq(hs, Params(1.0)));
  CHECK_THROWS_AS(sample_profile(data_profile(7, g, Profile::SpectralPacket), hl), std::invalid_argument);
}

TEST_CASE("energy trace rejects growth and unordered times") {
  EnergyTrace t;
  t.push_back({1.0, 2.0, 0.1});
  CHECK_THROWS_AS(t.push_back({1.0, 1.0, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(t.push_back({2.0, 2.1, 0.1}), std::invalid_argument);
  CHECK_THROWS_AS(t.push_back({2.0, -1.0, 0.1}), std::invalid_argument);
  t.push_back({2.0, 2.0, 0.0});
  CHECK(t.size() == 2);
}
