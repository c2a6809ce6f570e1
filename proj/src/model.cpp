#include "kvlab/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "kvlab/transform.hpp"

namespace kvlab {

Params::Params(double m) : m_(m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw std::invalid_argument("mass m must be > 0");
}

double Params::sqrt_m() const noexcept { return std::sqrt(m_); }

// ---------------------------------------------------------------------------
// State / SpectralState

State::State(Grid grid, Field u, Field v)
    : grid_(std::move(grid)), u_(std::move(u)), v_(std::move(v)) {
  if (u_.size() != grid_.size() || v_.size() != grid_.size()) {
    throw std::invalid_argument("State: field length does not match grid");
  }
  if (grid_.is_halfline()) {
    double sup = 1.0;
    for (std::size_t j = 0; j < u_.size(); ++j) {
      sup = std::max({sup, std::abs(u_[j]), std::abs(v_[j])});
    }
    if (std::abs(u_[0]) > 1e-12 * sup || std::abs(v_[0]) > 1e-12 * sup) {
      throw std::invalid_argument("State: Dirichlet trace at x = 0 is not zero");
    }
  }
}

State State::zero(const Grid& grid) {
  return State(grid, Field(grid.size()), Field(grid.size()));
}

SpectralState::SpectralState(Grid grid, std::vector<Mode> modes)
    : grid_(std::move(grid)), modes_(std::move(modes)) {
  if (modes_.size() != grid_.mode_count()) {
    throw std::invalid_argument("SpectralState: mode count does not match grid");
  }
}

SpectralState SpectralState::zero(const Grid& grid) {
  std::vector<Mode> modes(grid.mode_count());
  for (std::size_t k = 0; k < modes.size(); ++k) modes[k] = {grid.frequency(k), Vec2::Zero()};
  return SpectralState(grid, std::move(modes));
}

SpectralState SpectralState::map(const std::function<Vec2(double, const Vec2&)>& f) const {
  std::vector<Mode> out(modes_.size());
  const auto count = static_cast<long>(modes_.size());
#pragma omp parallel for schedule(static)
  for (long k = 0; k < count; ++k) {
    out[k] = {modes_[k].xi, f(modes_[k].xi, modes_[k].a)};
  }
  return SpectralState(grid_, std::move(out));
}

SpectralState to_spectral(const State& z) {
  const Grid& grid = z.grid();
  Field uh = forward_transform(grid, z.u());
  Field vh = forward_transform(grid, z.v());
  std::vector<Mode> modes(uh.size());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    modes[k] = {grid.frequency(k), Vec2(uh[k], vh[k])};
  }
  return SpectralState(grid, std::move(modes));
}

State to_physical(const SpectralState& z) {
  const Grid& grid = z.grid();
  Field uh(z.size()), vh(z.size());
  for (std::size_t k = 0; k < z.size(); ++k) {
    uh[k] = z.modes()[k].a(0);
    vh[k] = z.modes()[k].a(1);
  }
  return State(grid, inverse_transform(grid, uh), inverse_transform(grid, vh));
}

// ---------------------------------------------------------------------------
// Norms

double x_norm_sq(const SpectralState& z, const Params& p) {
  double acc = 0.0;
  for (const auto& mode : z.modes()) {
    acc += (p.m() + mode.xi * mode.xi) * std::norm(mode.a(0)) + std::norm(mode.a(1));
  }
  return acc;
}

double x_norm_sq(const State& z, const Params& p) { return x_norm_sq(to_spectral(z), p); }

double x_distance_sq(const SpectralState& a, const SpectralState& b, const Params& p) {
  if (!(a.grid() == b.grid())) throw std::invalid_argument("x_distance_sq: grids differ");
  double acc = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double xi = a.modes()[k].xi;
    const Vec2 d = a.modes()[k].a - b.modes()[k].a;
    acc += (p.m() + xi * xi) * std::norm(d(0)) + std::norm(d(1));
  }
  return acc;
}

double energy(const SpectralState& z, const Params& p) { return 0.5 * x_norm_sq(z, p); }
double energy(const State& z, const Params& p) { return 0.5 * x_norm_sq(z, p); }

double dissipation(const SpectralState& z) {
  double acc = 0.0;
  for (const auto& mode : z.modes()) acc += mode.xi * mode.xi * std::norm(mode.a(1));
  return acc;
}

double dissipation(const State& z) { return dissipation(to_spectral(z)); }

// ---------------------------------------------------------------------------
// Bump function

namespace {

struct Mollifier {
  double value, d1, d2;
};

// psi(t) = exp(-1/t) for t > 0.
Mollifier psi(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  const double e = std::exp(-1.0 / t);
  const double t2 = t * t;
  return {e, e / t2, e * (1.0 / (t2 * t2) - 2.0 / (t2 * t))};
}

// Smooth step S(t) = psi(t) / (psi(t) + psi(1 - t)) and derivatives.
Mollifier smooth_step(double t) {
  if (t <= 0.0) return {0.0, 0.0, 0.0};
  if (t >= 1.0) return {1.0, 0.0, 0.0};
  const Mollifier a = psi(t);
  const Mollifier r = psi(1.0 - t);
  const double b = r.value, db = -r.d1, d2b = r.d2;
  const double den = a.value + b;
  const double num1 = a.d1 * b - a.value * db;
  const double s1 = num1 / (den * den);
  const double s2 = (a.d2 * b - a.value * d2b) / (den * den) -
                    2.0 * num1 * (a.d1 + db) / (den * den * den);
  return {a.value / den, s1, s2};
}

}  // namespace

double bump_profile(double x) { return smooth_step(2.0 * (1.0 - std::abs(x))).value; }

double bump_derivative(double x) {
  const double sign = x < 0.0 ? -1.0 : 1.0;
  return -2.0 * sign * smooth_step(2.0 * (1.0 - std::abs(x))).d1;
}

double bump_second_derivative(double x) {
  return 4.0 * smooth_step(2.0 * (1.0 - std::abs(x))).d2;
}

double bump_second_derivative_sup() {
  static const double sup = [] {
    // Phi'' is supported on 1/2 < |x| < 1 and even.
    constexpr int samples = 200000;
    auto f = [](double x) { return std::abs(bump_second_derivative(x)); };
    double best_x = 0.75, best = 0.0;
    for (int i = 1; i < samples; ++i) {
      const double x = 0.5 + 0.5 * i / samples;
      if (const double val = f(x); val > best) {
        best = val;
        best_x = x;
      }
    }
    double lo = best_x - 0.5 / samples, hi = best_x + 0.5 / samples;
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = hi - ratio * (hi - lo), d = lo + ratio * (hi - lo);
    for (int it = 0; it < 100; ++it) {
      if (f(c) > f(d)) hi = d; else lo = c;
      c = hi - ratio * (hi - lo);
      d = lo + ratio * (hi - lo);
    }
    return std::max(best, f(0.5 * (lo + hi)));
  }();
  return sup;
}

State weyl_state(int k, const Params& p, const Grid& grid) {
  if (k < 1) throw std::invalid_argument("weyl_state: k must be >= 1");
  if (2.0 * k > 0.5 * grid.length()) {
    throw std::invalid_argument("weyl_state: bump support 2k exceeds L/2");
  }
  const double kk = static_cast<double>(k);
  const double scale = 1.0 / std::sqrt(kk);
  const double shift = grid.is_halfline() ? 1.0 : 0.0;
  const cdouble velocity_factor(0.0, p.sqrt_m());
  Field u(grid.size()), v(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j) {
    u[j] = scale * bump_profile(grid.x(j) / kk - shift);
    v[j] = velocity_factor * u[j];
  }
  return State(grid, std::move(u), std::move(v));
}

// ---------------------------------------------------------------------------
// Random data

namespace {

struct Gaussian {
  cdouble amplitude;
  double center;
  double width;

  cdouble at(double x) const {
    const double r = (x - center) / width;
    return amplitude * std::exp(-0.5 * r * r);
  }
  // Fourier transform, int f(x) exp(-i xi x) dx.
  cdouble fourier(double xi) const {
    const double g = width * std::sqrt(2.0 * std::numbers::pi) *
                     std::exp(-0.5 * width * width * xi * xi);
    return amplitude * g * std::polar(1.0, -xi * center);
  }
  // Sine transform, int_0^inf f(x) sin(xi x) dx; the x < 0 mass is negligible
  // because packets sit at least ten widths from the boundary.
  cdouble sine(double xi) const {
    const double g = width * std::sqrt(2.0 * std::numbers::pi) *
                     std::exp(-0.5 * width * width * xi * xi);
    return amplitude * g * std::sin(xi * center);
  }
};

class Sampler {
 public:
  explicit Sampler(std::uint64_t seed) : engine_(seed) {}
  double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(engine_); }
  cdouble amplitude() {
    const double r = uniform(0.5, 1.5);
    return std::polar(r, uniform(0.0, 2.0 * std::numbers::pi));
  }

 private:
  std::mt19937_64 engine_;
};

struct PacketPair {
  Gaussian u, v;
};

PacketPair make_packets(std::uint64_t seed, const Grid& grid) {
  Sampler rng(seed);
  const double L = grid.length();
  PacketPair pair{};
  for (Gaussian* g : {&pair.u, &pair.v}) {
    g->amplitude = rng.amplitude();
    if (grid.is_halfline()) {
      const double s = std::min(1.0, L / 80.0);
      g->width = rng.uniform(0.6, 1.0) * s;
      g->center = rng.uniform(10.0, 12.0) * s;
    } else {
      g->width = rng.uniform(0.6, 1.0) * std::min(1.0, L / 40.0);
      const double reach = std::min(3.0, L / 16.0);
      g->center = rng.uniform(-reach, reach);
    }
  }
  return pair;
}

}  // namespace

SpectralProfile data_profile(std::uint64_t seed, const Grid& grid, Profile profile) {
  const Boundary geometry = grid.boundary();
  switch (profile) {
    case Profile::GaussianPacket: {
      const PacketPair pair = make_packets(seed, grid);
      const double extent = 9.0 / std::min(pair.u.width, pair.v.width);
      if (grid.is_halfline()) {
        return {geometry, [pair](double xi) { return Vec2(pair.u.sine(xi), pair.v.sine(xi)); },
                extent};
      }
      return {geometry, [pair](double xi) { return Vec2(pair.u.fourier(xi), pair.v.fourier(xi)); },
              extent};
    }
    case Profile::SpectralPacket: {
      Sampler rng(seed);
      const cdouble au = rng.amplitude(), av = rng.amplitude();
      const double su = rng.uniform(0.6, 1.0), sv = rng.uniform(0.6, 1.0);
      auto amp = [au, av, su, sv](double xi) {
        return Vec2(au * std::exp(-0.5 * su * su * xi * xi), av * std::exp(-0.5 * sv * sv * xi * xi));
      };
      return {geometry, amp, 9.0 / std::min(su, sv)};
    }
    case Profile::LowFreqTail: {
      Sampler rng(seed);
      const cdouble au = rng.amplitude(), av = rng.amplitude();
      auto amp = [au, av](double xi) -> Vec2 {
        if (xi == 0.0) return Vec2::Zero();
        const double r = xi / kTailCutoff;
        const double shape = std::exp(-r * r * r * r) / std::sqrt(std::abs(xi));
        return Vec2(au * shape, av * shape);
      };
      return {geometry, amp, 3.0 * kTailCutoff};
    }
  }
  throw std::invalid_argument("data_profile: unknown profile");
}

SpectralState sample_profile(const SpectralProfile& profile, const Grid& grid) {
  if (profile.geometry != grid.boundary()) {
    throw std::invalid_argument("sample_profile: profile geometry does not match grid");
  }
  const double scale = grid.is_halfline() ? std::sqrt(2.0 / grid.length())
                                          : 1.0 / std::sqrt(grid.length());
  std::vector<Mode> modes(grid.mode_count());
  for (std::size_t k = 0; k < modes.size(); ++k) {
    const double xi = grid.frequency(k);
    modes[k] = {xi, scale * profile.amplitude(xi)};
  }
  return SpectralState(grid, std::move(modes));
}

State random_smooth_state(std::uint64_t seed, const Grid& grid, Profile profile) {
  if (profile == Profile::GaussianPacket) {
    const PacketPair pair = make_packets(seed, grid);
    Field u(grid.size()), v(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) {
      u[j] = pair.u.at(grid.x(j));
      v[j] = pair.v.at(grid.x(j));
    }
    if (grid.is_halfline()) u[0] = v[0] = 0.0;
    return State(grid, std::move(u), std::move(v));
  }
  return to_physical(sample_profile(data_profile(seed, grid, profile), grid));
}

// ---------------------------------------------------------------------------

void EnergyTrace::push_back(const EnergySample& sample) {
  if (!(sample.t >= 0.0) || !(sample.energy >= 0.0) || !(sample.dissipation >= 0.0)) {
    throw std::invalid_argument("EnergyTrace: negative or NaN sample");
  }
  if (!samples_.empty()) {
    const auto& last = samples_.back();
    if (!(sample.t > last.t)) throw std::invalid_argument("EnergyTrace: t must increase");
    if (sample.energy > last.energy * (1.0 + 1e-10)) {
      throw std::invalid_argument("EnergyTrace: energy increased");
    }
  }
  samples_.push_back(sample);
}

}  // namespace kvlab
