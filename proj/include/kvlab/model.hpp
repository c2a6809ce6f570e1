#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "kvlab/grid.hpp"
#include "kvlab/types.hpp"

namespace kvlab {

/// Mass coefficient of u_tt - u_xx + m u - u_txx = 0.
class Params {
 public:
  explicit Params(double m);
  double m() const noexcept { return m_; }
  double sqrt_m() const noexcept;

 private:
  double m_;
};

/// Phase-space point z = (u, v) sampled on a grid.
class State {
 public:
  State(Grid grid, Field u, Field v);
  static State zero(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  const Field& u() const noexcept { return u_; }
  const Field& v() const noexcept { return v_; }

 private:
  Grid grid_;
  Field u_;
  Field v_;
};

struct Mode {
  double xi;
  Vec2 a;  // (u^, v^)
};

/// Per-mode 2-vectors diagonalising the evolution.
class SpectralState {
 public:
  SpectralState(Grid grid, std::vector<Mode> modes);
  static SpectralState zero(const Grid& grid);

  const Grid& grid() const noexcept { return grid_; }
  std::span<const Mode> modes() const noexcept { return modes_; }
  std::size_t size() const noexcept { return modes_.size(); }

  /// Same grid and frequencies, coefficients replaced by f(xi, a).
  SpectralState map(const std::function<Vec2(double, const Vec2&)>& f) const;

 private:
  Grid grid_;
  std::vector<Mode> modes_;
};

SpectralState to_spectral(const State& z);
State to_physical(const SpectralState& z);

/// m|u|^2 + |u'|^2 + |v|^2 integrated, evaluated mode by mode.
double x_norm_sq(const SpectralState& z, const Params& p);
double x_norm_sq(const State& z, const Params& p);
double x_distance_sq(const SpectralState& a, const SpectralState& b, const Params& p);
double energy(const SpectralState& z, const Params& p);
double energy(const State& z, const Params& p);
/// ||v'||^2, the instantaneous energy loss rate.
double dissipation(const SpectralState& z);
double dissipation(const State& z);

// C-infinity bump: 1 on [-1/2, 1/2], 0 outside (-1, 1).
double bump_profile(double x);
double bump_derivative(double x);
double bump_second_derivative(double x);
/// sup |Phi''| by dense sampling plus golden-section polish (cached).
double bump_second_derivative_sup();

/// z_k = (u_k, i sqrt(m) u_k) with u_k(x) = Phi(x/k)/sqrt(k); on the half-line
/// the bump is shifted to Phi(x/k - 1).
State weyl_state(int k, const Params& p, const Grid& grid);

enum class Profile {
  GaussianPacket,  // compact Gaussians, nonzero mean on the line
  LowFreqTail,     // |a(xi)| ~ |xi|^{-1/2} for small xi
  SpectralPacket,  // Gaussian in xi; nonvanishing density at xi = 0 on both geometries
};

/// Continuous transform of a datum: Fourier transform on the line,
/// sine transform on the half-line.
struct SpectralProfile {
  Boundary geometry;
  std::function<Vec2(double)> amplitude;
  double extent;  // amplitude negligible for |xi| > extent
};

/// Deterministic in seed. The state is the grid sampling of data_profile().
State random_smooth_state(std::uint64_t seed, const Grid& grid, Profile profile);
SpectralProfile data_profile(std::uint64_t seed, const Grid& grid, Profile profile);
SpectralState sample_profile(const SpectralProfile& profile, const Grid& grid);

/// Cutoff frequency for the low-frequency tail profile.
inline constexpr double kTailCutoff = 1.0;

struct EnergySample {
  double t;
  double energy;
  double dissipation;
};

class EnergyTrace {
 public:
  /// Rejects non-increasing t and energy growth beyond 1e-10 relative.
  void push_back(const EnergySample& sample);
  std::span<const EnergySample> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  bool empty() const noexcept { return samples_.empty(); }

 private:
  std::vector<EnergySample> samples_;
};

}  // namespace kvlab
