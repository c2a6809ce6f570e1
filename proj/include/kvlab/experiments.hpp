#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kvlab/model.hpp"

namespace kvlab {

/// |(E(t+h) - E(t-h))/(2h) + D(t)| / max(E(0), 1e-30) under exact propagation.
double dissipation_identity_check(const State& z0, const Params& p, double t, double h);

struct WeylResidual {
  int k;
  double residual_sq;     // ||(i sqrt(m) - A) z_k||_X^2, applied mode by mode
  double norm_sq;         // ||z_k||_X^2
  double ratio;           // residual_sq / norm_sq
  double identity_value;  // (1 + m) ||u_k''||^2
  double bound;           // 2 (1 + m) k^-4 sup|Phi''|^2 / (2m)
};

WeylResidual weyl_residual(int k, const Params& p, const Grid& grid);

/// (M^2 + m) (I - M)^{-2}, the per-mode symbol of B1 B2.
Mat2 range_symbol(double xi, const Params& p);

SpectralState prepare_range_data(const SpectralState& y, const Params& p);
State prepare_range_data(const State& y, const Params& p);
SpectralProfile prepare_profile(const SpectralProfile& y, const Params& p);

struct RangeCondition {
  bool passed;
  double tail_fraction;       // outer-10% share of the squared L2 mass
  std::vector<double> curve;  // |antiderivative| at the grid nodes
};

struct RangeCheckReport {
  std::array<RangeCondition, 4> conditions;  // (a) (b) single, (c) (d) double
  bool edge_warning;
  std::vector<std::string> warnings;
  bool all_passed() const;
};

RangeCheckReport check_range_conditions(const State& z0, const Params& p);

/// E(t) and D(t) at each time via exact per-mode propagation.
EnergyTrace decay_trace(const State& z0, const Params& p, std::span<const double> times);
EnergyTrace decay_trace(const SpectralState& z0, const Params& p, std::span<const double> times);

/// E(t) = (1/2) int ||W e^{tM} a(xi)||^2 dxi / (2 pi) on the line, and with
/// weight 2/pi over (0, inf) for a sine-transform profile.
double mode_integral_oracle(const SpectralProfile& profile, const Params& p, double t);

struct DecayFit {
  double t_min;
  double t_max;
  double slope;
  double intercept;
  double r_squared;
  std::size_t samples;
  bool conclusive() const { return r_squared >= 0.98; }
};

/// Least squares of log E against log t over samples with t in [t_min, t_max].
DecayFit fit_decay_exponent(const EnergyTrace& trace, double t_min, double t_max);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

enum class DataClass { Generic, Prepared, PreparedOptimalTail };

DataClass parse_data_class(const std::string& name);
std::string to_string(DataClass c);

struct SlopeBand {
  double lo;
  double hi;
  bool contains(double slope) const { return slope >= lo && slope <= hi; }
};

SlopeBand expected_band(DataClass c);

struct DecayCase {
  DataClass data_class;
  SpectralProfile profile;
  SpectralState state;
  SlopeBand band;
};

/// Generic: gaussian packet on the line, spectral packet on the half-line.
/// Prepared: B1 B2 applied to that datum. Optimal tail: B1 B2 applied to the
/// low-frequency tail profile.
DecayCase make_decay_case(DataClass c, std::uint64_t seed, const Grid& grid, const Params& p);

}  // namespace kvlab
