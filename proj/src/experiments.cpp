#include "kvlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kvlab/symbol.hpp"
#include "kvlab/transform.hpp"

namespace kvlab {

double dissipation_identity_check(const State& z0, const Params& p, double t, double h) {
  if (!(h > 0.0) || !(t >= h)) throw std::invalid_argument("dissipation_identity_check: need t >= h > 0");
  const SpectralState z = to_spectral(z0);
  const double e0 = energy(z, p);
  const double ep = energy(propagate(z, p, t + h), p);
  const double em = energy(propagate(z, p, t - h), p);
  const double d = dissipation(propagate(z, p, t));
  return std::abs((ep - em) / (2.0 * h) + d) / std::max(e0, 1e-30);
}

WeylResidual weyl_residual(int k, const Params& p, const Grid& grid) {
  const State zk = weyl_state(k, p, grid);
  const SpectralState spec = to_spectral(zk);
  const cdouble shift(0.0, p.sqrt_m());
  const double residual_sq = x_norm_sq(apply_shifted_generator(shift, spec, p), p);
  const double norm_sq = x_norm_sq(spec, p);

  const Field u2 = spectral_derivative(grid, zk.u(), 2);
  double l2 = 0.0;
  for (const cdouble& c : u2) l2 += std::norm(c);
  l2 *= grid.spacing();

  const double sup = bump_second_derivative_sup();
  const double k4 = std::pow(static_cast<double>(k), 4);
  const double bound = 2.0 * (1.0 + p.m()) / k4 * sup * sup / (2.0 * p.m());
  return {k, residual_sq, norm_sq, residual_sq / norm_sq, (1.0 + p.m()) * l2, bound};
}

// ---------------------------------------------------------------------------
// Range data

Mat2 range_symbol(double xi, const Params& p) {
  // Entry by entry so the O(xi^2) factor carries no cancellation.
  const double xi2 = xi * xi;
  const double k = p.m() + xi2;
  Mat2 num;
  num << -xi2, -xi2, xi2 * k, xi2 * (xi2 - 1.0);
  Mat2 inv;
  inv << 1.0 + xi2, 1.0, -k, 1.0;
  inv /= 1.0 + p.m() + 2.0 * xi2;
  return num * inv * inv;
}

SpectralState prepare_range_data(const SpectralState& y, const Params& p) {
  return y.map([&](double xi, const Vec2& a) -> Vec2 { return range_symbol(xi, p) * a; });
}

State prepare_range_data(const State& y, const Params& p) {
  return to_physical(prepare_range_data(to_spectral(y), p));
}

SpectralProfile prepare_profile(const SpectralProfile& y, const Params& p) {
  auto base = y.amplitude;
  const Params params = p;
  return {y.geometry, [base, params](double xi) -> Vec2 { return range_symbol(xi, params) * base(xi); },
          y.extent};
}

bool RangeCheckReport::all_passed() const {
  return std::all_of(conditions.begin(), conditions.end(),
                     [](const RangeCondition& c) { return c.passed; });
}

namespace {

constexpr double kOuterShare = 0.1;
constexpr double kTailLimit = 1e-3;

Field cumulative_trapezoid(const Field& f, double h) {
  Field out(f.size());
  cdouble acc = 0.0;
  for (std::size_t j = 1; j < f.size(); ++j) {
    acc += 0.5 * h * (f[j - 1] + f[j]);
    out[j] = acc;
  }
  return out;
}

RangeCondition tail_test(const Field& g) {
  const std::size_t n = g.size();
  const auto edge = static_cast<std::size_t>(std::ceil(kOuterShare * static_cast<double>(n)));
  double total = 0.0, outer = 0.0;
  RangeCondition c{true, 0.0, std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::norm(g[j]);
    c.curve[j] = std::sqrt(a);
    total += a;
    if (j < edge || j >= n - edge) outer += a;
  }
  c.tail_fraction = total > 0.0 ? outer / total : 0.0;
  c.passed = c.tail_fraction < kTailLimit;
  return c;
}

}  // namespace

RangeCheckReport check_range_conditions(const State& z0, const Params& p) {
  const Grid& grid = z0.grid();
  if (grid.is_halfline()) throw std::invalid_argument("check_range_conditions: needs a line grid");
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const cdouble ism(0.0, p.sqrt_m());

  RangeCheckReport report{};
  double sup = 0.0, edge = 0.0;
  const auto band = std::max<std::size_t>(1, n / 100);
  for (std::size_t j = 0; j < n; ++j) {
    const double a = std::max(std::abs(z0.u()[j]), std::abs(z0.v()[j]));
    sup = std::max(sup, a);
    if (j < band || j >= n - band) edge = std::max(edge, a);
  }
  report.edge_warning = sup > 0.0 && edge > 1e-8 * sup;
  if (report.edge_warning) {
    report.warnings.push_back("data has not decayed at the grid edge; antiderivative tails are unreliable");
  }

  for (int sign = 0; sign < 2; ++sign) {
    const cdouble factor = sign == 0 ? ism : -ism;
    Field f(n);
    for (std::size_t j = 0; j < n; ++j) f[j] = factor * z0.u()[j] + z0.v()[j];
    const Field once = cumulative_trapezoid(f, h);
    const Field twice = cumulative_trapezoid(once, h);
    report.conditions[static_cast<std::size_t>(sign)] = tail_test(once);
    report.conditions[static_cast<std::size_t>(2 + sign)] = tail_test(twice);
  }
  return report;
}

// ---------------------------------------------------------------------------
// Decay

EnergyTrace decay_trace(const SpectralState& z0, const Params& p, std::span<const double> times) {
  std::vector<EnergySample> samples(times.size());
  const auto count = static_cast<long>(times.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const double t = times[static_cast<std::size_t>(i)];
    const SpectralState zt = propagate(z0, p, t);
    samples[static_cast<std::size_t>(i)] = {t, energy(zt, p), dissipation(zt)};
  }
  EnergyTrace trace;
  for (const auto& s : samples) trace.push_back(s);
  return trace;
}

EnergyTrace decay_trace(const State& z0, const Params& p, std::span<const double> times) {
  return decay_trace(to_spectral(z0), p, times);
}

double mode_integral_oracle(const SpectralProfile& profile, const Params& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("mode_integral_oracle: t must be >= 0");
  using boost::math::quadrature::gauss_kronrod;
  auto density = [&](double xi) {
    const Vec2 b = mode_propagator(xi, p, t) * profile.amplitude(xi);
    return (p.m() + xi * xi) * std::norm(b(0)) + std::norm(b(1));
  };
  // Panels refine geometrically towards xi = 0, where the slow branch lives.
  const double scale = t > 0.0 ? std::min(profile.extent, 1.0 / std::sqrt(t)) : profile.extent;
  std::vector<double> edges{0.0};
  for (double e = scale / 16.0; e < profile.extent; e *= 2.0) edges.push_back(e);
  edges.push_back(profile.extent);

  auto half_line = [&](double sign) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      total += gauss_kronrod<double, 15>::integrate(
          [&](double xi) { return density(sign * xi); }, edges[i], edges[i + 1], 15, 1e-12);
    }
    return total;
  };
  if (profile.geometry == Boundary::DirichletHalfline) {
    return 0.5 * (2.0 / std::numbers::pi) * half_line(1.0);
  }
  return 0.5 * (half_line(1.0) + half_line(-1.0)) / (2.0 * std::numbers::pi);
}

DecayFit fit_decay_exponent(const EnergyTrace& trace, double t_min, double t_max) {
  if (!(t_min >= 1.0) || !(t_max > t_min)) {
    throw std::invalid_argument("fit_decay_exponent: need 1 <= t_min < t_max");
  }
  std::vector<double> xs, ys;
  for (const auto& s : trace.samples()) {
    if (s.t < t_min || s.t > t_max) continue;
    if (!(s.energy > 0.0)) {
      throw std::domain_error("fit_decay_exponent: non-positive energy in window; shrink the window");
    }
    xs.push_back(std::log(s.t));
    ys.push_back(std::log(s.energy));
  }
  if (xs.size() < 10) throw std::invalid_argument("fit_decay_exponent: fewer than 10 samples in window");

  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
  return {t_min, t_max, slope, my - slope * mx, r2, xs.size()};
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) throw std::invalid_argument("log_spaced: bad range");
  std::vector<double> out(count);
  const double a = std::log(lo), b = std::log(hi);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = std::exp(a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
  }
  out.front() = lo;
  out.back() = hi;
  return out;
}

DataClass parse_data_class(const std::string& name) {
  if (name == "generic") return DataClass::Generic;
  if (name == "prepared") return DataClass::Prepared;
  if (name == "prepared-optimal-tail") return DataClass::PreparedOptimalTail;
  throw std::invalid_argument("unknown data class '" + name +
                              "' (expected generic, prepared or prepared-optimal-tail)");
}

std::string to_string(DataClass c) {
  switch (c) {
    case DataClass::Generic: return "generic";
    case DataClass::Prepared: return "prepared";
    case DataClass::PreparedOptimalTail: return "prepared-optimal-tail";
  }
  return "?";
}

SlopeBand expected_band(DataClass c) {
  switch (c) {
    case DataClass::Generic: return {-0.7, -0.3};
    case DataClass::Prepared: return {-2.8, -2.2};
    case DataClass::PreparedOptimalTail: return {-2.3, -1.8};
  }
  return {0.0, 0.0};
}

DecayCase make_decay_case(DataClass c, std::uint64_t seed, const Grid& grid, const Params& p) {
  const Profile smooth = grid.is_halfline() ? Profile::SpectralPacket : Profile::GaussianPacket;
  SpectralProfile profile = data_profile(seed, grid, smooth);
  if (c == DataClass::Prepared) profile = prepare_profile(profile, p);
  if (c == DataClass::PreparedOptimalTail) {
    profile = prepare_profile(data_profile(seed, grid, Profile::LowFreqTail), p);
  }
  SpectralState state = sample_profile(profile, grid);
  return {c, std::move(profile), std::move(state), expected_band(c)};
}

}  // namespace kvlab
