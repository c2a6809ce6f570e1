#include "kvlab/symbol.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <stdexcept>

#include <Eigen/Eigenvalues>

namespace kvlab {

Mat2 symbol_matrix(double xi, const Params& p) {
  const double xi2 = xi * xi;
  Mat2 m;
  m << 0.0, 1.0, -(p.m() + xi2), -xi2;
  return m;
}

Mat2 weight_matrix(double xi, const Params& p) {
  Mat2 w = Mat2::Zero();
  w(0, 0) = std::sqrt(p.m() + xi * xi);
  w(1, 1) = 1.0;
  return w;
}

double spectral_norm(const Mat2& op) {
  // Largest eigenvalue of op op^H = [[p, r], [conj(r), q]].
  const double p = std::norm(op(0, 0)) + std::norm(op(0, 1));
  const double q = std::norm(op(1, 0)) + std::norm(op(1, 1));
  const cdouble r = op(0, 0) * std::conj(op(1, 0)) + op(0, 1) * std::conj(op(1, 1));
  return std::sqrt(0.5 * (p + q) + std::hypot(0.5 * (p - q), std::abs(r)));
}

double weighted_norm(const Mat2& op, double xi, const Params& p) {
  const double w = std::sqrt(p.m() + xi * xi);
  Mat2 b = op;
  b(0, 1) *= w;
  b(1, 0) /= w;
  return spectral_norm(b);
}

double weighted_norm(const Vec2& a, double xi, const Params& p) {
  return std::sqrt((p.m() + xi * xi) * std::norm(a(0)) + std::norm(a(1)));
}

// ---------------------------------------------------------------------------

double critical_frequency(const Params& p) {
  return std::sqrt(2.0 + 2.0 * std::sqrt(1.0 + p.m()));
}

namespace {

double defect_threshold(cdouble lambda) { return 1e-6 * std::max(1.0, std::abs(lambda)); }

}  // namespace

EigenPair eigenpair(double xi, const Params& p) {
  const double xi2 = xi * xi;
  const double det = p.m() + xi2;
  const double disc = xi2 * xi2 - 4.0 * det;
  EigenPair pair{};
  if (disc < 0.0) {
    const double im = 0.5 * std::sqrt(-disc);
    pair.plus = {-0.5 * xi2, im};
    pair.minus = {-0.5 * xi2, -im};
  } else {
    // Larger-magnitude root first; the other from the product of roots.
    pair.minus = -0.5 * (xi2 + std::sqrt(disc));
    pair.plus = det / pair.minus;
  }
  const double gap = std::sqrt(std::abs(disc));
  if (gap <= defect_threshold(pair.plus)) {
    pair.regime = Regime::Critical;
  } else {
    pair.regime = disc < 0.0 ? Regime::Underdamped : Regime::Overdamped;
  }
  return pair;
}

Mat2 mode_propagator(double xi, const Params& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("mode_propagator: t must be >= 0");
  const Mat2 m = symbol_matrix(xi, p);
  const double xi2 = xi * xi;
  const double disc = xi2 * xi2 - 4.0 * (p.m() + xi2);
  const EigenPair pair = eigenpair(xi, p);
  // q^2 = (t delta)^2 with delta = (lambda_+ - lambda_-)/2.
  const double q2 = 0.25 * t * t * disc;

  if (pair.regime == Regime::Critical || std::abs(q2) <= 1.0) {
    // Jordan limit e^{t mu}(I + t N) together with its O(q^2) corrections,
    // N = M - mu I, N^2 = delta^2 I.
    const double mu = -0.5 * xi2;
    Mat2 n = m;
    n(0, 0) -= mu;
    n(1, 1) -= mu;
    double c = 1.0, s = 1.0, term_c = 1.0, term_s = 1.0;
    for (int k = 1; k < 200; ++k) {
      term_c *= q2 / ((2.0 * k - 1.0) * (2.0 * k));
      term_s *= q2 / ((2.0 * k) * (2.0 * k + 1.0));
      c += term_c;
      s += term_s;
      if (std::abs(term_c) <= 1e-18 * std::abs(c) && std::abs(term_s) <= 1e-18 * std::abs(s)) break;
    }
    const double scale = std::exp(t * mu);
    return scale * (c * Mat2::Identity() + (t * s) * n);
  }
  const cdouble ep = std::exp(t * pair.plus);
  const cdouble em = std::exp(t * pair.minus);
  const Mat2 id = Mat2::Identity();
  return (ep * (m - pair.minus * id) - em * (m - pair.plus * id)) / (pair.plus - pair.minus);
}

SpectralState propagate(const SpectralState& z, const Params& p, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("propagate: t must be >= 0");
  return z.map([&](double xi, const Vec2& a) -> Vec2 { return mode_propagator(xi, p, t) * a; });
}

SpectralState apply_shifted_generator(cdouble lambda, const SpectralState& z, const Params& p) {
  return z.map([&](double xi, const Vec2& a) -> Vec2 {
    Mat2 op = -symbol_matrix(xi, p);
    op(0, 0) += lambda;
    op(1, 1) += lambda;
    return op * a;
  });
}

// ---------------------------------------------------------------------------
// Resolvent

void require_off_spectrum(double s, const Params& p) {
  const double r = p.sqrt_m();
  if (std::abs(s - r) < 1e-12 || std::abs(s + r) < 1e-12) {
    char buf[96];
    std::snprintf(buf, sizeof buf, "s = %.17g equals +-sqrt(m)", s);
    throw SpectralPointError(buf);
  }
}

Mat2 symbol_resolvent(double s, double xi, const Params& p) {
  const double xi2 = xi * xi;
  const cdouble is(0.0, s);
  const cdouble det(p.m() + xi2 - s * s, s * xi2);
  if (det == 0.0) throw SpectralPointError("singular mode in resolvent");
  Mat2 inv;
  inv << is + xi2, 1.0, -(p.m() + xi2), is;
  return inv / det;
}

SpectralState apply_symbol_resolvent(double s, const SpectralState& z, const Params& p) {
  require_off_spectrum(s, p);
  return z.map([&](double xi, const Vec2& a) -> Vec2 { return symbol_resolvent(s, xi, p) * a; });
}

namespace {

struct Sample {
  double xi;
  double value;
};

double golden_max(const std::function<double(double)>& f, double lo, double hi, double& arg) {
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = hi - ratio * (hi - lo), d = lo + ratio * (hi - lo);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 200 && (hi - lo) > 1e-14 * std::max(1.0, std::abs(hi)); ++it) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - ratio * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + ratio * (hi - lo);
      fd = f(d);
    }
  }
  arg = fc > fd ? c : d;
  return std::max(fc, fd);
}

}  // namespace

ResolventNorm resolvent_norm(double s, const Params& p, const ResolventSearch& search) {
  require_off_spectrum(s, p);
  auto f = [&](double xi) { return weighted_norm(symbol_resolvent(s, xi, p), xi, p); };

  std::vector<double> xs;
  const double span = search.linear_span * critical_frequency(p);
  const auto n_lin = static_cast<std::size_t>(std::ceil(span / search.linear_step));
  for (std::size_t i = 0; i <= n_lin; ++i) xs.push_back(static_cast<double>(i) * search.linear_step);
  const double lmin = std::log10(search.log_min), lmax = std::log10(search.log_max);
  const auto n_log = static_cast<std::size_t>(std::ceil((lmax - lmin) * search.points_per_decade));
  for (std::size_t i = 0; i <= n_log; ++i) {
    xs.push_back(std::pow(10.0, lmin + (lmax - lmin) * static_cast<double>(i) / n_log));
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  std::vector<Sample> samples(xs.size());
  const auto count = static_cast<long>(xs.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < count; ++i) samples[i] = {xs[i], f(xs[i])};

  // Polish the largest local maxima.
  std::vector<std::size_t> peaks;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const bool left = i == 0 || samples[i].value >= samples[i - 1].value;
    const bool right = i + 1 == samples.size() || samples[i].value >= samples[i + 1].value;
    if (left && right) peaks.push_back(i);
  }
  std::sort(peaks.begin(), peaks.end(),
            [&](std::size_t a, std::size_t b) { return samples[a].value > samples[b].value; });
  if (peaks.size() > static_cast<std::size_t>(search.refine_candidates)) {
    peaks.resize(static_cast<std::size_t>(search.refine_candidates));
  }
  ResolventNorm best{samples.front().value, samples.front().xi};
  for (const auto& sm : samples) {
    if (sm.value > best.norm) best = {sm.value, sm.xi};
  }
  for (std::size_t i : peaks) {
    const double lo = samples[i == 0 ? 0 : i - 1].xi;
    const double hi = samples[std::min(i + 1, samples.size() - 1)].xi;
    if (hi <= lo) continue;
    double arg = samples[i].xi;
    const double val = golden_max(f, lo, hi, arg);
    if (val > best.norm) best = {val, arg};
  }

  // Extend the tail decade by decade until it stops mattering.
  for (double a = search.log_max; a < search.hard_limit; a *= 10.0) {
    double decade_max = 0.0, decade_arg = a;
    for (int i = 1; i <= search.points_per_decade; ++i) {
      const double xi = a * std::pow(10.0, static_cast<double>(i) / search.points_per_decade);
      if (const double val = f(xi); val > decade_max) {
        decade_max = val;
        decade_arg = xi;
      }
    }
    if (decade_max <= best.norm * (1.0 + search.tail_tolerance)) {
      if (decade_max > best.norm) best = {decade_max, decade_arg};
      break;
    }
    best = {decade_max, decade_arg};
  }
  return best;
}

Vec2 worst_mode_vector(double s, double xi, const Params& p) {
  const double w = std::sqrt(p.m() + xi * xi);
  Mat2 b = symbol_resolvent(s, xi, p);
  b(0, 1) *= w;
  b(1, 0) /= w;
  Eigen::SelfAdjointEigenSolver<Mat2> solver(b.adjoint() * b);
  Vec2 v = solver.eigenvectors().col(1);  // eigenvalues ascending
  v(0) /= w;
  return v;
}

ResolventProfile profile_resolvent(std::span<const double> s_values, const Params& p,
                                   const ResolventSearch& search) {
  ResolventProfile profile;
  profile.m = p.m();
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "linear [0, %g*xi_c] step %g; log [%g, %g] %d/decade; golden polish; tail tol %g",
                search.linear_span, search.linear_step, search.log_min, search.log_max,
                search.points_per_decade, search.tail_tolerance);
  profile.xi_grid = buf;
  profile.samples.resize(s_values.size());
  for (std::size_t i = 0; i < s_values.size(); ++i) {
    profile.samples[i] = {s_values[i], resolvent_norm(s_values[i], p, search).norm};
  }
  return profile;
}

std::vector<SpectralCurvePoint> spectral_curves(const Params& p, double xi_max, int n_pts) {
  if (!(xi_max > 0.0)) throw std::invalid_argument("spectral_curves: xi_max must be > 0");
  if (n_pts < 2) throw std::invalid_argument("spectral_curves: need at least two points");
  std::vector<SpectralCurvePoint> out(static_cast<std::size_t>(n_pts));
  for (int i = 0; i < n_pts; ++i) {
    const double xi = xi_max * static_cast<double>(i) / (n_pts - 1);
    out[static_cast<std::size_t>(i)] = {xi, eigenpair(xi, p)};
  }
  return out;
}

}  // namespace kvlab
