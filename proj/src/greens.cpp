#include "kvlab/greens.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "kvlab/symbol.hpp"
#include "kvlab/transform.hpp"

namespace kvlab {

namespace {

constexpr int kGregoryOrder = 8;
constexpr double kTailThreshold = 1e-12;

void require_decayed_kernel(const LambdaS& lam, double distance) {
  const double decay = std::exp(-lam.sqrt_value.real() * distance);
  if (decay > kTailThreshold) {
    const double mass = kernel_tail_mass(lam, distance);
    char buf[192];
    std::snprintf(buf, sizeof buf,
                  "Green's kernel at s = %g has not decayed at distance %g "
                  "(|G(d)|/|G(0)| = %.3e, tail mass %.3e); enlarge L",
                  lam.s, distance, decay, mass);
    throw KernelTailError(buf, mass);
  }
}

// Integrates a smooth decaying profile on [0, x_max] panel by panel.
template <class F>
double integrate_panels(F f, double x_max, double panel) {
  using boost::math::quadrature::gauss_kronrod;
  double total = 0.0;
  for (double a = 0.0; a < x_max; a += panel) {
    const double b = std::min(a + panel, x_max);
    total += gauss_kronrod<double, 15>::integrate(f, a, b, 8, 1e-13);
  }
  return total;
}

}  // namespace

LambdaS lambda_of_s(double s, const Params& p) {
  require_off_spectrum(s, p);
  const cdouble value = (p.m() - s * s) / cdouble(1.0, s);
  return {s, value, std::sqrt(value)};
}

double lemma_constant(const Params& p) {
  return std::min(1.0 / std::sqrt(2.0), std::sin(0.5 * std::atan(p.sqrt_m())));
}

cdouble green_kernel(const LambdaS& lam, double x) {
  return std::exp(-lam.sqrt_value * std::abs(x)) / (2.0 * lam.sqrt_value);
}

cdouble q_kernel(const LambdaS& lam, double x) {
  if (x == 0.0) return 0.0;
  if (x < 0.0) return 0.5 * std::exp(lam.sqrt_value * x);
  return -0.5 * std::exp(-lam.sqrt_value * x);
}

double g_l1_norm_closed(double s, const Params& p) {
  const LambdaS lam = lambda_of_s(s, p);
  return 1.0 / (std::abs(lam.value) * std::cos(0.5 * std::arg(lam.value)));
}

double q_l1_norm_closed(double s, const Params& p) {
  const LambdaS lam = lambda_of_s(s, p);
  return 1.0 / (std::sqrt(std::abs(lam.value)) * std::cos(0.5 * std::arg(lam.value)));
}

double kernel_tail_mass(const LambdaS& lam, double distance) {
  const double r = lam.sqrt_value.real();
  return std::exp(-r * distance) / (std::abs(lam.sqrt_value) * r);
}

namespace {

// 2 int_0^inf |k(x)| dx for an even-magnitude kernel |k(x)| = c e^{-r|x|}.
template <class K>
double symmetric_l1(const LambdaS& lam, K kernel) {
  const double r = lam.sqrt_value.real();
  // e^{-r X}/r < 1e-14
  const double x_max = std::max(0.0, (std::log(1e14) - std::log(r)) / r);
  auto f = [&](double x) { return std::abs(kernel(x)); };
  const double body = integrate_panels(f, x_max, 1.0 / r);
  const double tail = std::abs(kernel(x_max)) / r;
  return 2.0 * (body + tail);
}

}  // namespace

double g_l1_norm_quadrature(double s, const Params& p) {
  const LambdaS lam = lambda_of_s(s, p);
  return symmetric_l1(lam, [&](double x) { return green_kernel(lam, x); });
}

double q_l1_norm_quadrature(double s, const Params& p) {
  const LambdaS lam = lambda_of_s(s, p);
  return symmetric_l1(lam, [&](double x) { return q_kernel(lam, x == 0.0 ? 1e-300 : x); });
}

KernelSamples sample_kernels(const LambdaS& lam, const Grid& grid) {
  KernelSamples out{lam.s, Field(grid.size()), Field(grid.size())};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    out.G[j] = green_kernel(lam, grid.x(j));
    out.Q[j] = q_kernel(lam, grid.x(j));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampled-kernel convolution

std::vector<double> gregory_weights(int order) {
  // Gregory coefficients from x / log(1 + x) = sum G_n x^n.
  std::vector<double> g(static_cast<std::size_t>(order) + 2, 0.0);
  g[0] = 1.0;
  for (std::size_t n = 1; n < g.size(); ++n) {
    double acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      acc += (k % 2 == 1 ? 1.0 : -1.0) * g[n - k] / static_cast<double>(k + 1);
    }
    g[n] = acc;
  }
  // int_0^inf f ~ h [sum_{j>=0} f_j - f_0/2] - h sum_k G_{k+1} Delta^k f_0
  std::vector<double> w(static_cast<std::size_t>(order) + 1, 1.0);
  w[0] = 0.5;
  for (int k = 1; k <= order; ++k) {
    double binom = 1.0;  // C(k, j)
    for (int j = 0; j <= k; ++j) {
      const double sign = (k - j) % 2 == 0 ? 1.0 : -1.0;
      w[static_cast<std::size_t>(j)] -= g[static_cast<std::size_t>(k) + 1] * sign * binom;
      binom = binom * (k - j) / (j + 1);
    }
  }
  return w;
}

Field convolution_weights(const LambdaS& lam, const Grid& grid, bool derivative_kernel) {
  static const std::vector<double> corr = gregory_weights(kGregoryOrder);
  const std::size_t n = grid.size();
  const double h = grid.spacing();
  const auto half = static_cast<long>(n / 2);
  auto weight = [&](long d) {
    const auto ad = static_cast<std::size_t>(std::abs(d));
    return ad < corr.size() ? corr[ad] : 1.0;
  };
  Field k(n);
  for (long d = -half; d < half; ++d) {
    const double x = static_cast<double>(d) * h;
    cdouble value;
    if (d == 0) {
      // Both one-sided rules meet at the origin.
      value = derivative_kernel ? cdouble(0.0)
                                : 2.0 * weight(0) * green_kernel(lam, 0.0);
    } else {
      value = weight(d) * (derivative_kernel ? q_kernel(lam, x) : green_kernel(lam, x));
    }
    k[static_cast<std::size_t>((d + static_cast<long>(n)) % static_cast<long>(n))] = h * value;
  }
  return k;
}

namespace {

// (kernel * f) evaluated on a periodic-line grid, either path.
Field convolve(const LambdaS& lam, const Grid& grid, const Field& f, bool derivative_kernel,
               ConvolutionPath path) {
  if (path == ConvolutionPath::SampledKernel) {
    return circular_convolve(convolution_weights(lam, grid, derivative_kernel), f);
  }
  Field coeffs = forward_transform(grid, f);
  const std::size_t nyquist = grid.size() / 2;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double xi = grid.frequency(k);
    const cdouble symbol = 1.0 / (xi * xi + lam.value);
    if (derivative_kernel) {
      coeffs[k] *= k == nyquist ? cdouble(0.0) : cdouble(0.0, xi) * symbol;
    } else {
      coeffs[k] *= symbol;
    }
  }
  return inverse_transform(grid, coeffs);
}

}  // namespace

ResolventSolution resolvent_apply_line(double s, const State& zhat, const Params& p,
                                       ConvolutionPath path) {
  const Grid& grid = zhat.grid();
  if (grid.is_halfline()) throw std::invalid_argument("resolvent_apply_line: needs a line grid");
  const LambdaS lam = lambda_of_s(s, p);
  require_decayed_kernel(lam, 0.5 * grid.length());

  const Field& uh = zhat.u();
  const Field& vh = zhat.v();
  const Field gu = convolve(lam, grid, uh, false, path);
  const Field gv = convolve(lam, grid, vh, false, path);
  const Field qu = convolve(lam, grid, uh, true, path);
  const Field qv = convolve(lam, grid, vh, true, path);
  const Field duh = spectral_derivative(grid, uh, 1);

  const cdouble is(0.0, s);
  const cdouble denom = 1.0 + is;
  const cdouble shift = is - lam.value;
  const cdouble cross = s * s + is * lam.value;
  const std::size_t n = grid.size();
  Field u(n), v(n), du(n);
  for (std::size_t j = 0; j < n; ++j) {
    u[j] = (gv[j] + shift * gu[j] + uh[j]) / denom;
    v[j] = (is * gv[j] - cross * gu[j] - uh[j]) / denom;
    du[j] = (qv[j] + shift * qu[j] + duh[j]) / denom;
  }
  return {State(grid, std::move(u), std::move(v)), std::move(du)};
}

State resolvent_apply_halfline(double s, const State& zhat, const Params& p,
                               ConvolutionPath path) {
  const Grid& grid = zhat.grid();
  if (!grid.is_halfline()) throw std::invalid_argument("resolvent_apply_halfline: needs a half-line grid");
  const LambdaS lam = lambda_of_s(s, p);
  require_decayed_kernel(lam, 0.5 * grid.length());

  // Zero extension onto [-L, L), nodes x = -L + j h.
  const std::size_t n = grid.size();
  const Grid ext(2.0 * grid.length(), 2 * n, Boundary::PeriodicLine);
  Field ue(2 * n), ve(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    ue[n + j] = zhat.u()[j];
    ve[n + j] = zhat.v()[j];
  }
  const Field gu = convolve(lam, ext, ue, false, path);
  const Field gv = convolve(lam, ext, ve, false, path);

  const cdouble is(0.0, s);
  const cdouble denom = 1.0 + is;
  const cdouble shift = is - lam.value;
  const cdouble cross = s * s + is * lam.value;
  const cdouble eta = 2.0 * lam.sqrt_value * (gv[n] + shift * gu[n]);

  Field u(n), v(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cdouble g = green_kernel(lam, grid.x(j));
    const cdouble uhat = zhat.u()[j];
    u[j] = (gv[n + j] + shift * gu[n + j] + uhat - eta * g) / denom;
    v[j] = (is * gv[n + j] - cross * gu[n + j] - uhat - is * eta * g) / denom;
  }
  return State(grid, std::move(u), std::move(v));
}

}  // namespace kvlab
