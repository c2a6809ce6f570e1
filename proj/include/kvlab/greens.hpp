#pragma once

#include <vector>

#include "kvlab/model.hpp"

namespace kvlab {

/// lambda_s = (m - s^2)/(1 + i s), never on (-inf, 0] for |s| != sqrt(m).
struct LambdaS {
  double s;
  cdouble value;
  cdouble sqrt_value;  // principal branch, Re > 0
};

LambdaS lambda_of_s(double s, const Params& p);

/// min(1/sqrt(2), sin(arctan(sqrt(m))/2)), the lower bound on cos(arg lambda_s / 2).
double lemma_constant(const Params& p);

/// G_s(x) = exp(-sqrt(lambda_s)|x|) / (2 sqrt(lambda_s)).
cdouble green_kernel(const LambdaS& lam, double x);
/// Q_s = G_s': (1/2) e^{sqrt(lambda) x} for x < 0, -(1/2) e^{-sqrt(lambda) x} for x > 0.
/// Returns the mean of the one-sided limits at x = 0.
cdouble q_kernel(const LambdaS& lam, double x);

double g_l1_norm_closed(double s, const Params& p);
double q_l1_norm_closed(double s, const Params& p);

/// Gauss-Kronrod evaluation of ||G_s||_1 and ||Q_s||_1 with analytic tails.
double g_l1_norm_quadrature(double s, const Params& p);
double q_l1_norm_quadrature(double s, const Params& p);

/// int_{|x| > distance} |G_s|.
double kernel_tail_mass(const LambdaS& lam, double distance);

struct KernelSamples {
  double s;
  Field G;
  Field Q;
};

/// Closed-form kernels at the grid nodes.
KernelSamples sample_kernels(const LambdaS& lam, const Grid& grid);

enum class ConvolutionPath {
  AnalyticSymbol,  // multiply by G^(xi) = 1/(xi^2 + lambda_s)
  SampledKernel,   // discrete convolution with sampled G_s, Q_s
};

/// Discrete convolution weights for the kernel sampled at offsets d h,
/// d in [-n/2, n/2), in wrap order. The kink (G) or jump (Q) at the origin
/// is handled with Gregory end corrections on each side.
Field convolution_weights(const LambdaS& lam, const Grid& grid, bool derivative_kernel);

/// Endpoint weights of the Gregory rule with `order` difference corrections:
/// int_0^inf f ~ h sum_j w_j f(j h), w_j = 1 beyond the returned prefix.
std::vector<double> gregory_weights(int order);

struct ResolventSolution {
  State z;   // R(is, A) zhat
  Field du;  // u' from the Q_s formula
};

/// Line resolvent through the Green's-function formulas.
ResolventSolution resolvent_apply_line(double s, const State& zhat, const Params& p,
                                       ConvolutionPath path = ConvolutionPath::AnalyticSymbol);

/// Dirichlet half-line resolvent: free-space solution minus the boundary term
/// eta_s G_s(x), data extended by zero to x < 0.
State resolvent_apply_halfline(double s, const State& zhat, const Params& p,
                               ConvolutionPath path = ConvolutionPath::AnalyticSymbol);

}  // namespace kvlab
