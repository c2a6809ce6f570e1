#pragma once

#include <span>
#include <string>
#include <vector>

#include "kvlab/model.hpp"

namespace kvlab {

/// Fourier symbol of the generator, M(xi) = [[0, 1], [-(m + xi^2), -xi^2]].
Mat2 symbol_matrix(double xi, const Params& p);

/// diag(sqrt(m + xi^2), 1): the per-mode Euclidean norm of W a is the X norm.
Mat2 weight_matrix(double xi, const Params& p);

/// ||W B W^{-1}||_2 for a per-mode operator B.
double weighted_norm(const Mat2& op, double xi, const Params& p);
double weighted_norm(const Vec2& a, double xi, const Params& p);

/// Largest singular value of a 2x2 complex matrix.
double spectral_norm(const Mat2& op);

enum class Regime { Underdamped, Critical, Overdamped };

struct EigenPair {
  cdouble plus;   // (-xi^2 + sqrt(disc)) / 2
  cdouble minus;  // (-xi^2 - sqrt(disc)) / 2
  Regime regime;
};

EigenPair eigenpair(double xi, const Params& p);

/// xi_c with xi_c^4 = 4 (m + xi_c^2), where the two roots coincide.
double critical_frequency(const Params& p);

/// exp(t M(xi)), t >= 0.
Mat2 mode_propagator(double xi, const Params& p, double t);

/// Discrete semigroup T(t), mode by mode.
SpectralState propagate(const SpectralState& z, const Params& p, double t);

/// Applies (lambda I - M(xi)) to every mode.
SpectralState apply_shifted_generator(cdouble lambda, const SpectralState& z, const Params& p);

/// (i s I - M(xi))^{-1}; throws SpectralPointError when singular.
Mat2 symbol_resolvent(double s, double xi, const Params& p);
SpectralState apply_symbol_resolvent(double s, const SpectralState& z, const Params& p);

/// Rejects |s -+ sqrt(m)| < 1e-12.
void require_off_spectrum(double s, const Params& p);

struct ResolventSearch {
  double linear_step = 1e-3;        // on [0, linear_span * xi_c]
  double linear_span = 4.0;
  double log_min = 1e-8;
  double log_max = 1e4;
  int points_per_decade = 100;
  double tail_tolerance = 1e-6;     // stop extending once a decade adds less
  double hard_limit = 1e12;
  int refine_candidates = 6;
};

struct ResolventNorm {
  double norm;
  double xi_star;  // maximising frequency
};

/// sup over xi of ||W (is - M)^{-1} W^{-1}||, i.e. ||R(is, A)|| on X.
ResolventNorm resolvent_norm(double s, const Params& p, const ResolventSearch& search = {});

/// Unit-X-norm vector attaining the resolvent norm at the mode xi.
Vec2 worst_mode_vector(double s, double xi, const Params& p);

struct ResolventSample {
  double s;
  double norm;
};

struct ResolventProfile {
  double m;
  std::string xi_grid;
  std::vector<ResolventSample> samples;
};

ResolventProfile profile_resolvent(std::span<const double> s_values, const Params& p,
                                   const ResolventSearch& search = {});

struct SpectralCurvePoint {
  double xi;
  EigenPair pair;
};

/// Eigenvalue branches on xi in [0, xi_max], n_pts samples.
std::vector<SpectralCurvePoint> spectral_curves(const Params& p, double xi_max, int n_pts);

}  // namespace kvlab
