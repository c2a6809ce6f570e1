#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace kvlab {

using cdouble = std::complex<double>;
using Field = std::vector<cdouble>;
using Vec2 = Eigen::Vector2cd;
using Mat2 = Eigen::Matrix2cd;

/// Raised when an operation is asked to work at s = ±√m, where is ∈ σ(A).
class SpectralPointError : public std::domain_error {
 public:
  explicit SpectralPointError(const std::string& what)
      : std::domain_error("spectral point on iR: " + what) {}
};

/// The periodic torus is too short for the Green's kernel at this s.
class KernelTailError : public std::runtime_error {
 public:
  KernelTailError(const std::string& what, double tail_mass)
      : std::runtime_error(what), tail_mass_(tail_mass) {}
  double tail_mass() const noexcept { return tail_mass_; }

 private:
  double tail_mass_;
};

}  // namespace kvlab
