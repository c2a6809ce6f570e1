#pragma once

#include <cstddef>
#include <vector>

namespace kvlab {

enum class Boundary { PeriodicLine, DirichletHalfline };

/// Uniform sample grid standing in for R (periodic torus of length L,
/// nodes x_j = -L/2 + j h) or for (0, inf) (nodes x_j = j h on [0, L),
/// with u(0) = u(L) = 0 imposed by the sine basis).
class Grid {
 public:
  Grid(double length, std::size_t n, Boundary boundary);

  double length() const noexcept { return length_; }
  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return length_ / static_cast<double>(n_); }
  Boundary boundary() const noexcept { return boundary_; }
  bool is_halfline() const noexcept { return boundary_ == Boundary::DirichletHalfline; }

  double x(std::size_t j) const noexcept;
  std::vector<double> nodes() const;

  /// n modes on the line (FFT order), n-1 sine modes on the half-line.
  std::size_t mode_count() const noexcept;
  double frequency(std::size_t k) const noexcept;
  std::vector<double> frequencies() const;
  double frequency_spacing() const noexcept;

  bool operator==(const Grid&) const = default;

 private:
  double length_;
  std::size_t n_;
  Boundary boundary_;
};

}  // namespace kvlab
