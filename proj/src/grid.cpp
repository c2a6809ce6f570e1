#include "kvlab/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "kvlab/transform.hpp"

namespace kvlab {

Grid::Grid(double length, std::size_t n, Boundary boundary)
    : length_(length), n_(n), boundary_(boundary) {
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw std::invalid_argument("grid length must be positive and finite");
  }
  if (n < 4 || !is_power_of_two(n)) {
    throw std::invalid_argument("grid size must be a power of two >= 4");
  }
}

double Grid::x(std::size_t j) const noexcept {
  const double h = spacing();
  if (is_halfline()) return static_cast<double>(j) * h;
  return -0.5 * length_ + static_cast<double>(j) * h;
}

std::vector<double> Grid::nodes() const {
  std::vector<double> xs(n_);
  for (std::size_t j = 0; j < n_; ++j) xs[j] = x(j);
  return xs;
}

std::size_t Grid::mode_count() const noexcept { return is_halfline() ? n_ - 1 : n_; }

double Grid::frequency_spacing() const noexcept {
  return (is_halfline() ? 1.0 : 2.0) * std::numbers::pi / length_;
}

double Grid::frequency(std::size_t k) const noexcept {
  const double dxi = frequency_spacing();
  if (is_halfline()) return static_cast<double>(k + 1) * dxi;
  const auto signed_k = k < n_ / 2 ? static_cast<double>(k)
                                   : static_cast<double>(k) - static_cast<double>(n_);
  return signed_k * dxi;
}

std::vector<double> Grid::frequencies() const {
  std::vector<double> xi(mode_count());
  for (std::size_t k = 0; k < xi.size(); ++k) xi[k] = frequency(k);
  return xi;
}

}  // namespace kvlab
