#pragma once

#include <span>

#include "kvlab/grid.hpp"
#include "kvlab/types.hpp"

namespace kvlab {

// Spectral coefficients are scaled so that sum |a_k|^2 = h * sum |u_j|^2.
// Line:       a_k = (h / sqrt(L)) * sum_j u_j exp(-i xi_k x_j)  ~ f^(xi_k) / sqrt(L)
// Half-line:  a_k = sqrt(2h/n) * sum_{j>=1} u_j sin(pi j k / n) ~ sqrt(2/L) F_s(xi_k)

Field forward_transform(const Grid& grid, std::span<const cdouble> samples);
Field inverse_transform(const Grid& grid, std::span<const cdouble> coeffs);

/// d^order/dx^order of the grid's spectral interpolant. On the line the
/// Nyquist mode is dropped for odd orders. Half-line: even orders only.
Field spectral_derivative(const Grid& grid, std::span<const cdouble> samples, int order);

/// Unnormalised in-place DFT of length n (power of two); sign = -1 forward.
void fft_inplace(Field& data, int sign);

/// c_i = sum_j a_{(i-j) mod n} b_j.
Field circular_convolve(std::span<const cdouble> a, std::span<const cdouble> b);

bool is_power_of_two(std::size_t n) noexcept;

}  // namespace kvlab
