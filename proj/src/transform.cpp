#include "kvlab/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace kvlab {

namespace {

// FFTW's planner is not thread-safe; execution with new arrays is.
class PlanCache {
 public:
  static PlanCache& instance() {
    static PlanCache cache;
    return cache;
  }

  fftw_plan dft(std::size_t n, int sign) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(static_cast<long>(n), sign);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_complex(n);
    auto plan = fftw_plan_dft_1d(static_cast<int>(n), buf, buf, sign,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

  // RODFT00 (DST-I) of length n; self-inverse up to 2(n+1).
  fftw_plan dst1(std::size_t n) {
    std::lock_guard lock(mutex_);
    auto key = std::make_pair(static_cast<long>(n), 0);
    if (auto it = plans_.find(key); it != plans_.end()) return it->second;
    auto* buf = fftw_alloc_real(n);
    auto plan = fftw_plan_r2r_1d(static_cast<int>(n), buf, buf, FFTW_RODFT00,
                                 FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(buf);
    plans_.emplace(key, plan);
    return plan;
  }

  PlanCache(const PlanCache&) = delete;
  PlanCache& operator=(const PlanCache&) = delete;

  ~PlanCache() {
    for (auto& [key, plan] : plans_) fftw_destroy_plan(plan);
  }

 private:
  PlanCache() = default;
  std::mutex mutex_;
  std::map<std::pair<long, int>, fftw_plan> plans_;
};

// Unnormalised DST-I: y_k = 2 sum_j x_j sin(pi (j+1)(k+1)/(N+1)), applied to
// real and imaginary parts separately.
Field dst1(std::span<const cdouble> in) {
  const std::size_t n = in.size();
  std::vector<double> re(n), im(n);
  for (std::size_t j = 0; j < n; ++j) {
    re[j] = in[j].real();
    im[j] = in[j].imag();
  }
  auto plan = PlanCache::instance().dst1(n);
  fftw_execute_r2r(plan, re.data(), re.data());
  fftw_execute_r2r(plan, im.data(), im.data());
  Field out(n);
  for (std::size_t k = 0; k < n; ++k) out[k] = {re[k], im[k]};
  return out;
}

void check_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) throw std::invalid_argument(std::string(what) + ": length mismatch");
}

}  // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

void fft_inplace(Field& data, int sign) {
  auto plan = PlanCache::instance().dft(data.size(), sign < 0 ? FFTW_FORWARD : FFTW_BACKWARD);
  auto* ptr = reinterpret_cast<fftw_complex*>(data.data());
  fftw_execute_dft(plan, ptr, ptr);
}

Field circular_convolve(std::span<const cdouble> a, std::span<const cdouble> b) {
  if (a.size() != b.size()) throw std::invalid_argument("circular_convolve: length mismatch");
  Field fa(a.begin(), a.end());
  Field fb(b.begin(), b.end());
  fft_inplace(fa, -1);
  fft_inplace(fb, -1);
  const double scale = 1.0 / static_cast<double>(a.size());
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k] * scale;
  fft_inplace(fa, +1);
  return fa;
}

Field forward_transform(const Grid& grid, std::span<const cdouble> samples) {
  const std::size_t n = grid.size();
  check_length(samples.size(), n, "forward_transform");
  const double h = grid.spacing();
  if (grid.is_halfline()) {
    Field coeffs = dst1(samples.subspan(1));
    const double scale = std::sqrt(h / (2.0 * static_cast<double>(n)));
    for (auto& c : coeffs) c *= scale;
    return coeffs;
  }
  Field coeffs(samples.begin(), samples.end());
  fft_inplace(coeffs, -1);
  // x_0 = -L/2 contributes exp(i xi_k L/2) = (-1)^k.
  const double scale = h / std::sqrt(grid.length());
  for (std::size_t k = 0; k < n; ++k) coeffs[k] *= (k % 2 == 0 ? scale : -scale);
  return coeffs;
}

Field inverse_transform(const Grid& grid, std::span<const cdouble> coeffs) {
  const std::size_t n = grid.size();
  check_length(coeffs.size(), grid.mode_count(), "inverse_transform");
  if (grid.is_halfline()) {
    Field interior = dst1(coeffs);
    const double scale = 1.0 / std::sqrt(2.0 * grid.length());
    Field samples(n, cdouble{});
    for (std::size_t j = 1; j < n; ++j) samples[j] = interior[j - 1] * scale;
    return samples;
  }
  Field samples(n);
  const double scale = 1.0 / std::sqrt(grid.length());
  for (std::size_t k = 0; k < n; ++k) samples[k] = coeffs[k] * (k % 2 == 0 ? scale : -scale);
  fft_inplace(samples, +1);
  return samples;
}

Field spectral_derivative(const Grid& grid, std::span<const cdouble> samples, int order) {
  if (order < 0) throw std::invalid_argument("spectral_derivative: negative order");
  if (grid.is_halfline() && order % 2 != 0) {
    throw std::invalid_argument("spectral_derivative: sine basis supports even orders only");
  }
  Field coeffs = forward_transform(grid, samples);
  const std::size_t nyquist = grid.size() / 2;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const double xi = grid.frequency(k);
    if (!grid.is_halfline() && k == nyquist && order % 2 == 1) {
      coeffs[k] = 0.0;
      continue;
    }
    cdouble factor = 1.0;
    if (grid.is_halfline()) {
      factor = std::pow(-xi * xi, order / 2);
    } else {
      factor = std::pow(cdouble(0.0, xi), order);
    }
    coeffs[k] *= factor;
  }
  return inverse_transform(grid, coeffs);
}

}  // namespace kvlab
