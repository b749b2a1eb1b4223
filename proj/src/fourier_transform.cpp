#include "fourier_transform.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

namespace aparareal::detail {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

fftw_complex* as_fftw(std::complex<double>* p) {
  return reinterpret_cast<fftw_complex*>(p);
}

// Per-thread scratch so concurrent transforms never share buffers.
std::vector<std::complex<double>>& half_buffer(std::size_t n) {
  thread_local std::vector<std::complex<double>> buffer;
  buffer.resize(n / 2 + 1);
  return buffer;
}

}  // namespace

FourierTransform::FourierTransform(std::size_t n) : n_(n) {
  const int len = static_cast<int>(n);
  std::vector<double> real(n);
  std::vector<std::complex<double>> half(n / 2 + 1);
  std::vector<std::complex<double>> full_in(n), full_out(n);
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  r2c_ = fftw_plan_dft_r2c_1d(len, real.data(), as_fftw(half.data()), flags);
  c2r_ = fftw_plan_dft_c2r_1d(len, as_fftw(half.data()), real.data(), flags);
  c2c_backward_ = fftw_plan_dft_1d(len, as_fftw(full_in.data()),
                                   as_fftw(full_out.data()), FFTW_BACKWARD,
                                   flags);
}

FourierTransform::~FourierTransform() {
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(r2c_);
  fftw_destroy_plan(c2r_);
  fftw_destroy_plan(c2c_backward_);
}

const FourierTransform& FourierTransform::for_size(std::size_t n) {
  std::lock_guard lock(planner_mutex());
  // Declared after the mutex is first used so it is destroyed before it.
  static std::map<std::size_t, std::unique_ptr<FourierTransform>> cache;
  auto& slot = cache[n];
  if (!slot) slot.reset(new FourierTransform(n));
  return *slot;
}

void FourierTransform::forward(std::span<const double> samples,
                               std::span<std::complex<double>> coeffs) const {
  auto& half = half_buffer(n_);
  // Out-of-place r2c preserves its input.
  fftw_execute_dft_r2c(r2c_, const_cast<double*>(samples.data()),
                       as_fftw(half.data()));
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t j = 0; j <= n_ / 2; ++j) coeffs[j] = half[j] * scale;
  for (std::size_t j = n_ / 2 + 1; j < n_; ++j) {
    coeffs[j] = std::conj(coeffs[n_ - j]);
  }
}

void FourierTransform::inverse(std::span<const std::complex<double>> coeffs,
                               std::span<double> samples) const {
  auto& half = half_buffer(n_);
  // c2r destroys its input, so it always runs on the scratch copy.
  for (std::size_t j = 0; j <= n_ / 2; ++j) half[j] = coeffs[j];
  fftw_execute_dft_c2r(c2r_, as_fftw(half.data()), samples.data());
}

void FourierTransform::inverse_complex(
    std::span<const std::complex<double>> coeffs,
    std::span<std::complex<double>> samples) const {
  fftw_execute_dft(c2c_backward_,
                   as_fftw(const_cast<std::complex<double>*>(coeffs.data())),
                   as_fftw(samples.data()));
}

}  // namespace aparareal::detail
