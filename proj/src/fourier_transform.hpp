#pragma once

#include <complex>
#include <cstddef>
#include <span>

#include <fftw3.h>

namespace aparareal::detail {

/// Cached FFTW plans for one transform length. Plans are created once under a
/// lock and executed through the new-array interface, which is thread-safe.
class FourierTransform {
 public:
  static const FourierTransform& for_size(std::size_t n);

  FourierTransform(const FourierTransform&) = delete;
  FourierTransform& operator=(const FourierTransform&) = delete;
  ~FourierTransform();

  std::size_t size() const noexcept { return n_; }

  /// Real samples to the full FFT-ordered spectrum, divided by n. The
  /// negative half is filled by conjugation, so the output is exactly
  /// conjugate-symmetric.
  void forward(std::span<const double> samples,
               std::span<std::complex<double>> coeffs) const;

  /// Synthesis from the non-negative half of a spectrum assumed to be
  /// conjugate-symmetric.
  void inverse(std::span<const std::complex<double>> coeffs,
               std::span<double> samples) const;

  /// Unnormalized synthesis with no symmetry assumption.
  void inverse_complex(std::span<const std::complex<double>> coeffs,
                       std::span<std::complex<double>> samples) const;

 private:
  explicit FourierTransform(std::size_t n);

  std::size_t n_;
  fftw_plan r2c_ = nullptr;
  fftw_plan c2r_ = nullptr;
  fftw_plan c2c_backward_ = nullptr;
};

}  // namespace aparareal::detail
