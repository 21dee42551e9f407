#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "ncwnnm/image.hpp"

namespace ncw {

/// Real 2-D DFT of a fixed shape backed by FFTW. Spectra use FFTW's
/// half-complex layout: height x (width / 2 + 1), row-major. The inverse is
/// normalised, so inverse(forward(x)) == x.
///
/// Plans are created once in the constructor (not thread-safe in FFTW);
/// transforms allocate their own buffers and may run concurrently.
class Fft2d {
 public:
  using Spectrum = std::vector<std::complex<double>>;

  Fft2d(int height, int width);
  ~Fft2d();
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;
  Fft2d(Fft2d&&) noexcept;
  Fft2d& operator=(Fft2d&&) noexcept;

  int height() const noexcept { return height_; }
  int width() const noexcept { return width_; }
  std::size_t spectrum_size() const noexcept;

  Spectrum forward(const Image& img) const;
  Image inverse(const Spectrum& spectrum) const;

 private:
  struct Plans;
  int height_;
  int width_;
  std::unique_ptr<Plans> plans_;
};

}  // namespace ncw
