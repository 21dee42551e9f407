#include "ncwnnm/fft2d.hpp"

#include <cstring>
#include <mutex>

#include <fftw3.h>

#include "ncwnnm/errors.hpp"

namespace ncw {
namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct RealBuffer {
  explicit RealBuffer(std::size_t n) : ptr(fftw_alloc_real(n)) {}
  ~RealBuffer() { fftw_free(ptr); }
  double* ptr;
};

struct ComplexBuffer {
  explicit ComplexBuffer(std::size_t n) : ptr(fftw_alloc_complex(n)) {}
  ~ComplexBuffer() { fftw_free(ptr); }
  fftw_complex* ptr;
};

}  // namespace

struct Fft2d::Plans {
  fftw_plan r2c = nullptr;
  fftw_plan c2r = nullptr;
  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (r2c) fftw_destroy_plan(r2c);
    if (c2r) fftw_destroy_plan(c2r);
  }
};

Fft2d::Fft2d(int height, int width) : height_(height), width_(width), plans_(std::make_unique<Plans>()) {
  if (height < 1 || width < 1) throw DataError("FFT shape must be positive");
  RealBuffer real(static_cast<std::size_t>(height) * width);
  ComplexBuffer spec(spectrum_size());
  std::lock_guard lock(planner_mutex());
  // FFTW_ESTIMATE picks the plan without timing, so results are reproducible.
  plans_->r2c = fftw_plan_dft_r2c_2d(height, width, real.ptr, spec.ptr, FFTW_ESTIMATE);
  plans_->c2r = fftw_plan_dft_c2r_2d(height, width, spec.ptr, real.ptr, FFTW_ESTIMATE);
  if (!plans_->r2c || !plans_->c2r) throw NumericalError("FFTW planning failed");
}

Fft2d::~Fft2d() = default;
Fft2d::Fft2d(Fft2d&&) noexcept = default;
Fft2d& Fft2d::operator=(Fft2d&&) noexcept = default;

std::size_t Fft2d::spectrum_size() const noexcept {
  return static_cast<std::size_t>(height_) * static_cast<std::size_t>(width_ / 2 + 1);
}

Fft2d::Spectrum Fft2d::forward(const Image& img) const {
  if (img.height() != height_ || img.width() != width_) throw DataError("FFT input has the wrong shape");
  RealBuffer real(img.size());
  ComplexBuffer spec(spectrum_size());
  std::memcpy(real.ptr, img.pixels().data(), img.size() * sizeof(double));
  fftw_execute_dft_r2c(plans_->r2c, real.ptr, spec.ptr);
  Spectrum out(spectrum_size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {spec.ptr[i][0], spec.ptr[i][1]};
  return out;
}

Image Fft2d::inverse(const Spectrum& spectrum) const {
  if (spectrum.size() != spectrum_size()) throw DataError("spectrum has the wrong size");
  ComplexBuffer spec(spectrum_size());
  for (std::size_t i = 0; i < spectrum.size(); ++i) {
    spec.ptr[i][0] = spectrum[i].real();
    spec.ptr[i][1] = spectrum[i].imag();
  }
  RealBuffer real(static_cast<std::size_t>(height_) * width_);
  // c2r destroys its input; `spec` is a scratch copy.
  fftw_execute_dft_c2r(plans_->c2r, spec.ptr, real.ptr);
  Image out(height_, width_);
  const double scale = 1.0 / (static_cast<double>(height_) * width_);
  auto px = out.pixels();
  for (std::size_t i = 0; i < px.size(); ++i) px[i] = real.ptr[i] * scale;
  return out;
}

}  // namespace ncw
