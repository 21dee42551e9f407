#include "ncwnnm/operators.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/QR>

#include "ncwnnm/errors.hpp"
#include "ncwnnm/random.hpp"

namespace ncw {

// ---------------------------------------------------------------- kernels ---

Eigen::MatrixXd gaussian_kernel(int size, double sigma) {
  if (size < 1) throw ParameterError("kernel size must be positive");
  if (!(sigma > 0.0)) throw ParameterError("Gaussian sigma must be positive");
  const double half = (size - 1) / 2.0;
  Eigen::MatrixXd k(size, size);
  for (int r = 0; r < size; ++r) {
    for (int c = 0; c < size; ++c) {
      const double y = r - half;
      const double x = c - half;
      k(r, c) = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
    }
  }
  const double cutoff = std::numeric_limits<double>::epsilon() * k.maxCoeff();
  k = (k.array() < cutoff).select(0.0, k);
  return k / k.sum();
}

Eigen::MatrixXd uniform_kernel(int size) {
  if (size < 1) throw ParameterError("kernel size must be positive");
  return Eigen::MatrixXd::Constant(size, size, 1.0 / (static_cast<double>(size) * size));
}

// ------------------------------------------------------------------- blur ---

BlurOperator::BlurOperator(Eigen::MatrixXd kernel, int height, int width)
    : kernel_(std::move(kernel)), fft_(std::make_shared<const Fft2d>(height, width)) {
  if (kernel_.size() == 0) throw ParameterError("empty blur kernel");
  if (!kernel_.allFinite()) throw ParameterError("blur kernel has non-finite entries");
  if (std::abs(kernel_.sum() - 1.0) > 1e-12) throw ParameterError("blur kernel must sum to 1");

  // Point spread function wrapped onto the image torus with the kernel centre
  // at the origin; kernels larger than the image fold onto themselves.
  Image psf(height, width);
  const int cr = static_cast<int>(kernel_.rows()) / 2;
  const int cc = static_cast<int>(kernel_.cols()) / 2;
  for (int r = 0; r < kernel_.rows(); ++r) {
    for (int c = 0; c < kernel_.cols(); ++c) {
      const int pr = ((r - cr) % height + height) % height;
      const int pc = ((c - cc) % width + width) % width;
      psf(pr, pc) += kernel_(r, c);
    }
  }
  transfer_ = fft_->forward(psf);
}

Image BlurOperator::apply(const Image& x) const {
  auto spec = fft_->forward(x);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= transfer_[i];
  return fft_->inverse(spec);
}

Image BlurOperator::adjoint(const Image& y) const {
  auto spec = fft_->forward(y);
  for (std::size_t i = 0; i < spec.size(); ++i) spec[i] *= std::conj(transfer_[i]);
  return fft_->inverse(spec);
}

Image BlurOperator::solve(const Image& y, const Image& z_plus_c, double rho) const {
  const auto ys = fft_->forward(y);
  auto spec = fft_->forward(z_plus_c);
  for (std::size_t i = 0; i < spec.size(); ++i) {
    const auto h = transfer_[i];
    spec[i] = (std::conj(h) * ys[i] + rho * spec[i]) / (std::norm(h) + rho);
  }
  return fft_->inverse(spec);
}

// ------------------------------------------------------------------- mask ---

MaskOperator::MaskOperator(int height, int width, std::vector<std::uint8_t> observed)
    : height_(height), width_(width), observed_(std::move(observed)) {
  if (height < 1 || width < 1) throw DataError("mask shape must be positive");
  if (observed_.size() != static_cast<std::size_t>(height) * width) throw DataError("mask size does not match shape");
  for (auto& v : observed_) v = v ? 1 : 0;
  if (observed_count() == 0) throw ParameterError("mask must observe at least one pixel");
}

MaskOperator MaskOperator::random(int height, int width, double density, std::uint64_t seed) {
  if (!(density > 0.0 && density <= 1.0)) throw ParameterError("mask density must lie in (0, 1]");
  const std::size_t n = static_cast<std::size_t>(height) * static_cast<std::size_t>(width);
  const auto keep = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(density * static_cast<double>(n))));
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < keep; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(order[i], order[j]);
  }
  std::vector<std::uint8_t> observed(n, 0);
  for (std::size_t i = 0; i < keep; ++i) observed[order[i]] = 1;
  return MaskOperator(height, width, std::move(observed));
}

std::size_t MaskOperator::observed_count() const noexcept {
  return static_cast<std::size_t>(std::count(observed_.begin(), observed_.end(), std::uint8_t{1}));
}

Image MaskOperator::apply(const Image& x) const {
  if (x.height() != height_ || x.width() != width_) throw DataError("mask: image shape mismatch");
  Image out(height_, width_);
  auto dst = out.pixels();
  auto src = x.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = observed_[i] ? src[i] : 0.0;
  return out;
}

Image MaskOperator::solve(const Image& y, const Image& z_plus_c, double rho) const {
  Image out(height_, width_);
  auto dst = out.pixels();
  auto ys = y.pixels();
  auto zc = z_plus_c.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i)
    dst[i] = observed_[i] ? (ys[i] + rho * zc[i]) / (1.0 + rho) : zc[i];
  return out;
}

Image MaskOperator::as_image() const {
  Image out(height_, width_);
  auto dst = out.pixels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = observed_[i] ? 255.0 : 0.0;
  return out;
}

// ----------------------------------------------------------- projection ---

namespace {

template <typename Fn>
void for_each_block(int height, int width, Fn&& fn) {
  int b = 0;
  for (int br = 0; br < height; br += BlockProjectionOperator::kBlock)
    for (int bc = 0; bc < width; bc += BlockProjectionOperator::kBlock) fn(b++, br, bc);
}

Eigen::VectorXd read_block(const Image& img, int br, int bc) {
  constexpr int B = BlockProjectionOperator::kBlock;
  Eigen::VectorXd v(B * B);
  Eigen::Index k = 0;
  for (int c = 0; c < B; ++c)
    for (int r = 0; r < B; ++r) v[k++] = img(br + r, bc + c);
  return v;
}

void write_block(Image& img, int br, int bc, const Eigen::VectorXd& v) {
  constexpr int B = BlockProjectionOperator::kBlock;
  Eigen::Index k = 0;
  for (int c = 0; c < B; ++c)
    for (int r = 0; r < B; ++r) img(br + r, bc + c) = v[k++];
}

}  // namespace

BlockProjectionOperator::BlockProjectionOperator(int height, int width, int measurements, std::uint64_t seed)
    : height_(height), width_(width), seed_(seed) {
  if (height < kBlock || width < kBlock || height % kBlock != 0 || width % kBlock != 0)
    throw DataError("block projection needs image dimensions that are positive multiples of 32, got " +
                    std::to_string(height) + "x" + std::to_string(width));
  if (measurements < 1 || measurements > kBlockArea)
    throw ParameterError("measurement count must lie in [1, 1024]");

  Eigen::MatrixXd gaussian(measurements, kBlockArea);
  Rng rng(seed);
  for (int i = 0; i < measurements; ++i)
    for (int j = 0; j < kBlockArea; ++j) gaussian(i, j) = rng.normal();

  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gaussian.transpose());
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(kBlockArea, measurements);
  phi_ = std::make_shared<const Eigen::MatrixXd>(q.transpose());
  gram_ = std::make_shared<const Eigen::MatrixXd>(phi_->transpose() * *phi_);
}

int BlockProjectionOperator::measurements_for(double subrate) {
  if (!(subrate > 0.0 && subrate <= 1.0)) throw ParameterError("subrate must lie in (0, 1]");
  const long long m = std::llround(subrate * kBlockArea);
  return static_cast<int>(std::clamp<long long>(m, 1, kBlockArea));
}

Observation BlockProjectionOperator::apply(const Image& x) const {
  if (x.height() != height_ || x.width() != width_) throw DataError("projection: image shape mismatch");
  const Eigen::Index m = measurements();
  Observation y(m * block_count());
  for_each_block(height_, width_, [&](int b, int br, int bc) { y.segment(b * m, m) = *phi_ * read_block(x, br, bc); });
  return y;
}

Image BlockProjectionOperator::adjoint(const Observation& y) const {
  const Eigen::Index m = measurements();
  if (y.size() != m * block_count()) throw DataError("projection: measurement vector has the wrong length");
  Image out(height_, width_);
  for_each_block(height_, width_, [&](int b, int br, int bc) {
    write_block(out, br, bc, phi_->transpose() * y.segment(b * m, m));
  });
  return out;
}

Image BlockProjectionOperator::gradient_step(const Image& x, const Image& hty, const Image& z_plus_c, double rho,
                                             double mu) const {
  require_same_shape(x, hty, "gradient step");
  require_same_shape(x, z_plus_c, "gradient step");
  if (x.height() != height_ || x.width() != width_) throw DataError("gradient step: image shape mismatch");
  Image out(height_, width_);
  for_each_block(height_, width_, [&](int, int br, int bc) {
    const Eigen::VectorXd xb = read_block(x, br, bc);
    const Eigen::VectorXd grad =
        *gram_ * xb - read_block(hty, br, bc) + rho * (xb - read_block(z_plus_c, br, bc));
    write_block(out, br, bc, xb - mu * grad);
  });
  return out;
}

double BlockProjectionOperator::optimal_step(const Image& x, const Image& hty, const Image& z_plus_c,
                                             double rho) const {
  require_same_shape(x, hty, "optimal step");
  require_same_shape(x, z_plus_c, "optimal step");
  if (x.height() != height_ || x.width() != width_) throw DataError("optimal step: image shape mismatch");
  double qq = 0.0, qaq = 0.0;
  for_each_block(height_, width_, [&](int, int br, int bc) {
    const Eigen::VectorXd xb = read_block(x, br, bc);
    const Eigen::VectorXd q = *gram_ * xb - read_block(hty, br, bc) + rho * (xb - read_block(z_plus_c, br, bc));
    qq += q.squaredNorm();
    qaq += q.dot(*gram_ * q) + rho * q.squaredNorm();
  });
  return qaq > 0.0 ? qq / qaq : 0.0;
}

// --------------------------------------------------------------- variant ---

int image_height(const DegradationOperator& op) {
  return std::visit([](const auto& o) { return o.height(); }, op.variant());
}

int image_width(const DegradationOperator& op) {
  return std::visit([](const auto& o) { return o.width(); }, op.variant());
}

Eigen::Index observation_size(const DegradationOperator& op) {
  if (const auto* p = op.get_if<BlockProjectionOperator>())
    return static_cast<Eigen::Index>(p->measurements()) * p->block_count();
  return static_cast<Eigen::Index>(image_height(op)) * image_width(op);
}

bool is_structured(const DegradationOperator& op) { return !op.holds<BlockProjectionOperator>(); }

Image observation_image(const DegradationOperator& op, const Observation& y) {
  if (!is_structured(op)) throw DataError("projection measurements have no image view");
  if (y.size() != observation_size(op)) throw DataError("observation length does not match operator");
  return Image(image_height(op), image_width(op), std::vector<double>(y.data(), y.data() + y.size()));
}

namespace {

Observation flatten(const Image& img) { return img.vector(); }

void check_input(const DegradationOperator& op, const Image& x) {
  if (x.height() != image_height(op) || x.width() != image_width(op))
    throw DataError("image shape " + std::to_string(x.height()) + "x" + std::to_string(x.width()) +
                    " does not match operator shape " + std::to_string(image_height(op)) + "x" +
                    std::to_string(image_width(op)));
}

}  // namespace

Observation apply(const DegradationOperator& op, const Image& x) {
  check_input(op, x);
  if (const auto* p = op.get_if<BlockProjectionOperator>()) return p->apply(x);
  if (const auto* b = op.get_if<BlurOperator>()) return flatten(b->apply(x));
  return flatten(op.get_if<MaskOperator>()->apply(x));
}

Image apply_adjoint(const DegradationOperator& op, const Observation& y) {
  if (y.size() != observation_size(op)) throw DataError("observation length does not match operator");
  if (const auto* p = op.get_if<BlockProjectionOperator>()) return p->adjoint(y);
  const Image yi = observation_image(op, y);
  if (const auto* b = op.get_if<BlurOperator>()) return b->adjoint(yi);
  return op.get_if<MaskOperator>()->adjoint(yi);
}

Image solve_x_structured(const DegradationOperator& op, const Observation& y, const Image& z, const Image& c,
                         double rho) {
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (!is_structured(op)) throw ParameterError("closed-form X update requires a blur or mask operator");
  check_input(op, z);
  check_input(op, c);
  const Image yi = observation_image(op, y);
  const Image zc = z + c;
  if (const auto* b = op.get_if<BlurOperator>()) return b->solve(yi, zc, rho);
  return op.get_if<MaskOperator>()->solve(yi, zc, rho);
}

Image grad_step_x(const BlockProjectionOperator& op, const Image& x, const Image& hty, const Image& z,
                  const Image& c, double rho, double mu) {
  if (!(mu >= 0.0)) throw ParameterError("step size must be non-negative");
  return op.gradient_step(x, hty, z + c, rho, mu);
}

double optimal_step_x(const BlockProjectionOperator& op, const Image& x, const Image& hty, const Image& z,
                      const Image& c, double rho) {
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  return op.optimal_step(x, hty, z + c, rho);
}

Image grad_step_x(const BlockProjectionOperator& op, const Image& x, const Observation& y, const Image& z,
                  const Image& c, double rho, double mu) {
  return grad_step_x(op, x, op.adjoint(y), z, c, rho, mu);
}

}  // namespace ncw
