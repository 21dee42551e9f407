#include "ncwnnm/lowrank_prox.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "ncwnnm/errors.hpp"
#include "ncwnnm/gst.hpp"

namespace ncw {

void GroupProxParams::validate() const {
  if (!(p > 0.0 && p <= 1.0)) throw ParameterError("p must lie in (0, 1]");
  if (!(rho > 0.0)) throw ParameterError("rho must be positive");
  if (!(noise_std >= 0.0)) throw ParameterError("noise std must be non-negative");
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(varsigma > 0.0)) throw ParameterError("varsigma must be positive");
  if (gst_iterations < 1) throw ParameterError("GST needs at least one iteration");
  if (!(intensity_scale > 0.0) || !std::isfinite(intensity_scale)) throw ParameterError("intensity scale must be positive");
  if (!(total_elements > 0.0) || !(pixel_count > 0.0)) throw ParameterError("K and N must be positive");
}

SvdTriple thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (!m.allFinite()) throw NumericalError("SVD input has non-finite entries");
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

Eigen::VectorXd compute_weights(const Eigen::Ref<const Eigen::VectorXd>& gamma, double epsilon) {
  return (gamma.array().abs() + epsilon).inverse().matrix();
}

double compute_lambda(const Eigen::Ref<const Eigen::VectorXd>& singular_values, double noise_std, double varsigma,
                      VarianceEstimator estimator) {
  if (singular_values.size() == 0) throw DataError("cannot estimate the variance of an empty spectrum");
  double theta = 0.0;
  switch (estimator) {
    case VarianceEstimator::population: {
      const double mean = singular_values.mean();
      theta = (singular_values.array() - mean).square().mean();
      break;
    }
    case VarianceEstimator::mean_square:
      theta = singular_values.array().square().mean();
      break;
    case VarianceEstimator::per_value:
      throw ParameterError("the per-value estimator yields one lambda per singular value");
  }
  return 2.0 * std::numbers::sqrt2 * noise_std * noise_std / (theta + varsigma);
}

Eigen::VectorXd compute_lambdas(const Eigen::Ref<const Eigen::VectorXd>& singular_values, double noise_std,
                                double varsigma, VarianceEstimator estimator, Eigen::Index columns) {
  if (estimator != VarianceEstimator::per_value) {
    return Eigen::VectorXd::Constant(singular_values.size(),
                                     compute_lambda(singular_values, noise_std, varsigma, estimator));
  }
  if (singular_values.size() == 0) throw DataError("cannot estimate the variance of an empty spectrum");
  if (columns < 1) throw ParameterError("group must have at least one column");
  const double noise_var = noise_std * noise_std;
  const double m = static_cast<double>(columns);
  Eigen::VectorXd out(singular_values.size());
  for (Eigen::Index j = 0; j < out.size(); ++j) {
    const double theta = std::sqrt(std::max(singular_values[j] * singular_values[j] / m - noise_var, 0.0));
    out[j] = 2.0 * std::numbers::sqrt2 * noise_var / (theta + varsigma);
  }
  return out;
}

namespace {

// Singular values and the right (or left, for wide input) singular vectors
// from the eigen-decomposition of the smaller Gram matrix.
struct Spectrum {
  Eigen::VectorXd sigma;
  Eigen::MatrixXd basis;
  bool tall = true;
};

Spectrum spectrum_of(const Eigen::Ref<const Eigen::MatrixXd>& m) {
  if (!m.allFinite()) throw NumericalError("SVD input has non-finite entries");
  Spectrum out;
  out.tall = m.rows() >= m.cols();
  const Eigen::MatrixXd gram = out.tall ? Eigen::MatrixXd(m.transpose() * m) : Eigen::MatrixXd(m * m.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  if (eig.info() != Eigen::Success) throw NumericalError("SVD did not converge");
  const Eigen::Index k = gram.rows();
  out.sigma.resize(k);
  out.basis.resize(k, k);
  for (Eigen::Index j = 0; j < k; ++j) {
    out.sigma[j] = std::sqrt(std::max(eig.eigenvalues()[k - 1 - j], 0.0));
    out.basis.col(j) = eig.eigenvectors().col(k - 1 - j);
  }
  return out;
}

// sigma_j = GST(gamma_j, thresholds_j, p); penalty is sum_j penalty_weights_j sigma_j^p.
// The output U diag(sigma) V^T is formed as M V diag(sigma / gamma) V^T, which
// never needs U.
ProxResult shrink(const Eigen::Ref<const Eigen::MatrixXd>& m, const Spectrum& spec,
                  const Eigen::Ref<const Eigen::VectorXd>& thresholds,
                  const Eigen::Ref<const Eigen::VectorXd>& penalty_weights, double p, int gst_iterations) {
  const Eigen::Index k = spec.sigma.size();
  if (thresholds.size() != k || penalty_weights.size() != k) {
    throw DataError("one weight per singular value is required");
  }
  ProxResult out;
  out.input_singular_values = spec.sigma;
  out.output_singular_values.resize(k);
  Eigen::VectorXd ratio(k);
  double weighted = 0.0;
  for (Eigen::Index j = 0; j < k; ++j) {
    const double s = gst_solve(spec.sigma[j], {p, thresholds[j], gst_iterations});
    out.output_singular_values[j] = s;
    ratio[j] = spec.sigma[j] > 0.0 ? s / spec.sigma[j] : 0.0;
    weighted += penalty_weights[j] * std::pow(s, p);
  }
  out.penalty = weighted;
  const Eigen::MatrixXd& b = spec.basis;
  out.matrix = spec.tall ? Eigen::MatrixXd(m * (b * ratio.asDiagonal() * b.transpose()))
                         : Eigen::MatrixXd((b * ratio.asDiagonal() * b.transpose()) * m);
  if (!out.matrix.allFinite()) throw NumericalError("shrinkage produced non-finite values");
  return out;
}

ProxResult adaptive_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, const GroupProxParams& params,
                         bool weighted) {
  params.validate();
  const double s = params.intensity_scale;
  const Eigen::MatrixXd scaled_group = s * group;
  const Spectrum spec = spectrum_of(scaled_group);
  const Eigen::VectorXd lambdas =
      compute_lambdas(spec.sigma, s * params.noise_std, params.varsigma, params.estimator, group.cols());
  const Eigen::VectorXd w = weighted ? compute_weights(spec.sigma, params.epsilon)
                                     : Eigen::VectorXd::Ones(spec.sigma.size()).eval();
  const Eigen::VectorXd scaled = lambdas.cwiseProduct(w);
  const double scale = params.total_elements / (params.rho * params.pixel_count);
  ProxResult out =
      shrink(scaled_group, spec, scale * scaled, scaled, weighted ? params.p : 1.0, params.gst_iterations);
  if (s != 1.0) out.matrix /= s;
  out.lambdas = lambdas;
  out.tau = params.tau(lambdas.mean());
  return out;
}

}  // namespace

ProxResult weighted_lp_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, double tau,
                            const Eigen::Ref<const Eigen::VectorXd>& weights, double p, int gst_iterations) {
  ProxResult out = shrink(group, spectrum_of(group), tau * weights, weights, p, gst_iterations);
  out.tau = tau;
  return out;
}

ProxResult group_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, const GroupProxParams& params) {
  return adaptive_prox(group, params, true);
}

ProxResult nnm_group_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, const GroupProxParams& params) {
  return adaptive_prox(group, params, false);
}

Eigen::MatrixXd nnm_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, double tau) {
  if (!(tau >= 0.0)) throw ParameterError("SVT threshold must be non-negative");
  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(std::min(group.rows(), group.cols()));
  return shrink(group, spectrum_of(group), tau * ones, ones, 1.0, 1).matrix;
}

double check_theorem1(const Image& z, const Image& r, std::span<const std::vector<PatchIndex>> groups,
                      PatchShape shape) {
  require_same_shape(z, r, "check_theorem1");
  const Image diff = z - r;
  const double per_pixel = squared_norm(diff) / static_cast<double>(diff.size());
  double group_sum = 0.0;
  double elements = 0.0;
  for (const auto& members : groups) {
    for (const PatchIndex idx : members) group_sum += extract_patch(diff, idx, shape).squaredNorm();
    elements += static_cast<double>(members.size()) * shape.area();
  }
  if (elements == 0.0) throw DataError("check_theorem1 needs at least one group");
  const double per_element = group_sum / elements;
  return std::abs(per_pixel - per_element) / std::max(per_pixel, std::numeric_limits<double>::min());
}

}  // namespace ncw
