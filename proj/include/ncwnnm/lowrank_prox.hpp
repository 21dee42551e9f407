#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ncwnnm/image.hpp"

namespace ncw {

/// How the signal spread entering the adaptive regularisation weight is
/// estimated from the singular values gamma of an m-column group.
enum class VarianceEstimator {
  per_value,    ///< theta_j = sqrt(max(gamma_j^2 / m - delta^2, 0)), one lambda per singular value
  population,   ///< mean squared deviation from the mean singular value
  mean_square,  ///< mean of the squared singular values
};

struct GroupProxParams {
  double p = 0.7;                   ///< exponent in (0, 1]
  double rho = 0.02;                ///< ADMM penalty
  double noise_std = 1.4142135623730951;
  double epsilon = 0.1;             ///< weight stabiliser
  double varsigma = 0.3;            ///< lambda stabiliser
  int gst_iterations = 2;
  double total_elements = 1.0;      ///< K = d * m * n, summed over all groups
  double pixel_count = 1.0;         ///< N
  VarianceEstimator estimator = VarianceEstimator::population;
  /// The prior sees intensities (and delta) multiplied by this factor; the
  /// result is scaled back.
  double intensity_scale = 1.0;

  void validate() const;
  /// tau = lambda K / (rho N) for a given lambda.
  double tau(double lambda) const { return lambda * total_elements / (rho * pixel_count); }
};

/// Thin SVD with singular values in non-increasing order.
struct SvdTriple {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;

  Eigen::MatrixXd reconstruct() const { return u * sigma.asDiagonal() * v.transpose(); }
};

/// Throws NumericalError on non-finite input or failed convergence.
SvdTriple thin_svd(const Eigen::Ref<const Eigen::MatrixXd>& m);

/// w_j = 1 / (gamma_j + epsilon).
Eigen::VectorXd compute_weights(const Eigen::Ref<const Eigen::VectorXd>& gamma, double epsilon);

/// lambda = 2 sqrt(2) delta^2 / (theta + varsigma), theta the estimated
/// variance of the singular values. Only for the scalar estimators.
double compute_lambda(const Eigen::Ref<const Eigen::VectorXd>& singular_values, double noise_std, double varsigma,
                      VarianceEstimator estimator = VarianceEstimator::population);

/// One lambda per singular value; constant unless the estimator is per_value.
Eigen::VectorXd compute_lambdas(const Eigen::Ref<const Eigen::VectorXd>& singular_values, double noise_std,
                                double varsigma, VarianceEstimator estimator, Eigen::Index columns);

struct ProxResult {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd input_singular_values;
  Eigen::VectorXd output_singular_values;
  Eigen::VectorXd lambdas;  ///< empty for weighted_lp_prox
  double tau = 0.0;         ///< tau at the mean lambda
  /// sum_j lambda_j w_j sigma_j^p of the output (lambda_j = 1 for weighted_lp_prox).
  double penalty = 0.0;
};

/// Weighted l_p shrinkage of the singular values of one group:
/// R = U diag(gamma) V^T, sigma_j = GST(gamma_j, tau_j w_j, p, J) with
/// tau_j = lambda_j K / (rho N), returns U diag(sigma) V^T.
ProxResult group_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, const GroupProxParams& params);

/// Same as group_prox with an explicit threshold scale and weights.
ProxResult weighted_lp_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, double tau,
                            const Eigen::Ref<const Eigen::VectorXd>& weights, double p, int gst_iterations);

/// NNM counterpart of group_prox: same adaptive lambda and tau, but p = 1 and
/// uniform weights, i.e. soft thresholding of gamma_j by tau_j.
ProxResult nnm_group_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, const GroupProxParams& params);

/// Singular value thresholding: soft-thresholds every singular value by tau.
Eigen::MatrixXd nnm_prox(const Eigen::Ref<const Eigen::MatrixXd>& group, double tau);

/// Relative gap between the per-pixel and per-group-element mean squared
/// differences of z and r, with groups read at identical positions from both.
double check_theorem1(const Image& z, const Image& r, std::span<const std::vector<PatchIndex>> groups,
                      PatchShape shape);

}  // namespace ncw
