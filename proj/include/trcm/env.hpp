#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "trcm/random.hpp"

namespace trcm {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Gaussian query features x ~ N(0, S) with S = diag_scale * I + offdiag_corr * (J - I).
class ContextSampler {
 public:
  ContextSampler(int dim, double diag_scale, double offdiag_corr);

  Vector sample(Rng& rng) const;

  int dim() const { return static_cast<int>(covariance_.rows()); }
  const Matrix& covariance() const { return covariance_; }
  double diag_scale() const { return diag_scale_; }
  double offdiag_corr() const { return offdiag_corr_; }

 private:
  double diag_scale_;
  double offdiag_corr_;
  Matrix covariance_;
  Matrix cholesky_lower_;
};

Vector sample_context(Rng& rng, int dim, double diag_scale, double offdiag_corr);

/// Provider cost law on a bounded support [lo, hi].
///
/// Construction verifies regularity: the virtual cost c + F(c)/f(c) must be
/// strictly increasing over a 1000-point interior grid.
class CostDistribution {
 public:
  enum class Kind { Uniform, LogNormalTruncated };

  static CostDistribution uniform(double lo, double hi);
  /// Log-normal with log-scale parameters (mu, sigma), truncated to [lo, hi].
  static CostDistribution lognormal_truncated(double mu, double sigma, double lo, double hi);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

  double cdf(double c) const;
  double pdf(double c) const;
  double quantile(double u) const;
  double sample(Rng& rng) const;

  /// Psi(c) = c + F(c) / f(c); throws ValidationError outside [lo, hi].
  double virtual_cost(double c) const;

  bool contains(double c) const { return c >= lo_ && c <= hi_; }

 private:
  CostDistribution(Kind kind, double mu, double sigma, double lo, double hi);
  void check_regular() const;
  double lognormal_cdf_raw(double c) const;

  Kind kind_;
  double mu_ = 0.0;
  double sigma_ = 0.0;
  double lo_;
  double hi_;
  // Untruncated CDF at the endpoints, cached for the log-normal family.
  double raw_lo_ = 0.0;
  double raw_hi_ = 1.0;
};

struct RewardModel {
  enum class Kind { GaussianLinear, ExponentialSoftplus };

  Kind kind = Kind::GaussianLinear;
  double sigma = 0.1;  // noise scale, GaussianLinear only

  static RewardModel gaussian(double sigma) { return {Kind::GaussianLinear, sigma}; }
  static RewardModel exponential() { return {Kind::ExponentialSoftplus, 0.0}; }
};

/// Numerically stable ln(1 + e^z).
double softplus(double z);

/// theta' x; throws ValidationError on length mismatch.
double expected_value(const Vector& theta, const Vector& x);

/// Conditional mean E[r | x] under the model: theta' x, or 1 / softplus(theta' x).
double mean_reward(const RewardModel& model, const Vector& theta, const Vector& x);

double sample_reward(const RewardModel& model, const Vector& theta, const Vector& x, Rng& rng);

struct ProviderTruth {
  Vector theta;
  CostDistribution cost_dist;
  double true_cost;

  double cost_lower() const { return cost_dist.lo(); }
  double cost_upper() const { return cost_dist.hi(); }
};

struct BidParams {
  double mu;
  double sigma;
};

inline constexpr double kMinBidSigma = 1e-6;

/// Affine log-normal bid parameters for one provider:
///   mu    = base_mu    + scale * <row 0 of context_matrix, x>
///   sigma = max(1e-6, base_sigma + scale * <row 1 of context_matrix, x>)
BidParams sample_bid_params(const Vector& x, const Matrix& context_matrix, double scale,
                            double base_mu, double base_sigma);

/// Context-dependent log-normal bid generator, one (2 x d) matrix per provider.
class AffineLogNormalBidModel {
 public:
  AffineLogNormalBidModel(std::vector<Matrix> context_matrices, std::vector<double> base_mu,
                          std::vector<double> base_sigma, double scale);

  /// Random matrices with N(0, 1) entries and base parameters set from each
  /// provider's cost support so that exp(base_mu) sits mid-support.
  static AffineLogNormalBidModel generate(const std::vector<CostDistribution>& costs, int dim,
                                          double scale, Rng& rng);

  std::size_t providers() const { return matrices_.size(); }
  BidParams params(std::size_t provider, const Vector& x) const;
  /// One log-normal draw clamped into [lo, hi].
  double sample_bid(std::size_t provider, const Vector& x, double lo, double hi, Rng& rng) const;

 private:
  std::vector<Matrix> matrices_;
  std::vector<double> base_mu_;
  std::vector<double> base_sigma_;
  double scale_;
};

}  // namespace trcm
