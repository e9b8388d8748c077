#include "trcm/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include <boost/math/distributions/normal.hpp>

#include "trcm/error.hpp"

namespace trcm {

namespace {

const boost::math::normal& standard_normal() {
  static const boost::math::normal dist(0.0, 1.0);
  return dist;
}

void check_finite(const Vector& v, const char* what) {
  if (!v.allFinite()) {
    throw ValidationError(std::string(what) + " has non-finite entries");
  }
}

}  // namespace

ContextSampler::ContextSampler(int dim, double diag_scale, double offdiag_corr)
    : diag_scale_(diag_scale), offdiag_corr_(offdiag_corr) {
  if (dim < 1) {
    throw ValidationError("context dimension must be >= 1, got " + std::to_string(dim));
  }
  covariance_ = Matrix::Constant(dim, dim, offdiag_corr);
  covariance_.diagonal().setConstant(diag_scale);
  Eigen::LLT<Matrix> llt(covariance_);
  // Eigenvalues are diag_scale - offdiag_corr (multiplicity d-1) and
  // diag_scale + (d-1) offdiag_corr.
  const double lambda_min = std::min(diag_scale - offdiag_corr,
                                     diag_scale + (dim - 1) * offdiag_corr);
  if (llt.info() != Eigen::Success || !(lambda_min > 0.0)) {
    std::ostringstream msg;
    msg << "context covariance is not positive definite (diag_scale=" << diag_scale
        << ", offdiag_corr=" << offdiag_corr << ", dim=" << dim << ")";
    throw ValidationError(msg.str());
  }
  cholesky_lower_ = llt.matrixL();
}

Vector ContextSampler::sample(Rng& rng) const {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector z(dim());
  for (int k = 0; k < z.size(); ++k) z[k] = normal(rng);
  return cholesky_lower_ * z;
}

Vector sample_context(Rng& rng, int dim, double diag_scale, double offdiag_corr) {
  return ContextSampler(dim, diag_scale, offdiag_corr).sample(rng);
}

CostDistribution::CostDistribution(Kind kind, double mu, double sigma, double lo, double hi)
    : kind_(kind), mu_(mu), sigma_(sigma), lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    std::ostringstream msg;
    msg << "cost support requires finite lo < hi, got [" << lo << ", " << hi << "]";
    throw ValidationError(msg.str());
  }
  if (lo < 0.0) throw ValidationError("cost support must be non-negative");
  if (kind == Kind::LogNormalTruncated) {
    if (!(sigma > 0.0) || !std::isfinite(mu)) {
      throw ValidationError("log-normal cost law needs finite mu and sigma > 0");
    }
    if (!(lo > 0.0)) throw ValidationError("log-normal cost support must have lo > 0");
    raw_lo_ = lognormal_cdf_raw(lo);
    raw_hi_ = lognormal_cdf_raw(hi);
    if (!(raw_hi_ - raw_lo_ > 1e-12)) {
      throw ValidationError("log-normal cost law puts no mass on its truncation interval");
    }
  }
  check_regular();
}

CostDistribution CostDistribution::uniform(double lo, double hi) {
  return CostDistribution(Kind::Uniform, 0.0, 0.0, lo, hi);
}

CostDistribution CostDistribution::lognormal_truncated(double mu, double sigma, double lo,
                                                       double hi) {
  return CostDistribution(Kind::LogNormalTruncated, mu, sigma, lo, hi);
}

double CostDistribution::lognormal_cdf_raw(double c) const {
  return boost::math::cdf(standard_normal(), (std::log(c) - mu_) / sigma_);
}

double CostDistribution::cdf(double c) const {
  if (c <= lo_) return 0.0;
  if (c >= hi_) return 1.0;
  if (kind_ == Kind::Uniform) return (c - lo_) / (hi_ - lo_);
  return (lognormal_cdf_raw(c) - raw_lo_) / (raw_hi_ - raw_lo_);
}

double CostDistribution::pdf(double c) const {
  if (c < lo_ || c > hi_) return 0.0;
  if (kind_ == Kind::Uniform) return 1.0 / (hi_ - lo_);
  const double z = (std::log(c) - mu_) / sigma_;
  return boost::math::pdf(standard_normal(), z) / (c * sigma_) / (raw_hi_ - raw_lo_);
}

double CostDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw ValidationError("quantile level must lie in [0, 1]");
  if (kind_ == Kind::Uniform) return lo_ + u * (hi_ - lo_);
  if (u <= 0.0) return lo_;
  if (u >= 1.0) return hi_;
  const double target = raw_lo_ + u * (raw_hi_ - raw_lo_);
  const double z = boost::math::quantile(standard_normal(), target);
  return std::clamp(std::exp(mu_ + sigma_ * z), lo_, hi_);
}

double CostDistribution::sample(Rng& rng) const { return quantile(uniform01(rng)); }

double CostDistribution::virtual_cost(double c) const {
  if (!(c >= lo_ && c <= hi_)) {
    std::ostringstream msg;
    msg << "cost " << c << " outside support [" << lo_ << ", " << hi_ << "]";
    throw ValidationError(msg.str());
  }
  if (kind_ == Kind::Uniform) return 2.0 * c - lo_;
  if (c == lo_) return lo_;
  return c + cdf(c) / pdf(c);
}

void CostDistribution::check_regular() const {
  constexpr int kGrid = 1000;
  double previous = -std::numeric_limits<double>::infinity();
  for (int k = 1; k <= kGrid; ++k) {
    const double c = lo_ + (hi_ - lo_) * k / (kGrid + 1);
    const double psi = virtual_cost(c);
    if (!std::isfinite(psi) || !(psi > previous)) {
      std::ostringstream msg;
      msg << "cost law is not regular: virtual cost fails to increase near c=" << c;
      throw ValidationError(msg.str());
    }
    previous = psi;
  }
}

double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

double expected_value(const Vector& theta, const Vector& x) {
  if (theta.size() != x.size()) {
    throw ValidationError("theta has length " + std::to_string(theta.size()) +
                          " but context has length " + std::to_string(x.size()));
  }
  return theta.dot(x);
}

double mean_reward(const RewardModel& model, const Vector& theta, const Vector& x) {
  const double score = expected_value(theta, x);
  if (model.kind == RewardModel::Kind::GaussianLinear) return score;
  return 1.0 / softplus(score);
}

double sample_reward(const RewardModel& model, const Vector& theta, const Vector& x, Rng& rng) {
  const double score = expected_value(theta, x);
  if (model.kind == RewardModel::Kind::GaussianLinear) {
    if (model.sigma < 0.0) throw ValidationError("reward noise sigma must be >= 0");
    if (model.sigma == 0.0) return score;
    std::normal_distribution<double> noise(0.0, model.sigma);
    return score + noise(rng);
  }
  std::exponential_distribution<double> draw(softplus(score));
  return draw(rng);
}

BidParams sample_bid_params(const Vector& x, const Matrix& context_matrix, double scale,
                            double base_mu, double base_sigma) {
  if (context_matrix.rows() != 2 || context_matrix.cols() != x.size()) {
    throw ValidationError("bid context matrix must be 2 x " + std::to_string(x.size()));
  }
  if (scale < 0.0) throw ValidationError("bid scale must be >= 0");
  check_finite(x, "context");
  const Eigen::Vector2d shift = scale * (context_matrix * x);
  return {base_mu + shift[0], std::max(kMinBidSigma, base_sigma + shift[1])};
}

AffineLogNormalBidModel::AffineLogNormalBidModel(std::vector<Matrix> context_matrices,
                                                 std::vector<double> base_mu,
                                                 std::vector<double> base_sigma, double scale)
    : matrices_(std::move(context_matrices)),
      base_mu_(std::move(base_mu)),
      base_sigma_(std::move(base_sigma)),
      scale_(scale) {
  if (base_mu_.size() != matrices_.size() || base_sigma_.size() != matrices_.size()) {
    throw ValidationError("bid model needs one (mu, sigma) pair per context matrix");
  }
  if (scale_ < 0.0) throw ValidationError("bid scale must be >= 0");
}

AffineLogNormalBidModel AffineLogNormalBidModel::generate(
    const std::vector<CostDistribution>& costs, int dim, double scale, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Matrix> matrices;
  std::vector<double> mu;
  std::vector<double> sigma;
  for (const auto& dist : costs) {
    Matrix m(2, dim);
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < dim; ++c) m(r, c) = normal(rng);
    matrices.push_back(std::move(m));
    const double mid = 0.5 * (dist.lo() + dist.hi());
    mu.push_back(std::log(std::max(mid, 1e-9)));
    sigma.push_back(0.25);
  }
  return AffineLogNormalBidModel(std::move(matrices), std::move(mu), std::move(sigma), scale);
}

BidParams AffineLogNormalBidModel::params(std::size_t provider, const Vector& x) const {
  if (provider >= matrices_.size()) throw ValidationError("provider index out of range");
  return sample_bid_params(x, matrices_[provider], scale_, base_mu_[provider],
                           base_sigma_[provider]);
}

double AffineLogNormalBidModel::sample_bid(std::size_t provider, const Vector& x, double lo,
                                           double hi, Rng& rng) const {
  const BidParams p = params(provider, x);
  std::lognormal_distribution<double> draw(p.mu, p.sigma);
  return std::clamp(draw(rng), lo, hi);
}

}  // namespace trcm
