#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "trcm/env.hpp"
#include "trcm/error.hpp"

using namespace trcm;

namespace {

double mean_of(const std::vector<double>& xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double se_of(const std::vector<double>& xs) {
  const double m = mean_of(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1) / static_cast<double>(xs.size()));
}

}  // namespace

TEST_CASE("context covariance matches the target within 5% entrywise") {
  const ContextSampler sampler(5, 0.2, 0.05);
  Rng rng(11);
  const int n = 100000;
  Matrix acc = Matrix::Zero(5, 5);
  for (int k = 0; k < n; ++k) {
    const Vector x = sampler.sample(rng);
    acc += x * x.transpose();
  }
  acc /= n;
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const double target = i == j ? 0.2 : 0.05;
      CHECK(std::abs(acc(i, j) - target) <= 0.05 * target + 3.0 * std::sqrt(0.04 / n));
    }
  }
}

TEST_CASE("1-D standard normal context has mean near zero") {
  Rng rng(3);
  double s = 0.0;
  for (int k = 0; k < 100000; ++k) s += sample_context(rng, 1, 1.0, 0.0)(0);
  CHECK(std::abs(s / 100000) < 0.02);
}

TEST_CASE("context sampling is deterministic per seed") {
  const ContextSampler sampler(4, 0.2, 0.05);
  Rng a(99);
  Rng b(99);
  CHECK(sampler.sample(a) == sampler.sample(b));
}

TEST_CASE("non positive-definite covariance is rejected") {
  CHECK_THROWS_AS(ContextSampler(3, 0.1, 0.2), ValidationError);
  CHECK_THROWS_AS(ContextSampler(0, 0.2, 0.05), ValidationError);
}

TEST_CASE("expected value is an inner product") {
  Vector theta(2), x(2);
  theta << 1, 0;
  x << 0.3, 9;
  CHECK(expected_value(theta, x) == doctest::Approx(0.3));
  theta << 0.5, 0.5;
  x << 1, 3;
  CHECK(expected_value(theta, x) == doctest::Approx(2.0));
  CHECK(expected_value(Vector::Zero(2), x) == 0.0);
  CHECK_THROWS_AS(expected_value(Vector::Zero(3), x), ValidationError);
}

TEST_CASE("noiseless gaussian reward equals theta'x") {
  Vector theta(2), x(2);
  theta << 0.4, -1.2;
  x << 0.7, 0.1;
  Rng rng(1);
  CHECK(sample_reward(RewardModel::gaussian(0.0), theta, x, rng) == theta.dot(x));
}

TEST_CASE("exponential rewards have mean 1/softplus(theta'x)") {
  Vector theta(1), x(1);
  x << 1.0;
  for (double z : {0.0, 50.0}) {
    theta << z;
    Rng rng(static_cast<std::uint64_t>(z) + 5);
    std::vector<double> draws(100000);
    for (double& d : draws) d = sample_reward(RewardModel::exponential(), theta, x, rng);
    // softplus computed independently of the library helper
    const double rate = std::log(1.0 + std::exp(z));
    CHECK(std::abs(mean_of(draws) - 1.0 / rate) <= 3.0 * se_of(draws));
    CHECK(mean_reward(RewardModel::exponential(), theta, x) == doctest::Approx(1.0 / rate));
  }
  CHECK(softplus(0.0) == doctest::Approx(std::log(2.0)));
  CHECK(softplus(800.0) == doctest::Approx(800.0));
}

TEST_CASE("uniform virtual cost matches finite differences of the CDF") {
  const auto u = CostDistribution::uniform(0.0, 1.0);
  CHECK(u.virtual_cost(0.0) == 0.0);
  CHECK(u.virtual_cost(0.5) == doctest::Approx(1.0));
  const auto u2 = CostDistribution::uniform(2.0, 6.0);
  CHECK(u2.virtual_cost(3.0) == doctest::Approx(4.0));

  const double h = 1e-6;
  for (double c : {0.1, 0.37, 0.8}) {
    const double f = (u.cdf(c + h) - u.cdf(c - h)) / (2 * h);
    CHECK(u.virtual_cost(c) == doctest::Approx(c + u.cdf(c) / f).epsilon(1e-6));
  }
  CHECK_THROWS_AS(u.virtual_cost(1.2), ValidationError);
}

TEST_CASE("truncated log-normal CDF integrates its density") {
  const auto ln = CostDistribution::lognormal_truncated(std::log(0.3), 0.4, 0.05, 0.55);
  CHECK(ln.cdf(0.05) == doctest::Approx(0.0));
  CHECK(ln.cdf(0.55) == doctest::Approx(1.0));
  // composite Simpson of the density vs. the CDF
  const int n = 2000;
  const double a = 0.05;
  const double b = 0.4;
  const double h = (b - a) / n;
  double s = ln.pdf(a) + ln.pdf(b);
  for (int k = 1; k < n; ++k) s += (k % 2 ? 4.0 : 2.0) * ln.pdf(a + k * h);
  CHECK(s * h / 3.0 == doctest::Approx(ln.cdf(b)).epsilon(1e-8));

  double prev = ln.virtual_cost(0.05);
  CHECK(prev == doctest::Approx(0.05));
  for (double c = 0.06; c <= 0.55; c += 0.01) {
    const double psi = ln.virtual_cost(c);
    const double f = (ln.cdf(c + 1e-7) - ln.cdf(c - 1e-7)) / 2e-7;
    CHECK(psi == doctest::Approx(c + ln.cdf(c) / f).epsilon(1e-5));
    CHECK(psi > prev);
    prev = psi;
  }
  CHECK(ln.quantile(ln.cdf(0.31)) == doctest::Approx(0.31));
}

TEST_CASE("cost samples are uniform under the CDF transform") {
  const auto ln = CostDistribution::lognormal_truncated(std::log(0.3), 0.4, 0.05, 0.55);
  Rng rng(17);
  const int n = 20000;
  std::vector<double> u(n);
  for (double& v : u) v = ln.cdf(ln.sample(rng));
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (int k = 0; k < n; ++k) {
    ks = std::max({ks, std::abs(u[k] - static_cast<double>(k) / n),
                   std::abs(u[k] - static_cast<double>(k + 1) / n)});
  }
  CHECK(ks < 1.63 / std::sqrt(static_cast<double>(n)));  // 1% KS critical value
}

TEST_CASE("invalid cost laws are rejected") {
  CHECK_THROWS_AS(CostDistribution::uniform(1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(CostDistribution::uniform(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(CostDistribution::lognormal_truncated(0.0, 0.5, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(CostDistribution::lognormal_truncated(0.0, 0.0, 0.1, 1.0), ValidationError);
}

TEST_CASE("affine log-normal bid parameters") {
  Matrix m(2, 3);
  m << 1, 2, 3, -1, 0, 1;
  Vector x(3);
  x << 0.1, 0.2, 0.3;
  const BidParams zero = sample_bid_params(x, m, 0.0, -1.0, 0.25);
  CHECK(zero.mu == -1.0);
  CHECK(zero.sigma == 0.25);
  const BidParams p = sample_bid_params(x, m, 0.15, -1.0, 0.25);
  CHECK(p.mu == doctest::Approx(-1.0 + 0.15 * 1.4));
  CHECK(p.sigma == doctest::Approx(0.25 + 0.15 * 0.2));
  CHECK(sample_bid_params(x, m, 100.0, 0.0, -100.0).sigma == kMinBidSigma);

  const std::vector<CostDistribution> costs{CostDistribution::uniform(0.1, 0.6)};
  Rng rng(4);
  const auto model = AffineLogNormalBidModel::generate(costs, 5, 0.15, rng);
  const ContextSampler sampler(5, 0.2, 0.05);
  std::vector<double> mus;
  for (int t = 0; t < 10000; ++t) mus.push_back(model.params(0, sampler.sample(rng)).mu);
  CHECK(se_of(mus) > 0.0);
  for (int t = 0; t < 100; ++t) {
    const double b = model.sample_bid(0, sampler.sample(rng), 0.1, 0.6, rng);
    CHECK(b >= 0.1);
    CHECK(b <= 0.6);
  }
}
