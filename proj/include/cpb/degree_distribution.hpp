#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpb/rng.hpp"

namespace cpb {

/// Degree law of the configuration model: constant d, Poisson(mu), or an
/// empirical pmf on {0, 1, ..., d_max}. Provides the cumulant generating
/// function used by the large-deviation rate function.
class DegreeDistribution {
 public:
  enum class Kind { constant, poisson, empirical };

  static DegreeDistribution constant(std::uint32_t d) {
    DegreeDistribution dist;
    dist.kind_ = Kind::constant;
    dist.constant_d_ = d;
    dist.mean_ = static_cast<double>(d);
    return dist;
  }

  static DegreeDistribution poisson(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu))
      throw std::invalid_argument("DegreeDistribution: Poisson mean must be positive");
    DegreeDistribution dist;
    dist.kind_ = Kind::poisson;
    dist.poisson_mu_ = mu;
    dist.mean_ = mu;
    return dist;
  }

  /// pmf[k] = P(D = k). Entries must be nonnegative and sum to 1 within 1e-12.
  static DegreeDistribution empirical(std::vector<double> pmf) {
    if (pmf.empty()) throw std::invalid_argument("DegreeDistribution: empty pmf");
    double sum = 0.0;
    for (double p : pmf) {
      if (!(p >= 0.0) || !std::isfinite(p))
        throw std::invalid_argument("DegreeDistribution: pmf entries must be nonnegative");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::invalid_argument("DegreeDistribution: pmf must sum to 1 within 1e-12");
    DegreeDistribution dist;
    dist.kind_ = Kind::empirical;
    dist.pmf_ = std::move(pmf);
    dist.cdf_.resize(dist.pmf_.size());
    std::partial_sum(dist.pmf_.begin(), dist.pmf_.end(), dist.cdf_.begin());
    dist.mean_ = 0.0;
    for (std::size_t k = 0; k < dist.pmf_.size(); ++k) dist.mean_ += dist.pmf_[k] * static_cast<double>(k);
    return dist;
  }

  Kind kind() const { return kind_; }
  double mean() const { return mean_; }

  double prob_at(std::uint32_t k) const {
    switch (kind_) {
      case Kind::constant:
        return k == constant_d_ ? 1.0 : 0.0;
      case Kind::poisson:
        return std::exp(-poisson_mu_ + k * std::log(poisson_mu_) - std::lgamma(k + 1.0));
      case Kind::empirical:
        return k < pmf_.size() ? pmf_[k] : 0.0;
    }
    return 0.0;
  }

  double prob_zero() const { return prob_at(0); }

  /// Smallest / largest degree carrying probability. max is +inf for Poisson.
  double support_min() const {
    switch (kind_) {
      case Kind::constant:
        return constant_d_;
      case Kind::poisson:
        return 0.0;
      case Kind::empirical:
        for (std::size_t k = 0; k < pmf_.size(); ++k)
          if (pmf_[k] > 0.0) return static_cast<double>(k);
        return 0.0;
    }
    return 0.0;
  }

  double support_max() const {
    switch (kind_) {
      case Kind::constant:
        return constant_d_;
      case Kind::poisson:
        return std::numeric_limits<double>::infinity();
      case Kind::empirical:
        for (std::size_t k = pmf_.size(); k > 0; --k)
          if (pmf_[k - 1] > 0.0) return static_cast<double>(k - 1);
        return 0.0;
    }
    return 0.0;
  }

  /// log E[e^{lam D}].
  double cgf(double lam) const {
    switch (kind_) {
      case Kind::constant:
        return lam * static_cast<double>(constant_d_);
      case Kind::poisson:
        return poisson_mu_ * std::expm1(lam);
      case Kind::empirical: {
        // log-sum-exp over the support
        double hi = -std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < pmf_.size(); ++k) {
          if (pmf_[k] <= 0.0) continue;
          hi = std::max(hi, std::log(pmf_[k]) + lam * static_cast<double>(k));
        }
        double acc = 0.0;
        for (std::size_t k = 0; k < pmf_.size(); ++k) {
          if (pmf_[k] <= 0.0) continue;
          acc += std::exp(std::log(pmf_[k]) + lam * static_cast<double>(k) - hi);
        }
        return hi + std::log(acc);
      }
    }
    return 0.0;
  }

  /// d/dlam cgf = E[D e^{lam D}] / E[e^{lam D}]; strictly increasing in lam.
  double cgf_prime(double lam) const {
    switch (kind_) {
      case Kind::constant:
        return static_cast<double>(constant_d_);
      case Kind::poisson:
        return poisson_mu_ * std::exp(lam);
      case Kind::empirical: {
        double c = cgf(lam);
        double acc = 0.0;
        for (std::size_t k = 0; k < pmf_.size(); ++k) {
          if (pmf_[k] <= 0.0) continue;
          acc += static_cast<double>(k) *
                 std::exp(std::log(pmf_[k]) + lam * static_cast<double>(k) - c);
        }
        return acc;
      }
    }
    return 0.0;
  }

  std::uint32_t sample(RngStream& rng) const {
    switch (kind_) {
      case Kind::constant:
        return constant_d_;
      case Kind::poisson:
        return sample_poisson(rng, poisson_mu_);
      case Kind::empirical: {
        double u = rng.next_double();
        auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
        if (it == cdf_.end()) --it;
        return static_cast<std::uint32_t>(it - cdf_.begin());
      }
    }
    return 0;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::constant:
        return "constant:" + std::to_string(constant_d_);
      case Kind::poisson:
        return "poisson:" + std::to_string(poisson_mu_);
      case Kind::empirical:
        return "empirical:dmax=" + std::to_string(pmf_.size() - 1);
    }
    return "?";
  }

  const std::vector<double>& empirical_pmf() const { return pmf_; }

 private:
  DegreeDistribution() = default;

  // Knuth's product method, split into chunks so exp(-mu) never underflows.
  static std::uint32_t sample_poisson(RngStream& rng, double mu) {
    std::uint64_t total = 0;
    while (mu > 30.0) {
      total += sample_poisson_small(rng, 30.0);
      mu -= 30.0;
    }
    total += sample_poisson_small(rng, mu);
    return static_cast<std::uint32_t>(total);
  }

  static std::uint64_t sample_poisson_small(RngStream& rng, double mu) {
    const double limit = std::exp(-mu);
    std::uint64_t k = 0;
    double prod = rng.next_double();
    while (prod > limit) {
      ++k;
      prod *= rng.next_double();
    }
    return k;
  }

  Kind kind_ = Kind::constant;
  std::uint32_t constant_d_ = 0;
  double poisson_mu_ = 0.0;
  std::vector<double> pmf_;
  std::vector<double> cdf_;
  double mean_ = 0.0;
};

}  // namespace cpb
