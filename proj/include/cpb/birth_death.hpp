#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpb/log_number.hpp"

namespace cpb {

/// Birth-death chain on {k0, ..., k1}: k0 is absorbing, k1 has only a death
/// transition, and interior states move up at birth_rate(k) and down at
/// death_rate(k). The death rate defaults to k, which is the chain the
/// hitting-time sandwich bounds apply to.
struct BirthDeathSpec {
  std::uint32_t k0 = 0;
  std::uint32_t k1 = 0;
  std::function<double(std::uint32_t)> birth_rate;
  std::function<double(std::uint32_t)> death_rate = [](std::uint32_t k) {
    return static_cast<double>(k);
  };
};

namespace birth_death_detail {

inline void validate(const BirthDeathSpec& spec) {
  if (spec.k0 >= spec.k1) throw std::invalid_argument("BirthDeathSpec: need k0 < k1");
  if (spec.k1 - spec.k0 > 10'000'000)
    throw std::invalid_argument("BirthDeathSpec: range k1 - k0 too large");
  if (!spec.birth_rate || !spec.death_rate)
    throw std::invalid_argument("BirthDeathSpec: rates must be set");
}

inline double checked_rate(const std::function<double(std::uint32_t)>& rate, std::uint32_t k,
                           const char* what) {
  double r = rate(k);
  if (!(r > 0.0) || !std::isfinite(r))
    throw std::invalid_argument(std::string("BirthDeathSpec: nonpositive ") + what +
                                " rate at state " + std::to_string(k));
  return r;
}

}  // namespace birth_death_detail

/// Expected times to hit k0, indexed by start state.
struct HittingTimes {
  std::uint32_t k0 = 0;
  std::vector<LogNumber> values;  // values[k - k0] = H_k, H_{k0} = 0

  LogNumber at(std::uint32_t k) const { return values.at(k - k0); }
  std::uint32_t k1() const { return k0 + static_cast<std::uint32_t>(values.size()) - 1; }
};

/// Solves the hitting-time linear system exactly. The system telescopes into
/// increments D_k = H_k - H_{k-1} satisfying D_{k1} = 1/d_{k1} and
/// D_k = (1 + b_k D_{k+1}) / d_k going down; every term is positive, so the
/// whole recursion runs as log-sum-exp and H_k ~ e^{cN} never overflows.
inline HittingTimes expected_hitting_times(const BirthDeathSpec& spec) {
  using birth_death_detail::checked_rate;
  birth_death_detail::validate(spec);
  const std::uint32_t k0 = spec.k0, k1 = spec.k1;
  const std::uint32_t len = k1 - k0;

  std::vector<double> log_increment(len);  // log D_k at index k - k0 - 1
  double current = -std::log(checked_rate(spec.death_rate, k1, "death"));
  log_increment[len - 1] = current;
  for (std::uint32_t k = k1 - 1; k > k0; --k) {
    const double birth = checked_rate(spec.birth_rate, k, "birth");
    const double death = checked_rate(spec.death_rate, k, "death");
    current = LogNumber::log_add(0.0, std::log(birth) + current) - std::log(death);
    if (!std::isfinite(current))
      throw std::invalid_argument("expected_hitting_times: increment overflowed");
    log_increment[k - k0 - 1] = current;
  }

  HittingTimes result;
  result.k0 = k0;
  result.values.resize(len + 1);
  result.values[0] = LogNumber::zero();
  LogNumber acc = LogNumber::zero();
  for (std::uint32_t i = 0; i < len; ++i) {
    acc += LogNumber::from_log(log_increment[i]);
    result.values[i + 1] = acc;
  }
  return result;
}

/// (1/d_{k1}) * prod_{i=k0+1}^{k1-1} birth(i)/death(i). With the default
/// death rate this is the classic lower bound: it undercuts H_k for every
/// k > k0.
inline LogNumber hitting_lower_bound(const BirthDeathSpec& spec) {
  using birth_death_detail::checked_rate;
  birth_death_detail::validate(spec);
  double acc = -std::log(checked_rate(spec.death_rate, spec.k1, "death"));
  for (std::uint32_t i = spec.k0 + 1; i < spec.k1; ++i)
    acc += std::log(checked_rate(spec.birth_rate, i, "birth")) -
           std::log(checked_rate(spec.death_rate, i, "death"));
  return LogNumber::from_log(acc);
}

/// (1/2)(k1-k0)^2 * max over k <= j of prod_{i=k+1}^{j} birth(i)/death(i),
/// computed with one sweep over prefix log sums. Dominates every H_k when
/// the death rate in state k is k.
inline LogNumber hitting_upper_bound(const BirthDeathSpec& spec) {
  using birth_death_detail::checked_rate;
  birth_death_detail::validate(spec);
  // prefix[j - k0] = sum_{i=k0+1}^{j} log(birth(i)/death(i)), j in [k0, k1-1]
  double prefix = 0.0;
  double min_prefix = 0.0;
  double best = 0.0;  // empty product
  for (std::uint32_t i = spec.k0 + 1; i < spec.k1; ++i) {
    prefix += std::log(checked_rate(spec.birth_rate, i, "birth")) -
              std::log(checked_rate(spec.death_rate, i, "death"));
    best = std::max(best, prefix - min_prefix);
    min_prefix = std::min(min_prefix, prefix);
  }
  const double span = static_cast<double>(spec.k1 - spec.k0);
  return LogNumber::from_log(std::log(0.5) + 2.0 * std::log(span) + best);
}

/// Contact process on the complete graph K_n with infection rate lam/n:
/// births at lam*k*(n-k)/n, deaths at k, full range [0, n].
inline BirthDeathSpec complete_graph_spec(std::uint32_t n, double lam) {
  if (n < 2) throw std::invalid_argument("complete_graph_spec: need n >= 2");
  if (!(lam > 0.0)) throw std::invalid_argument("complete_graph_spec: need lam > 0");
  BirthDeathSpec spec;
  spec.k0 = 0;
  spec.k1 = n;
  const double scale = lam / static_cast<double>(n);
  spec.birth_rate = [scale, n](std::uint32_t k) {
    return scale * static_cast<double>(k) * static_cast<double>(n - k);
  };
  return spec;
}

/// The reusable extinction-time inequality: given per-size cut lower bounds
/// M_k >= 1 on [k0, k1), E[T] >= (1/k1) prod_{k=k0+1}^{k1-1} tau*M_k / k.
inline LogNumber proposition_lower_bound(double tau,
                                         const std::function<std::uint64_t(std::uint32_t)>& m,
                                         std::uint32_t k0, std::uint32_t k1) {
  if (!(tau > 0.0)) throw std::invalid_argument("proposition_lower_bound: need tau > 0");
  if (k0 == 0 || k0 >= k1) throw std::invalid_argument("proposition_lower_bound: need 0 < k0 < k1");
  for (std::uint32_t k = k0; k < k1; ++k)
    if (m(k) < 1)
      throw std::invalid_argument("proposition_lower_bound: M_k must be >= 1 on [k0, k1) "
                                  "(violated at k = " +
                                  std::to_string(k) + ")");
  double acc = -std::log(static_cast<double>(k1));
  for (std::uint32_t k = k0 + 1; k < k1; ++k)
    acc += std::log(tau) + std::log(static_cast<double>(m(k))) -
           std::log(static_cast<double>(k));
  return LogNumber::from_log(acc);
}

}  // namespace cpb
