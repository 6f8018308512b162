#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "cpb/rng.hpp"

namespace cpb {

namespace pairing_detail {

inline double log_choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<double>::infinity();
  return std::lgamma(static_cast<double>(n) + 1.0) - std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

}  // namespace pairing_detail

/// Law of the number of mixed pairs when n1 red and n2 white stubs are
/// matched uniformly at random (one stub left unmatched if the total is odd).
struct PairingLaw {
  std::uint64_t n1 = 0;
  std::uint64_t n2 = 0;
  std::map<std::uint64_t, double> pmf;

  /// P(L <= l).
  double cdf(std::uint64_t l) const {
    double acc = 0.0;
    for (const auto& [support, p] : pmf) {
      if (support > l) break;
      acc += p;
    }
    return acc;
  }
};

/// Exact mixed-pair probabilities. Three parity cases: total even (n1 - l
/// must be even), total odd with n1 - l even, total odd with n1 - l odd.
/// Everything runs through log-gamma so large stub counts do not overflow.
inline PairingLaw mixed_pair_pmf(std::uint64_t n1, std::uint64_t n2) {
  if (n1 + n2 < 2) throw std::invalid_argument("mixed_pair_pmf: need n1 + n2 >= 2");
  using pairing_detail::log_choose;
  const std::uint64_t total = n1 + n2;
  const bool even = total % 2 == 0;
  const std::uint64_t half = even ? total / 2 : (total - 1) / 2;
  const double log_denominator = log_choose(total, n1);

  PairingLaw law;
  law.n1 = n1;
  law.n2 = n2;
  const std::uint64_t l_max = std::min(n1, n2);
  for (std::uint64_t l = 0; l <= l_max; ++l) {
    const bool red_parity_even = (n1 - l) % 2 == 0;
    double log_p;
    if (even) {
      if (!red_parity_even) continue;
      log_p = l * std::log(2.0) + log_choose(half, l) + log_choose(half - l, (n1 - l) / 2) -
              log_denominator;
    } else if (red_parity_even) {
      if (half < l) continue;
      log_p = l * std::log(2.0) + log_choose(half, l) + log_choose(half - l, (n1 - l) / 2) -
              log_denominator;
    } else {
      if (half < l) continue;
      log_p = l * std::log(2.0) + log_choose(half, l) + log_choose(half - l, (n1 - l - 1) / 2) -
              log_denominator;
    }
    if (std::isinf(log_p)) continue;
    law.pmf[l] = std::exp(log_p);
  }
  return law;
}

/// One draw of the mixed-pair count via an explicit uniform matching.
inline std::uint64_t simulate_pairing(std::uint64_t n1, std::uint64_t n2, RngStream& rng) {
  if (n1 + n2 < 2) throw std::invalid_argument("simulate_pairing: need n1 + n2 >= 2");
  std::vector<std::uint8_t> colors(n1 + n2, 0);
  for (std::uint64_t i = 0; i < n1; ++i) colors[i] = 1;
  rng.shuffle(colors.data(), colors.size());
  std::uint64_t mixed = 0;
  for (std::size_t t = 0; t + 1 < colors.size(); t += 2)
    if (colors[t] != colors[t + 1]) ++mixed;
  return mixed;
}

inline std::uint64_t simulate_pairing(std::uint64_t n1, std::uint64_t n2, std::uint64_t seed) {
  RngStream rng(seed, "pairing.sim");
  return simulate_pairing(n1, n2, rng);
}

struct PhiArgs {
  double a1 = 0.0;
  double a2 = 0.0;
  double rho = 0.0;
};

/// x log x with nlg(0) = 0.
inline double nlg(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

/// Exponential decay rate of the left tail of the mixed-pair count at stub
/// densities (a1, a2) and link density rho. Zero on and below the boundary
/// a1 a2 = rho (a1 + a2); clamped there so roundoff never produces a
/// negative rate.
inline double phi(const PhiArgs& args) {
  const double a1 = args.a1, a2 = args.a2, rho = args.rho;
  if (!(a1 >= 0.0) || !(a2 >= 0.0) || !(rho >= 0.0) || !std::isfinite(a1) ||
      !std::isfinite(a2) || !std::isfinite(rho))
    throw std::invalid_argument("phi: arguments must be finite and nonnegative");
  if (a1 * a2 < rho * (a1 + a2)) return 0.0;
  const double value = 0.5 * nlg(a1 + a2) + 0.5 * nlg(std::max(a1 - rho, 0.0)) +
                       0.5 * nlg(std::max(a2 - rho, 0.0)) - nlg(a1) - nlg(a2) + nlg(rho);
  return std::max(value, 0.0);
}

inline double phi(double a1, double a2, double rho) { return phi(PhiArgs{a1, a2, rho}); }

/// Upper bound on P(L_S <= l | n1, n2 stubs): e (l+1)^{3/2} exp(-phi).
inline double tail_bound(std::uint64_t n1, std::uint64_t n2, std::uint64_t l) {
  const double decay = phi(static_cast<double>(n1), static_cast<double>(n2),
                           static_cast<double>(l));
  return std::exp(1.0 + 1.5 * std::log(static_cast<double>(l) + 1.0) - decay);
}

}  // namespace cpb
