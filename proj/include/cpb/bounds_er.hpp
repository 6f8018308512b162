#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cpb {

/// Evaluated threshold/growth-rate report. growth_exponent is only present
/// when the parameters are feasible; intermediate quantities land in terms.
struct BoundReport {
  std::map<std::string, double> inputs;
  std::optional<double> threshold_tau;
  std::optional<double> growth_exponent;
  bool feasible = false;
  std::map<std::string, double> terms;
  std::vector<std::string> notes;
};

/// Binary entropy in nats: -g log g - (1-g) log(1-g), zero at the endpoints.
inline double entropy(double gamma) {
  if (!(gamma >= 0.0 && gamma <= 1.0))
    throw std::invalid_argument("entropy: argument must be in [0, 1]");
  double acc = 0.0;
  if (gamma > 0.0) acc -= gamma * std::log(gamma);
  if (gamma < 1.0) acc -= (1.0 - gamma) * std::log(1.0 - gamma);
  return acc;
}

namespace bounds_detail {

inline void check_binomial_params(std::uint64_t n, double p, double rho) {
  if (n == 0) throw std::invalid_argument("chernoff bound: need n >= 1");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("chernoff bound: need p in (0, 1)");
  if (!(rho > 0.0 && rho < 1.0)) throw std::invalid_argument("chernoff bound: need rho in (0, 1)");
}

/// Antiderivative of log s with F(0) = 0.
inline double int_log(double s) { return s > 0.0 ? s * std::log(s) - s : 0.0; }

}  // namespace bounds_detail

/// Chernoff-Hoeffding bound on P(Bin(n, p) <= rho * n p): exp(-n D(rho p || p))
/// with D the Bernoulli Kullback-Leibler divergence.
inline double chernoff_lower_tail(std::uint64_t n, double p, double rho) {
  bounds_detail::check_binomial_params(n, p, rho);
  const double q = rho * p;
  const double kl = q * std::log(rho) + (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
  return std::exp(-static_cast<double>(n) * kl);
}

/// The weaker dense-regime variant exp(-(1/2)(1-rho)^2 n p).
inline double chernoff_lower_tail_dense(std::uint64_t n, double p, double rho) {
  bounds_detail::check_binomial_params(n, p, rho);
  return std::exp(-0.5 * (1.0 - rho) * (1.0 - rho) * static_cast<double>(n) * p);
}

/// Dense Erdos-Renyi growth exponents. With lambda = N p tau, metastability
/// needs lambda > 1; the per-N exponent is (1 - eps) log(lambda) and the
/// constant-lambda refinement adds the 1/lambda - 1 correction.
inline BoundReport dense_growth_exponent(std::uint64_t n, double p, double tau, double eps) {
  if (n == 0 || !(p > 0.0 && p <= 1.0) || !(tau > 0.0))
    throw std::invalid_argument("dense_growth_exponent: invalid parameters");
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("dense_growth_exponent: need eps in [0, 1)");
  const double lambda = static_cast<double>(n) * p * tau;
  BoundReport report;
  report.inputs = {{"n", static_cast<double>(n)}, {"p", p}, {"tau", tau}, {"eps", eps}};
  report.threshold_tau = 1.0 / (static_cast<double>(n) * p);
  report.terms["lambda"] = lambda;
  report.terms["case1_exponent"] = (1.0 - eps) * std::log(lambda);
  report.terms["case2_exponent"] = (1.0 - eps) * std::log(lambda) + 1.0 / lambda - 1.0;
  if (lambda <= 1.0) {
    report.notes.push_back("infeasible: N p tau <= 1");
    return report;
  }
  report.feasible = true;
  report.growth_exponent = report.terms["case2_exponent"];
  return report;
}

constexpr double kSparseSigmaFloor = 2.77258872223978123766;  // 4 log 2

/// Derived constants of the sparse lower-bound lemma. Only defined for
/// sigma > 4 log 2; near the floor the square roots sit on the boundary and
/// are clamped at zero instead of going NaN.
struct SparseParams {
  double sigma = 0.0;
  bool feasible = false;
  double zeta = 0.0;         // 1/4 - log(2)/sigma
  double gamma_sigma = 0.0;  // 1/2 - sqrt(zeta)
  double alpha_sigma = 0.0;  // in (0, 2)
  double c = 0.0;            // zeta^sqrt(2 alpha)
  double gamma0 = 0.0;       // 1/2 - sqrt(zeta - zeta^sqrt(2/alpha))

  /// rho(gamma) = (gamma(1-gamma) - log(2)/sigma)^alpha on (gamma_sigma, 1 - gamma_sigma).
  double rho(double gamma) const {
    if (!feasible) throw std::domain_error("SparseParams::rho: sigma <= 4 log 2");
    if (!(gamma > gamma_sigma && gamma < 1.0 - gamma_sigma))
      throw std::invalid_argument("SparseParams::rho: gamma outside (gamma_sigma, 1 - gamma_sigma)");
    const double base = std::max(gamma * (1.0 - gamma) - std::log(2.0) / sigma, 0.0);
    return std::pow(base, alpha_sigma);
  }
};

inline SparseParams sparse_params(double sigma) {
  SparseParams sp;
  sp.sigma = sigma;
  if (!(sigma > kSparseSigmaFloor)) return sp;  // infeasible: darker region
  sp.feasible = true;
  const double log2 = std::log(2.0);
  sp.zeta = 0.25 - log2 / sigma;
  sp.gamma_sigma = 0.5 - std::sqrt(sp.zeta);
  sp.alpha_sigma = 2.0 * std::log(1.0 - 2.0 * std::sqrt(log2 / sigma)) / std::log(sp.zeta);
  sp.c = std::pow(sp.zeta, std::sqrt(2.0 * sp.alpha_sigma));
  const double inner = std::max(sp.zeta - std::pow(sp.zeta, std::sqrt(2.0 / sp.alpha_sigma)), 0.0);
  sp.gamma0 = 0.5 - std::sqrt(inner);
  return sp;
}

/// tau_0(sigma) = 1 / (sigma c (1 - gamma_0)): infection rates above it give
/// exponential extinction times in the sparse regime.
inline double tau0_sparse(double sigma) {
  SparseParams sp = sparse_params(sigma);
  if (!sp.feasible) throw std::domain_error("tau0_sparse: need sigma > 4 log 2");
  return 1.0 / (sigma * sp.c * (1.0 - sp.gamma0));
}

/// Explicit sparse-regime lower bound on (1/N) log E[T_N] for tau above
/// tau_0. The reported exponent is the assembled closed form
///   (g1 - g0) log(tau sigma) + alpha [shifted log integrals] + int_{1-g1}^1 log s ds;
/// the variant that stops the last integral at 1 - gamma_0 (positive for any
/// tau > tau_0) is reported alongside in terms as exponent_tight.
inline BoundReport sparse_growth_exponent(double sigma, double tau) {
  using bounds_detail::int_log;
  BoundReport report;
  report.inputs = {{"sigma", sigma}, {"tau", tau}};
  SparseParams sp = sparse_params(sigma);
  if (!sp.feasible) {
    report.notes.push_back("infeasible: sigma <= 4 log 2");
    return report;
  }
  const double tau0 = 1.0 / (sigma * sp.c * (1.0 - sp.gamma0));
  report.threshold_tau = tau0;
  report.terms = {{"zeta", sp.zeta},
                  {"gamma_sigma", sp.gamma_sigma},
                  {"alpha_sigma", sp.alpha_sigma},
                  {"c", sp.c},
                  {"gamma0", sp.gamma0}};
  if (!(tau > tau0)) {
    report.notes.push_back("infeasible: tau <= tau0(sigma)");
    return report;
  }
  const double gamma1 = std::min(1.0 - sp.gamma0, 1.0 - 1.0 / (tau * sigma * sp.c));
  const double main = (gamma1 - sp.gamma0) * std::log(tau * sigma);
  const double rho_integrals =
      sp.alpha_sigma *
      ((int_log(gamma1 - sp.gamma_sigma) - int_log(sp.gamma0 - sp.gamma_sigma)) +
       (int_log(1.0 - sp.gamma0 - sp.gamma_sigma) - int_log(1.0 - gamma1 - sp.gamma_sigma)));
  const double tail = int_log(1.0) - int_log(1.0 - gamma1);
  const double tail_tight = int_log(1.0 - sp.gamma0) - int_log(1.0 - gamma1);
  report.terms["gamma1"] = gamma1;
  report.terms["main_term"] = main;
  report.terms["rho_integrals"] = rho_integrals;
  report.terms["tail_integral"] = tail;
  report.terms["exponent_tight"] = main + rho_integrals + tail_tight;
  report.feasible = true;
  report.growth_exponent = main + rho_integrals + tail;
  return report;
}

/// Exponential growth rate of E[T_N] for the contact process on K_N with
/// infection rate lam/N: lim (1/N) log E[T_N] = log(lam) + 1/lam - 1 when
/// lam > 1, and zero in the subcritical regime lam <= 1 (extinction times
/// grow subexponentially there). Positive iff lam > 1.
inline double complete_graph_exponent(double lam) {
  if (!(lam > 0.0)) throw std::invalid_argument("complete_graph_exponent: need lam > 0");
  return lam > 1.0 ? std::log(lam) + 1.0 / lam - 1.0 : 0.0;
}

}  // namespace cpb
