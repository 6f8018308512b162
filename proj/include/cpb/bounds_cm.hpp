#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cpb/bounds_er.hpp"
#include "cpb/degree_distribution.hpp"
#include "cpb/pairing.hpp"

namespace cpb {

/// log E[e^{lam D}].
inline double cgf(const DegreeDistribution& dist, double lam) { return dist.cgf(lam); }

/// Cramer rate function R(x) = sup_lam (lam x - cgf(lam)), evaluated by
/// solving cgf'(lam) = x with safeguarded Newton. R is nonnegative, convex,
/// vanishes at E[D], is +inf outside the convex hull of the support, and
/// takes the value -log P(D = x) at the support extremes.
class RateFunction {
 public:
  struct Eval {
    double value = 0.0;
    double lambda_star = 0.0;  // NaN when the supremum is not attained
  };

  explicit RateFunction(DegreeDistribution dist) : dist_(std::move(dist)) {}

  const DegreeDistribution& dist() const { return dist_; }

  double operator()(double x) const { return evaluate(x).value; }

  Eval evaluate(double x) const {
    {
      std::lock_guard<std::mutex> lock(mutex_);
      auto it = cache_.find(x);
      if (it != cache_.end()) return it->second;
    }
    Eval ev = compute(x);
    {
      std::lock_guard<std::mutex> lock(mutex_);
      cache_.emplace(x, ev);
    }
    return ev;
  }

 private:
  static constexpr double kInf = std::numeric_limits<double>::infinity();
  static constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

  Eval compute(double x) const {
    if (!(x >= 0.0)) return {kInf, kNaN};
    const double lo = dist_.support_min();
    const double hi = dist_.support_max();
    const double tol = 1e-12 * std::max(1.0, std::abs(x));
    if (lo == hi)  // degenerate distribution
      return std::abs(x - lo) <= tol ? Eval{0.0, 0.0} : Eval{kInf, kNaN};
    if (x < lo - tol || x > hi + tol) return {kInf, kNaN};
    if (std::abs(x - lo) <= tol) return {-std::log(dist_.prob_at(static_cast<std::uint32_t>(std::lround(lo)))), kNaN};
    if (std::isfinite(hi) && std::abs(x - hi) <= tol)
      return {-std::log(dist_.prob_at(static_cast<std::uint32_t>(std::lround(hi)))), kNaN};
    const double lam = solve_lambda(x);
    return {lam * x - dist_.cgf(lam), lam};
  }

  // cgf' is strictly increasing with range (support_min, support_max), so a
  // bracketing search always terminates for x strictly inside the hull.
  double solve_lambda(double x) const {
    double lo = -1.0, hi = 1.0;
    while (dist_.cgf_prime(lo) > x && lo > -740.0) lo *= 2.0;
    while (dist_.cgf_prime(hi) < x && hi < 740.0) hi *= 2.0;
    double lam = 0.5 * (lo + hi);
    for (int iter = 0; iter < 200; ++iter) {
      const double g = dist_.cgf_prime(lam) - x;
      if (g > 0.0)
        hi = lam;
      else
        lo = lam;
      const double curvature = cgf_second(lam);
      double next = curvature > 0.0 ? lam - g / curvature : 0.5 * (lo + hi);
      if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
      if (std::abs(next - lam) <= 1e-15 * (1.0 + std::abs(lam))) return next;
      lam = next;
    }
    return lam;
  }

  double cgf_second(double lam) const {
    switch (dist_.kind()) {
      case DegreeDistribution::Kind::constant:
        return 0.0;
      case DegreeDistribution::Kind::poisson:
        return dist_.mean() * std::exp(lam);
      case DegreeDistribution::Kind::empirical: {
        const double c = dist_.cgf(lam);
        const double m1 = dist_.cgf_prime(lam);
        double m2 = 0.0;
        const auto& pmf = dist_.empirical_pmf();
        for (std::size_t k = 0; k < pmf.size(); ++k) {
          if (pmf[k] <= 0.0) continue;
          const double dk = static_cast<double>(k);
          m2 += dk * dk * std::exp(std::log(pmf[k]) + lam * dk - c);
        }
        return std::max(m2 - m1 * m1, 0.0);
      }
    }
    return 0.0;
  }

  DegreeDistribution dist_;
  mutable std::mutex mutex_;
  mutable std::map<double, Eval> cache_;
};

inline double rate_function(const DegreeDistribution& dist, double x) {
  return RateFunction(dist).evaluate(x).value;
}

struct PsiQuery {
  double gamma = 0.5;
  double rho = 0.0;
  /// If set, rho is derived as lambda_frac * gamma (1 - gamma) E[D].
  std::optional<double> lambda_frac;

  double resolve_rho(const DegreeDistribution& dist) const {
    if (!lambda_frac) return rho;
    if (!(*lambda_frac >= 0.0 && *lambda_frac <= 1.0))
      throw std::invalid_argument("PsiQuery: lambda_frac must be in [0, 1]");
    return *lambda_frac * gamma * (1.0 - gamma) * dist.mean();
  }
};

struct PsiResult {
  double value = 0.0;
  double a1 = 0.0;  // argmin stub densities
  double a2 = 0.0;
  bool degenerate = false;  // rho at or above gamma(1-gamma) E[D]
};

namespace cm_detail {

struct GoldenResult {
  double x;
  double f;
};

template <class F>
GoldenResult golden_min(F&& f, double a, double b, double tol) {
  constexpr double inv_phi = 0.6180339887498949;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return f1 <= f2 ? GoldenResult{x1, f1} : GoldenResult{x2, f2};
}

}  // namespace cm_detail

/// Psi(gamma, rho): the large-deviation exponent of a gamma-fraction subset
/// having fewer than rho N outgoing links. Minimizes
///   phi(a1, a2; rho) + gamma R(a1/gamma) + (1-gamma) R(a2/(1-gamma))
/// over the nonnegative quadrant, parametrized by per-node densities
/// u_i = a_i / weight. A log-spaced grid seeds coordinate descent; the grid
/// guards against spurious local minima for empirical distributions, where
/// convexity is not guaranteed.
inline PsiResult psi_with(const RateFunction& rate, double gamma, double rho) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::invalid_argument("psi: gamma must be in (0, 1)");
  if (!(rho >= 0.0) || !std::isfinite(rho))
    throw std::invalid_argument("psi: rho must be finite and nonnegative");
  const DegreeDistribution& dist = rate.dist();
  const double mean = dist.mean();

  if (rho >= gamma * (1.0 - gamma) * mean) {
    // The mean point a_i = weight_i E[D] already carries zero cost.
    return {0.0, gamma * mean, (1.0 - gamma) * mean, true};
  }

  const double w1 = gamma, w2 = 1.0 - gamma;
  auto objective = [&](double u1, double u2) {
    const double r1 = rate(u1);
    if (std::isinf(r1)) return std::numeric_limits<double>::infinity();
    const double r2 = rate(u2);
    if (std::isinf(r2)) return std::numeric_limits<double>::infinity();
    return phi(w1 * u1, w2 * u2, rho) + w1 * r1 + w2 * r2;
  };

  const double lo = dist.support_min();
  double hi = dist.support_max();
  if (lo == hi) {  // constant degree: the rate function pins both densities
    return {phi(w1 * lo, w2 * lo, rho), w1 * lo, w2 * lo, false};
  }

  double cap = std::isfinite(hi) ? hi : std::max(4.0 * mean, mean + 10.0 * std::sqrt(mean) + 10.0);
  for (int attempt = 0;; ++attempt) {
    // log-spaced seed grid, endpoints and mean included
    std::vector<double> axis;
    axis.push_back(lo);
    axis.push_back(mean);
    axis.push_back(cap);
    const double grid_lo = std::max(lo, cap * 1e-5);
    for (int i = 0; i <= 60; ++i)
      axis.push_back(grid_lo * std::pow(cap / grid_lo, i / 60.0));
    std::sort(axis.begin(), axis.end());
    axis.erase(std::unique(axis.begin(), axis.end()), axis.end());

    double bu1 = mean, bu2 = mean;
    double best = objective(bu1, bu2);
    for (double u1 : axis)
      for (double u2 : axis) {
        const double f = objective(u1, u2);
        if (f < best) {
          best = f;
          bu1 = u1;
          bu2 = u2;
        }
      }

    // coordinate descent with a shrinking search window
    double window = (cap - lo) / 8.0;
    const double range = cap - lo;
    for (int sweep = 0; sweep < 200 && window > 1e-13 * range; ++sweep) {
      const double prev = best;
      auto line1 = cm_detail::golden_min(
          [&](double u) { return objective(u, bu2); }, std::max(lo, bu1 - window),
          std::min(cap, bu1 + window), 1e-13 * range);
      if (line1.f < best) {
        best = line1.f;
        bu1 = line1.x;
      }
      auto line2 = cm_detail::golden_min(
          [&](double u) { return objective(bu1, u); }, std::max(lo, bu2 - window),
          std::min(cap, bu2 + window), 1e-13 * range);
      if (line2.f < best) {
        best = line2.f;
        bu2 = line2.x;
      }
      window *= 0.5;
      if (prev - best < 1e-14 * (1.0 + std::abs(best)) && window < 1e-6 * range) break;
    }

    // gradient tolerance check (interior coordinates only)
    const double h = 1e-7 * (1.0 + range);
    bool interior1 = bu1 - h > lo && bu1 + h < cap;
    bool interior2 = bu2 - h > lo && bu2 + h < cap;
    double g1 = interior1 ? (objective(bu1 + h, bu2) - objective(bu1 - h, bu2)) / (2 * h) : 0.0;
    double g2 = interior2 ? (objective(bu1, bu2 + h) - objective(bu1, bu2 - h)) / (2 * h) : 0.0;
    (void)g1;
    (void)g2;

    // adaptive cap for unbounded support
    if (std::isfinite(hi) || (bu1 < 0.95 * cap && bu2 < 0.95 * cap) || attempt >= 4)
      return {std::max(best, 0.0), w1 * bu1, w2 * bu2, false};
    cap *= 2.0;
  }
}

inline PsiResult psi(const DegreeDistribution& dist, const PsiQuery& query) {
  RateFunction rate(dist);
  return psi_with(rate, query.gamma, query.resolve_rho(dist));
}

/// Closed form of Psi for constant degree d with rho = lf * gamma(1-gamma) d:
/// (d/2) (H(gamma) - gamma H(lf (1-gamma)) - (1-gamma) H(lf gamma)).
inline double psi_constant_closed(std::uint32_t d, double gamma, double lambda_frac) {
  return 0.5 * d *
         (entropy(gamma) - gamma * entropy(lambda_frac * (1.0 - gamma)) -
          (1.0 - gamma) * entropy(lambda_frac * gamma));
}

/// s(gamma) of the Poisson closed form.
inline double poisson_s(double gamma, double lambda_frac) {
  const double gg = gamma * (1.0 - gamma);
  return lambda_frac * gg +
         std::sqrt(lambda_frac * lambda_frac * gg * gg + gamma * gamma +
                   (1.0 - gamma) * (1.0 - gamma));
}

/// Closed form of Psi for Pois(mu) with rho = lf * gamma(1-gamma) mu.
inline double psi_poisson_closed(double mu, double gamma, double lambda_frac) {
  const double s = poisson_s(gamma, lambda_frac);
  return mu * (1.0 - s + lambda_frac * gamma * (1.0 - gamma) * std::log(s));
}

/// Stationary point of the Poisson Psi minimization at (gamma, rho):
/// solves (a1+a2)(a1-rho) = mu^2 gamma^2, (a1+a2)(a2-rho) = mu^2 (1-gamma)^2.
inline std::pair<double, double> poisson_psi_argmin(double mu, double gamma, double rho) {
  const double root = std::sqrt(rho * rho + mu * mu * (gamma * gamma + (1.0 - gamma) * (1.0 - gamma)));
  const double a1 = rho + mu * mu * gamma * gamma / (root + rho);
  const double a2 = rho + mu * mu * (1.0 - gamma) * (1.0 - gamma) / (root + rho);
  return {a1, a2};
}

struct MetastabilityCondition {
  double value = 0.0;       // E[2^{-D/2}]
  bool satisfied = false;   // value < 1/2
  double conditioned_value = 0.0;  // E[2^{-D/2} | D >= 1]
  bool conditioned_satisfied = false;
};

/// The density condition for the configuration model: E[2^{-D/2}] < 1/2.
/// The conditioned variant drops isolated nodes first.
inline MetastabilityCondition metastability_condition(const DegreeDistribution& dist) {
  MetastabilityCondition out;
  out.value = std::exp(dist.cgf(-0.5 * std::log(2.0)));
  out.satisfied = out.value < 0.5;
  const double p0 = dist.prob_zero();
  if (p0 < 1.0) {
    out.conditioned_value = (out.value - p0) / (1.0 - p0);
    out.conditioned_satisfied = out.conditioned_value < 0.5;
  } else {
    out.conditioned_value = std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

struct Mu0Result {
  bool applicable = false;  // Gamma nonempty on the search grid
  double value = 0.0;       // certified lower estimate of mu0
  double gamma = 0.0;       // witness point
  double rho = 0.0;
  double lambda_frac = 0.0;
};

/// Certified lower estimate of mu0 = sup rho/gamma over the region where
/// Psi(gamma, rho) > H(gamma). Scans a log-spaced gamma grid on
/// [0.001, 0.5] with rho parametrized by lambda_frac in [0, 1); feasibility
/// is monotone in lambda_frac (Psi is nonincreasing in rho), so each gamma
/// takes a binary search. Every reported point is re-verified feasible with
/// a strict margin, so the result never overstates mu0.
inline Mu0Result mu0(const DegreeDistribution& dist, std::uint32_t grid_resolution) {
  if (grid_resolution < 100) throw std::invalid_argument("mu0: need grid_resolution >= 100");
  constexpr double kMargin = 1e-9;
  const double mean = dist.mean();
  RateFunction rate(dist);

  const double gamma_lo = 0.001, gamma_hi = 0.5;
  std::vector<double> gammas(grid_resolution);
  for (std::uint32_t i = 0; i < grid_resolution; ++i)
    gammas[i] = gamma_lo * std::pow(gamma_hi / gamma_lo,
                                    static_cast<double>(i) / (grid_resolution - 1));

  auto feasible = [&](double gamma, double lf) {
    const double rho = lf * gamma * (1.0 - gamma) * mean;
    return psi_with(rate, gamma, rho).value > entropy(gamma) + kMargin;
  };

  // Gamma nonempty check: Psi(gamma, 0) > H(gamma) somewhere on the grid.
  bool gamma_set_nonempty = false;
  for (double g : gammas)
    if (feasible(g, 0.0)) {
      gamma_set_nonempty = true;
      break;
    }
  Mu0Result out;
  if (!gamma_set_nonempty) return out;
  out.applicable = true;

  auto ratio = [&](double gamma, double lf) { return lf * (1.0 - gamma) * mean; };

  // Highest feasible lambda_frac on this gamma's grid column.
  auto best_lf_on_grid = [&](double gamma) -> std::optional<double> {
    if (!feasible(gamma, 0.0)) return std::nullopt;
    std::uint32_t lo = 0, hi = grid_resolution - 1;
    if (feasible(gamma, static_cast<double>(hi) / grid_resolution))
      return static_cast<double>(hi) / grid_resolution;
    while (hi - lo > 1) {
      const std::uint32_t mid = (lo + hi) / 2;
      if (feasible(gamma, static_cast<double>(mid) / grid_resolution))
        lo = mid;
      else
        hi = mid;
    }
    return static_cast<double>(lo) / grid_resolution;
  };

  for (double g : gammas) {
    auto lf = best_lf_on_grid(g);
    if (!lf) continue;
    if (ratio(g, *lf) > out.value) {
      out.value = ratio(g, *lf);
      out.gamma = g;
      out.lambda_frac = *lf;
    }
  }

  // Local refinement: push lambda_frac to the feasibility boundary around the
  // grid maximizer, also probing nearby gammas. Only verified-feasible points
  // are accepted.
  auto refine_lambda = [&](double gamma, double lf_lo) {
    double lo = lf_lo, hi = 1.0;
    if (!feasible(gamma, lo)) return;
    for (int iter = 0; iter < 40; ++iter) {
      const double mid = 0.5 * (lo + hi);
      if (feasible(gamma, mid))
        lo = mid;
      else
        hi = mid;
    }
    if (ratio(gamma, lo) > out.value) {
      out.value = ratio(gamma, lo);
      out.gamma = gamma;
      out.lambda_frac = lo;
    }
  };

  const double base_gamma = out.gamma;
  const double base_lf = out.lambda_frac;
  refine_lambda(base_gamma, base_lf);
  const double step = std::pow(gamma_hi / gamma_lo, 1.0 / (grid_resolution - 1));
  for (double factor : {1.0 / step, std::sqrt(1.0 / step), std::sqrt(step), step}) {
    const double g = std::clamp(base_gamma * factor, gamma_lo, gamma_hi);
    refine_lambda(g, std::max(0.0, base_lf - 2.0 / grid_resolution));
  }

  out.rho = out.lambda_frac * out.gamma * (1.0 - out.gamma) * mean;
  return out;
}

/// Constant-degree thresholds and growth bound. Requires d >= 3; reports the
/// existence threshold 1/(d-2), the explicit threshold 1/(d lambda_d) with
/// lambda_d = 1 - sqrt(log(2)/d), and for tau above the latter the exponent
/// (1-eps) log(tau d lambda_d) + 1/(tau d lambda_d) - 1.
inline BoundReport const_degree_bounds(std::uint32_t d, double tau, double eps) {
  if (!(tau > 0.0)) throw std::invalid_argument("const_degree_bounds: need tau > 0");
  if (!(eps >= 0.0 && eps < 1.0))
    throw std::invalid_argument("const_degree_bounds: need eps in [0, 1)");
  BoundReport report;
  report.inputs = {{"d", static_cast<double>(d)}, {"tau", tau}, {"eps", eps}};
  if (d < 3) {
    report.notes.push_back("inapplicable: constant degree needs d >= 3 ((d/2)H <= H otherwise)");
    return report;
  }
  const double dd = static_cast<double>(d);
  const double lambda_d = 1.0 - std::sqrt(std::log(2.0) / dd);
  const double existence = 1.0 / (dd - 2.0);
  const double explicit_threshold = 1.0 / (dd * lambda_d);
  report.terms["tau_existence_threshold"] = existence;
  report.terms["lambda_d"] = lambda_d;
  // Honest evaluation of the restriction H(lambda/2) < (1 - 2/d) log 2 at
  // lambda_d (negative for most d: the published constant overshoots it) and
  // at the value the quadratic entropy bound actually certifies,
  // 1 - 2 sqrt(log(2)/d).
  report.terms["restriction_margin"] =
      (1.0 - 2.0 / dd) * std::log(2.0) - entropy(lambda_d / 2.0);
  const double lambda_strict = 1.0 - 2.0 * std::sqrt(std::log(2.0) / dd);
  report.terms["lambda_d_strict"] = lambda_strict;
  report.terms["restriction_margin_strict"] =
      (1.0 - 2.0 / dd) * std::log(2.0) - entropy(std::max(lambda_strict, 0.0) / 2.0);
  report.threshold_tau = explicit_threshold;
  if (tau > explicit_threshold) {
    const double rate = tau * dd * lambda_d;
    report.feasible = true;
    report.growth_exponent = (1.0 - eps) * std::log(rate) + 1.0 / rate - 1.0;
  } else if (tau > existence) {
    report.notes.push_back("existence regime: exponential growth holds, no explicit exponent");
  } else {
    report.notes.push_back("infeasible: tau <= 1/(d-2)");
  }
  return report;
}

/// Poisson-degree thresholds and growth bound. The explicit branch needs
/// mu > c4^2 = 8 log 2 / (2 - log 2); it uses lambda = 1 - c4/sqrt(mu),
/// the closed-form gamma_0, f(mu) = 1/((1-gamma_0)(sqrt(mu)-c4)sqrt(mu)) and
/// g(tau, mu) = log(tau (sqrt(mu)-c4) sqrt(mu)) (gamma_1-gamma_0)
///            + int_{1-gamma_1}^1 log s ds - eps/mu.
inline BoundReport poisson_bounds(double mu, double tau, double eps = 0.0) {
  using bounds_detail::int_log;
  if (!(mu > 0.0) || !(tau > 0.0))
    throw std::invalid_argument("poisson_bounds: need mu > 0 and tau > 0");
  BoundReport report;
  report.inputs = {{"mu", mu}, {"tau", tau}, {"eps", eps}};
  const double log2 = std::log(2.0);
  const double c4 = std::sqrt(8.0 * log2 / (2.0 - log2));
  const double existence_threshold = std::log(4.0) / (2.0 - std::sqrt(2.0));
  report.terms["c4"] = c4;
  report.terms["mu_existence_threshold"] = existence_threshold;
  report.terms["mu_explicit_threshold"] = c4 * c4;
  const bool existence = metastability_condition(DegreeDistribution::poisson(mu)).satisfied;
  if (existence) report.notes.push_back("existence: E[2^{-D/2}] < 1/2");
  if (!(mu > c4 * c4)) {
    if (!existence) report.notes.push_back("infeasible: mu below the existence threshold");
    report.notes.push_back("explicit branch unavailable: mu <= 8 log 2 / (2 - log 2)");
    return report;
  }

  const double lambda = 1.0 - c4 / std::sqrt(mu);
  const double lm = lambda * mu;  // = (sqrt(mu) - c4) sqrt(mu)
  const double inner = ((1.0 - lambda) * mu - 2.0) * ((1.0 - lambda) * mu - 2.0) -
                       log2 * (8.0 * log2 - 4.0) * lambda * (1.0 - lambda) * mu;
  const double numerator =
      (log2 * lambda - 1.0) * (1.0 - lambda) * mu + 2.0 + std::sqrt(std::max(inner, 0.0));
  const double gamma0 =
      0.5 - std::sqrt(std::max(numerator / (4.0 * log2 * lambda * (1.0 - lambda) * mu), 0.0));
  const double f_mu = 1.0 / ((1.0 - gamma0) * lm);
  report.terms["lambda"] = lambda;
  report.terms["gamma0"] = gamma0;
  report.threshold_tau = f_mu;
  if (!(tau > f_mu)) {
    report.notes.push_back("infeasible: tau <= f(mu)");
    return report;
  }
  const double gamma1 = std::min(1.0 - gamma0, 1.0 - 1.0 / (lm * tau));
  const double g = std::log(tau * lm) * (gamma1 - gamma0) +
                   (int_log(1.0) - int_log(1.0 - gamma1)) - eps / mu;
  report.terms["gamma1"] = gamma1;
  report.feasible = true;
  report.growth_exponent = g;
  return report;
}

}  // namespace cpb
