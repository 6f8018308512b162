// Acceptance suite: runs each numbered criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failing criteria.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "cpb/birth_death.hpp"
#include "cpb/bounds_cm.hpp"
#include "cpb/bounds_er.hpp"
#include "cpb/contact.hpp"
#include "cpb/graph.hpp"
#include "cpb/pairing.hpp"
#include "cpb/rng.hpp"
#include "oracles.hpp"

using namespace cpb;

namespace {

int failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %2d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* format, ...) {
  va_list args;
  va_start(args, format);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, format, args);
  va_end(args);
  return buf;
}

// 1. Exact hitting times for K_N, lambda = 2: (1/N) log H_N approaches
//    log 2 - 1/2 monotonically, within 0.03 at N = 800, in under a second.
void criterion_1() {
  const auto t0 = std::chrono::steady_clock::now();
  const double limit = std::log(2.0) - 0.5;
  std::vector<double> gaps;
  double v800 = 0.0;
  for (std::uint32_t n : {100u, 200u, 400u, 800u}) {
    auto ht = expected_hitting_times(complete_graph_spec(n, 2.0));
    const double v = ht.at(n).log() / static_cast<double>(n);
    gaps.push_back(std::abs(v - limit));
    if (n == 800) v800 = v;
  }
  const double elapsed = seconds_since(t0);
  bool monotone = true;
  for (std::size_t i = 1; i < gaps.size(); ++i) monotone = monotone && gaps[i] < gaps[i - 1];
  const bool pass = monotone && gaps.back() <= 0.03 && elapsed < 1.0;
  report(1, pass,
         fmt("complete-graph limit: (1/800) log H = %.5f vs %.5f, gap %.5f (<= 0.03), "
             "monotone=%d, %.3fs (< 1s)",
             v800, limit, gaps.back(), monotone ? 1 : 0, elapsed));
}

// 2. Simulator vs exact birth-death oracle on K_30, lambda = 0.8.
void criterion_2() {
  const auto t0 = std::chrono::steady_clock::now();
  auto g = gen_erdos_renyi(30, 1.0, 1);
  ContactConfig cfg;
  cfg.tau = 0.8 / 30.0;
  cfg.seed = 2030;
  auto est = estimate_mean_extinction(g, cfg, 10000, 0);
  const double exact = expected_hitting_times(complete_graph_spec(30, 0.8)).at(30).value();
  const double elapsed = seconds_since(t0);
  const bool pass =
      est.has_mean && std::abs(est.mean - exact) <= 3.0 * est.stderr_ && elapsed < 30.0;
  report(2, pass,
         fmt("K30 simulator vs exact: mc %.4f +- %.4f, exact %.4f, |diff| %.4f <= %.4f, "
             "%.1fs (< 30s)",
             est.mean, est.stderr_, exact, std::abs(est.mean - exact), 3.0 * est.stderr_,
             elapsed));
}

// 3. Hitting-time sandwich for 100 randomized specs plus the hand-solved chain.
void criterion_3() {
  RngStream rng(303, "acceptance.sandwich");
  bool sandwich = true;
  for (int trial = 0; trial < 100 && sandwich; ++trial) {
    BirthDeathSpec spec;
    spec.k0 = 1 + static_cast<std::uint32_t>(rng.next_below(20));
    spec.k1 = spec.k0 + 2 + static_cast<std::uint32_t>(rng.next_below(59));
    auto rates = std::make_shared<std::vector<double>>();
    for (std::uint32_t k = 0; k <= spec.k1; ++k)
      rates->push_back(0.1 + 9.9 * rng.next_double());
    spec.birth_rate = [rates](std::uint32_t k) { return (*rates)[k]; };
    auto ht = expected_hitting_times(spec);
    auto lower = hitting_lower_bound(spec);
    auto upper = hitting_upper_bound(spec);
    for (std::uint32_t k = spec.k0 + 1; k <= spec.k1; ++k)
      sandwich = sandwich && lower <= ht.at(k) && ht.at(k) <= upper;
  }

  BirthDeathSpec chain;
  chain.k0 = 0;
  chain.k1 = 2;
  chain.birth_rate = [](std::uint32_t) { return 1.0; };
  auto h = expected_hitting_times(chain);
  const double h1 = h.at(1).value(), h2 = h.at(2).value();
  const bool hand = std::abs(h1 - 1.5) <= 1.5e-12 && std::abs(h2 - 2.0) <= 2e-12;
  report(3, sandwich && hand,
         fmt("sandwich on 100 random specs=%d; hand chain H1=%.15f H2=%.15f (1e-12)",
             sandwich ? 1 : 0, h1, h2));
}

// 4. Pairing law: normalization to 1e-10 for n1+n2 <= 500, exact enumeration
//    match to 1e-12 for n1+n2 <= 12, chi-square fit at (20, 30).
void criterion_4() {
  double worst_sum_err = 0.0;
  for (std::uint32_t total = 2; total <= 500; ++total)
    for (std::uint32_t n1 = 0; n1 <= total; ++n1) {
      auto law = mixed_pair_pmf(n1, total - n1);
      double sum = 0.0;
      for (auto& [l, p] : law.pmf) sum += p;
      worst_sum_err = std::max(worst_sum_err, std::abs(sum - 1.0));
    }

  double worst_enum_err = 0.0;
  for (std::uint32_t total = 2; total <= 12; ++total)
    for (std::uint32_t n1 = 0; n1 <= total; ++n1) {
      auto law = mixed_pair_pmf(n1, total - n1);
      auto oracle = oracles::enumerate_mixed_pairs(n1, total - n1);
      for (auto& [l, p] : oracle) {
        const double got = law.pmf.count(l) ? law.pmf.at(l) : 0.0;
        worst_enum_err = std::max(worst_enum_err, std::abs(got - p));
      }
      for (auto& [l, p] : law.pmf)
        if (!oracle.count(l)) worst_enum_err = std::max(worst_enum_err, p);
    }

  auto law = mixed_pair_pmf(20, 30);
  RngStream rng(404, "acceptance.gof");
  const int reps = 100000;
  std::map<std::uint64_t, int> counts;
  for (int i = 0; i < reps; ++i) ++counts[simulate_pairing(20, 30, rng)];
  std::vector<double> expected, observed;
  for (auto& [l, p] : law.pmf) {
    const double e = p * reps;
    const double o = counts.count(l) ? counts[l] : 0;
    if (!expected.empty() && (e < 5.0 || expected.back() < 5.0)) {
      expected.back() += e;
      observed.back() += o;
    } else {
      expected.push_back(e);
      observed.push_back(o);
    }
  }
  double chi2 = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i)
    chi2 += (observed[i] - expected[i]) * (observed[i] - expected[i]) / expected[i];
  const double critical =
      oracles::chi_square_quantile(static_cast<double>(expected.size() - 1), 0.99);

  const bool pass = worst_sum_err <= 1e-10 && worst_enum_err <= 1e-12 && chi2 < critical;
  report(4, pass,
         fmt("pairing law: max |sum-1| %.2e (1e-10), max enum err %.2e (1e-12), "
             "chi2 %.2f < %.2f at 0.01",
             worst_sum_err, worst_enum_err, chi2, critical));
}

// 5. Tail bound dominates the exact conditional CDF on the full grid
//    n1, n2 <= 100, all l, in under a minute.
void criterion_5() {
  const auto t0 = std::chrono::steady_clock::now();
  bool dominated = true;
  double tightest = 1e300;
  for (std::uint32_t n1 = 0; n1 <= 100 && dominated; ++n1)
    for (std::uint32_t n2 = (n1 < 2 ? 2 - n1 : 0); n2 <= 100 && dominated; ++n2) {
      auto law = mixed_pair_pmf(n1, n2);
      double cdf = 0.0;
      auto it = law.pmf.begin();
      for (std::uint64_t l = 0; l <= std::min(n1, n2); ++l) {
        while (it != law.pmf.end() && it->first <= l) cdf += (it++)->second;
        const double bound = tail_bound(n1, n2, l);
        tightest = std::min(tightest, bound - cdf);
        if (bound < cdf) {
          dominated = false;
          break;
        }
      }
    }
  const double elapsed = seconds_since(t0);
  report(5, dominated && elapsed < 60.0,
         fmt("tail bound >= exact CDF on the full grid n1,n2 <= 100: %d, min slack %.3e, "
             "%.1fs (< 60s)",
             dominated ? 1 : 0, tightest, elapsed));
}

// 6. phi identities: scaling to 1e-9 relative, phi(a,a;0) = a log 2 to 1e-12,
//    nonincreasing in rho.
void criterion_6() {
  RngStream rng(606, "acceptance.phi");
  double worst_scale = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double a1 = 0.05 + 5.0 * rng.next_double();
    const double a2 = 0.05 + 5.0 * rng.next_double();
    const double rho = rng.next_double() * a1 * a2 / (a1 + a2) * 1.5;
    const double n = 1.0 + 40.0 * rng.next_double();
    const double lhs = phi(a1 * n, a2 * n, rho * n);
    const double rhs = n * phi(a1, a2, rho);
    const double denom = std::max(1e-12, std::abs(rhs));
    worst_scale = std::max(worst_scale, std::abs(lhs - rhs) / denom);
  }

  double worst_diag = 0.0;
  for (double a : {0.01, 0.5, 1.0, 3.0, 17.0, 123.0}) {
    const double expected = a * std::log(2.0);
    worst_diag = std::max(worst_diag, std::abs(phi(a, a, 0.0) - expected) /
                                          std::max(1.0, expected));
  }

  bool monotone = true;
  for (int trial = 0; trial < 100; ++trial) {
    const double a1 = 0.1 + 8.0 * rng.next_double();
    const double a2 = 0.1 + 8.0 * rng.next_double();
    double prev = phi(a1, a2, 0.0);
    for (int i = 1; i <= 100; ++i) {
      const double rho = 1.3 * a1 * a2 / (a1 + a2) * i / 100.0;
      const double cur = phi(a1, a2, rho);
      monotone = monotone && cur <= prev + 1e-12;
      prev = cur;
    }
  }

  const bool pass = worst_scale <= 1e-9 && worst_diag <= 1e-12 && monotone;
  report(6, pass,
         fmt("phi identities: scaling rel err %.2e (1e-9), diagonal err %.2e (1e-12), "
             "monotone in rho=%d",
             worst_scale, worst_diag, monotone ? 1 : 0));
}

// 7. Psi optimizer against the closed forms.
void criterion_7() {
  const double log2 = std::log(2.0);
  double worst = 0.0;
  for (auto dist :
       {DegreeDistribution::constant(4), DegreeDistribution::poisson(3.0),
        DegreeDistribution::empirical({0.0, 0.2, 0.0, 0.5, 0.0, 0.0, 0.3})}) {
    const double closed = -dist.cgf(-0.5 * log2);
    const double got = psi(dist, PsiQuery{0.5, 0.0, std::nullopt}).value;
    worst = std::max(worst, std::abs(got - closed));
  }

  double worst_const = 0.0;
  for (double gamma = 0.1; gamma < 0.95; gamma += 0.1) {
    const double got = psi(DegreeDistribution::constant(4), PsiQuery{gamma, 0.0, std::nullopt}).value;
    worst_const = std::max(worst_const, std::abs(got - 2.0 * entropy(gamma)));
  }

  PsiQuery q;
  q.gamma = 0.4;
  q.lambda_frac = 0.5;
  const double poisson_err =
      std::abs(psi(DegreeDistribution::poisson(5.0), q).value - psi_poisson_closed(5.0, 0.4, 0.5));

  const bool pass = worst <= 1e-6 && worst_const <= 1e-6 && poisson_err <= 1e-6;
  report(7, pass,
         fmt("Psi optimizer vs closed forms: |Psi(1/2,0)+log E| %.2e, const-degree %.2e, "
             "Poisson %.2e (all 1e-6)",
             worst, worst_const, poisson_err));
}

// 8. Rate function: Poisson numeric vs closed form, zero at the mean,
//    convexity midpoint test.
void criterion_8() {
  const double mu = 3.0;
  RateFunction rate(DegreeDistribution::poisson(mu));
  double worst = 0.0;
  for (double x = 0.1; x <= 3.0 * mu + 1e-9; x += 0.01) {
    const double closed = x * std::log(x / mu) - x + mu;
    worst = std::max(worst, std::abs(rate(x) - closed));
  }

  double worst_mean = 0.0;
  auto empirical = DegreeDistribution::empirical({0.0, 0.2, 0.0, 0.5, 0.0, 0.0, 0.3});
  for (auto dist : {DegreeDistribution::constant(5), DegreeDistribution::poisson(3.0), empirical})
    worst_mean = std::max(worst_mean, std::abs(rate_function(dist, dist.mean())));

  bool convex = true;
  for (auto dist : {DegreeDistribution::poisson(4.0), empirical}) {
    RateFunction r(dist);
    const double a = dist.support_min() + 0.2;
    const double b = std::isfinite(dist.support_max()) ? dist.support_max() - 0.2
                                                       : 3.0 * dist.mean();
    for (int i = 0; i + 2 <= 50; ++i) {
      const double x = a + (b - a) * i / 50;
      const double y = a + (b - a) * (i + 2) / 50;
      convex = convex && r(0.5 * (x + y)) <= 0.5 * (r(x) + r(y)) + 1e-9;
    }
  }

  const bool pass = worst <= 1e-8 && worst_mean <= 1e-10 && convex;
  report(8, pass,
         fmt("rate function: Poisson closed-form err %.2e (1e-8), R(E[D]) %.2e (1e-10), "
             "convex=%d",
             worst, worst_mean, convex ? 1 : 0));
}

// 9. Threshold constants at printed precision; sigma tau0 strictly decreasing.
void criterion_9() {
  const double poisson_threshold = std::log(4.0) / (2.0 - std::sqrt(2.0));
  const bool t1 = std::abs(poisson_threshold - 2.36) < 0.01 &&
                  !metastability_condition(DegreeDistribution::poisson(poisson_threshold - 1e-6))
                       .satisfied &&
                  metastability_condition(DegreeDistribution::poisson(poisson_threshold + 1e-6))
                      .satisfied;

  double lo = 1.0, hi = 2.5;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (metastability_condition(DegreeDistribution::poisson(mid)).conditioned_satisfied)
      hi = mid;
    else
      lo = mid;
  }
  const double conditioned = 0.5 * (lo + hi);
  const bool t2 = std::abs(conditioned - 1.88) < 0.01;

  const double c4sq = 8.0 * std::log(2.0) / (2.0 - std::log(2.0));
  const bool t3 = std::abs(c4sq - 4.24) < 0.01;

  const bool t4 = !metastability_condition(DegreeDistribution::constant(2)).satisfied &&
                  metastability_condition(DegreeDistribution::constant(3)).satisfied;

  bool decreasing = true;
  double prev = 1e300;
  double last = 0.0;
  for (double sigma : {3.0, 10.0, 100.0, 10000.0, 1e8}) {
    last = sigma * tau0_sparse(sigma);
    decreasing = decreasing && last < prev;
    prev = last;
  }
  const bool t5 = decreasing && last < 1.05;

  report(9, t1 && t2 && t3 && t4 && t5,
         fmt("thresholds: poisson %.4f (~2.36)=%d, conditioned %.4f (~1.88)=%d, c4^2 %.4f "
             "(~4.24)=%d, constant d>=3=%d, sigma*tau0 decreasing to %.4f (< 1.05)=%d",
             poisson_threshold, t1 ? 1 : 0, conditioned, t2 ? 1 : 0, c4sq, t3 ? 1 : 0,
             t4 ? 1 : 0, last, t5 ? 1 : 0));
}

// 10. The sparse lemma's exponent inequality on a 10^4-point gamma grid.
void criterion_10() {
  auto G = [](double rho) { return rho * std::log(rho) + 1.0 - rho; };
  bool holds = true;
  double min_margin = 1e300;
  for (double sigma : {3.0, 5.0, 10.0, 100.0}) {
    auto sp = sparse_params(sigma);
    const double width = 1.0 - 2.0 * sp.gamma_sigma;
    for (int i = 0; i < 10000; ++i) {
      const double gamma = sp.gamma_sigma + width * (i + 0.5) / 10000.0;
      const double margin =
          sigma * G(sp.rho(gamma)) * gamma * (1.0 - gamma) - entropy(gamma);
      min_margin = std::min(min_margin, margin);
      holds = holds && margin > 0.0;
    }
  }
  report(10, holds,
         fmt("sparse lemma inequality on 4 x 10^4 grid points: holds=%d, min margin %.3e",
             holds ? 1 : 0, min_margin));
}

// 11. Proposition lower bound vs simulated mean on a seeded ER(20, 0.5).
void criterion_11() {
  const auto t0 = std::chrono::steady_clock::now();
  auto g = gen_erdos_renyi(20, 0.5, 22);
  std::vector<std::uint64_t> cuts(20, 0);
  for (std::uint32_t k = 1; k < 20; ++k) cuts[k] = min_cut_over_size(g, k).cut;
  auto m = [&](std::uint32_t k) { return cuts[k]; };

  // strongest valid instance of the proposition over all windows
  double best_log = -1e300;
  for (std::uint32_t k0 = 1; k0 < 20; ++k0)
    for (std::uint32_t k1 = k0 + 1; k1 <= 20; ++k1)
      best_log = std::max(best_log, proposition_lower_bound(0.4, m, k0, k1).log());
  const double bound = std::exp(best_log);

  ContactConfig cfg;
  cfg.tau = 0.4;
  cfg.seed = 1111;
  auto est = estimate_mean_extinction(g, cfg, 10000, 0);
  const double elapsed = seconds_since(t0);
  const bool pass = est.has_mean && bound <= est.mean + 3.0 * est.stderr_;
  report(11, pass,
         fmt("proposition bound %.2f <= mc mean %.2f + 3 x %.2f on ER(20,0.5) seed 22 "
             "(%.0fs)",
             bound, est.mean, est.stderr_, elapsed));
}

}  // namespace

int main() {
  std::printf("acceptance suite: contact-process metastability toolkit\n");
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (failures == 0)
    std::printf("all 11 criteria passed\n");
  else
    std::printf("%d criteria FAILED\n", failures);
  return failures;
}
