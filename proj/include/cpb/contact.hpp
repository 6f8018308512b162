#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "cpb/fenwick.hpp"
#include "cpb/graph.hpp"
#include "cpb/rng.hpp"

namespace cpb {

struct ContactConfig {
  double tau = 0.0;                                     // per-edge infection rate
  std::optional<std::vector<std::uint32_t>> initial;    // nullopt = all nodes infected
  std::optional<double> t_max;                          // censoring horizon
  std::uint64_t seed = 0;
  std::uint64_t audit_interval = 0;  // if > 0, recompute pressures every N events and compare
};

struct ExtinctionSample {
  double time = 0.0;
  bool censored = false;
  std::uint32_t peak_infected = 0;
  std::uint64_t events = 0;
};

namespace contact_detail {

inline void validate(const Graph& g, const ContactConfig& cfg) {
  if (!(cfg.tau >= 0.0) || !std::isfinite(cfg.tau))
    throw std::invalid_argument("ContactConfig: tau must be finite and nonnegative");
  if (cfg.t_max && !(*cfg.t_max > 0.0))
    throw std::invalid_argument("ContactConfig: t_max must be positive");
  if (cfg.initial) {
    if (cfg.initial->empty())
      throw std::invalid_argument("ContactConfig: initial set must be nonempty");
    for (auto v : *cfg.initial)
      if (v >= g.n_nodes())
        throw std::invalid_argument("ContactConfig: initial node out of range");
  }
}

// Weighted node index: linear array scan for small graphs, Fenwick tree
// above the threshold. Both map a uniform r in [0, total) to the first node
// whose cumulative weight exceeds r, so the choice of backend never changes
// a sampled path.
class PressureIndex {
 public:
  static constexpr std::uint32_t kLinearThreshold = 64;

  explicit PressureIndex(std::uint32_t n)
      : n_(n), linear_(n <= kLinearThreshold), fen_(linear_ ? 1 : n) {
    if (linear_) weights_.assign(n, 0);
  }

  void add(std::uint32_t i, std::int64_t delta) {
    if (linear_) {
      weights_[i] += delta;
      total_ += delta;
    } else {
      fen_.add(i, delta);
    }
  }

  std::int64_t total() const { return linear_ ? total_ : fen_.total(); }

  std::int64_t value(std::uint32_t i) const { return linear_ ? weights_[i] : fen_.value(i); }

  std::uint32_t sample(std::uint64_t r) const {
    if (!linear_) return fen_.sample(r);
    auto remaining = static_cast<std::int64_t>(r);
    for (std::uint32_t i = 0; i < n_; ++i) {
      if (remaining < weights_[i]) return i;
      remaining -= weights_[i];
    }
    throw std::out_of_range("PressureIndex::sample: r out of range");
  }

 private:
  std::uint32_t n_;
  bool linear_;
  FenwickSampler fen_;
  std::vector<std::int64_t> weights_;
  std::int64_t total_ = 0;
};

}  // namespace contact_detail

/// Gillespie simulation of the contact process. Infected nodes heal at rate
/// 1; a healthy node j is infected at rate tau * (number of stubs from
/// infected neighbors, counting multiplicity). The per-healthy-node pressure
/// is maintained incrementally (O(degree) per event) inside an integer
/// Fenwick tree, so the total rate is exact at all times.
///
/// The observer is called as obs(time, infected_count) once at t = 0 and
/// after every event; it sees the piecewise-constant path of |I_t|.
template <class Observer>
ExtinctionSample simulate_contact(const Graph& g, const ContactConfig& cfg, RngStream rng,
                                  Observer&& obs) {
  contact_detail::validate(g, cfg);
  const std::uint32_t n = g.n_nodes();

  std::vector<std::uint8_t> infected(n, 0);
  std::vector<std::uint32_t> infected_list;
  std::vector<std::uint32_t> list_pos(n, UINT32_MAX);
  std::vector<std::int64_t> pressure(n, 0);  // infectious stubs pointing at each node
  contact_detail::PressureIndex healthy_pressure(n);

  auto infect = [&](std::uint32_t v) {
    infected[v] = 1;
    list_pos[v] = static_cast<std::uint32_t>(infected_list.size());
    infected_list.push_back(v);
    healthy_pressure.add(v, -pressure[v]);
    for (auto [nbr, mult] : g.neighbors(v)) {
      pressure[nbr] += mult;
      if (!infected[nbr]) healthy_pressure.add(nbr, mult);
    }
  };

  auto heal = [&](std::uint32_t v) {
    infected[v] = 0;
    std::uint32_t idx = list_pos[v];
    infected_list[idx] = infected_list.back();
    list_pos[infected_list.back()] = idx;
    infected_list.pop_back();
    list_pos[v] = UINT32_MAX;
    for (auto [nbr, mult] : g.neighbors(v)) {
      pressure[nbr] -= mult;
      if (!infected[nbr]) healthy_pressure.add(nbr, -static_cast<std::int64_t>(mult));
    }
    healthy_pressure.add(v, pressure[v]);
  };

  if (cfg.initial) {
    std::vector<std::uint8_t> seen(n, 0);
    for (auto v : *cfg.initial) {
      if (!seen[v]) {
        seen[v] = 1;
        infect(v);
      }
    }
  } else {
    for (std::uint32_t v = 0; v < n; ++v) infect(v);
  }

  auto audit = [&]() {
    std::int64_t expected_total = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      std::int64_t w = 0;
      for (auto [nbr, mult] : g.neighbors(v))
        if (infected[nbr]) w += mult;
      if (w != pressure[v])
        throw std::logic_error("contact audit: pressure mismatch at node " + std::to_string(v) +
                               ": tracked " + std::to_string(pressure[v]) + ", actual " +
                               std::to_string(w));
      std::int64_t tracked = healthy_pressure.value(v);
      if (tracked != (infected[v] ? 0 : w))
        throw std::logic_error("contact audit: sampler weight mismatch at node " +
                               std::to_string(v) + " (infected=" + std::to_string(infected[v]) +
                               "): tracked " + std::to_string(tracked) + ", expected " +
                               std::to_string(infected[v] ? 0 : w));
      if (!infected[v]) expected_total += w;
    }
    if (expected_total != healthy_pressure.total())
      throw std::logic_error("contact audit: total pressure mismatch");
  };

  ExtinctionSample sample;
  double t = 0.0;
  sample.peak_infected = static_cast<std::uint32_t>(infected_list.size());
  obs(0.0, static_cast<std::uint32_t>(infected_list.size()));

  while (!infected_list.empty()) {
    const auto k = static_cast<double>(infected_list.size());
    const double infect_weight = cfg.tau * static_cast<double>(healthy_pressure.total());
    const double total_rate = k + infect_weight;
    const double dt = rng.next_exponential(total_rate);
    if (cfg.t_max && t + dt > *cfg.t_max) {
      sample.time = *cfg.t_max;
      sample.censored = true;
      obs(*cfg.t_max, static_cast<std::uint32_t>(infected_list.size()));
      return sample;
    }
    t += dt;
    ++sample.events;

    if (rng.next_double() * total_rate < k) {
      auto idx = static_cast<std::uint32_t>(rng.next_below(infected_list.size()));
      heal(infected_list[idx]);
    } else {
      auto r = rng.next_below(static_cast<std::uint64_t>(healthy_pressure.total()));
      infect(healthy_pressure.sample(r));
    }
    sample.peak_infected =
        std::max(sample.peak_infected, static_cast<std::uint32_t>(infected_list.size()));
    if (cfg.audit_interval && sample.events % cfg.audit_interval == 0) audit();
    obs(t, static_cast<std::uint32_t>(infected_list.size()));
  }

  sample.time = t;
  return sample;
}

inline RngStream replication_stream(const ContactConfig& cfg, std::uint64_t rep) {
  return RngStream(cfg.seed, "contact.rep", rep);
}

/// One extinction time (replication 0 of the configured seed).
inline ExtinctionSample simulate_extinction(const Graph& g, const ContactConfig& cfg) {
  return simulate_contact(g, cfg, replication_stream(cfg, 0),
                          [](double, std::uint32_t) {});
}

struct ExtinctionEstimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  std::uint64_t censored = 0;
  std::uint64_t uncensored = 0;
  bool has_mean = false;  // false when every replication was censored
  std::vector<ExtinctionSample> samples;
};

/// Independent replications with per-replication derived streams. Results
/// are identical for any thread count: replication i always uses stream i
/// and the reduction runs in replication order. Censored samples are counted
/// separately, never averaged in.
inline ExtinctionEstimate estimate_mean_extinction(const Graph& g, const ContactConfig& cfg,
                                                   std::uint64_t reps, unsigned threads = 0) {
  if (reps == 0) throw std::invalid_argument("estimate_mean_extinction: need reps >= 1");
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, reps));

  ExtinctionEstimate est;
  est.samples.resize(reps);
  auto worker = [&](std::uint64_t lo, std::uint64_t hi) {
    for (std::uint64_t r = lo; r < hi; ++r)
      est.samples[r] = simulate_contact(g, cfg, replication_stream(cfg, r),
                                        [](double, std::uint32_t) {});
  };
  if (threads <= 1) {
    worker(0, reps);
  } else {
    std::vector<std::thread> pool;
    const std::uint64_t chunk = (reps + threads - 1) / threads;
    for (unsigned tdx = 0; tdx < threads; ++tdx) {
      const std::uint64_t lo = tdx * chunk;
      const std::uint64_t hi = std::min(reps, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }

  double sum = 0.0;
  for (const auto& s : est.samples) {
    if (s.censored)
      ++est.censored;
    else {
      ++est.uncensored;
      sum += s.time;
    }
  }
  if (est.uncensored == 0) return est;
  est.has_mean = true;
  est.mean = sum / static_cast<double>(est.uncensored);
  if (est.uncensored > 1) {
    double ss = 0.0;
    for (const auto& s : est.samples)
      if (!s.censored) ss += (s.time - est.mean) * (s.time - est.mean);
    est.stderr_ = std::sqrt(ss / (static_cast<double>(est.uncensored) *
                                  static_cast<double>(est.uncensored - 1)));
  }
  return est;
}

/// |I_t| of a single path at the requested (ascending) times. Times past
/// extinction read 0; with a censoring horizon set, times past the horizon
/// are rejected.
inline std::vector<std::uint32_t> infected_trajectory(const Graph& g, const ContactConfig& cfg,
                                                      const std::vector<double>& sample_times) {
  for (std::size_t i = 0; i < sample_times.size(); ++i) {
    if (sample_times[i] < 0.0)
      throw std::invalid_argument("infected_trajectory: times must be nonnegative");
    if (i > 0 && sample_times[i] < sample_times[i - 1])
      throw std::invalid_argument("infected_trajectory: times must be ascending");
    if (cfg.t_max && sample_times[i] > *cfg.t_max)
      throw std::invalid_argument("infected_trajectory: sample time past the censoring horizon");
  }
  std::vector<std::uint32_t> counts(sample_times.size(), 0);
  std::size_t next = 0;
  std::uint32_t last = 0;
  bool first = true;
  auto obs = [&](double time, std::uint32_t count) {
    if (first) {  // value at t = 0
      first = false;
      last = count;
      return;
    }
    while (next < sample_times.size() && sample_times[next] < time) counts[next++] = last;
    last = count;
  };
  simulate_contact(g, cfg, replication_stream(cfg, 0), obs);
  while (next < sample_times.size()) counts[next++] = last;
  return counts;
}

}  // namespace cpb
