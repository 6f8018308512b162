#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpb/degree_distribution.hpp"
#include "cpb/rng.hpp"

namespace cpb {

/// Thrown when a subset enumeration would exceed the configured budget.
/// Callers are expected to fall back to sampled_min_cut.
class budget_exceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GraphEdge {
  std::uint32_t u;
  std::uint32_t v;
  std::uint32_t multiplicity = 1;
};

/// Undirected multigraph with per-pair edge multiplicities. No self-loops;
/// adjacency is stored symmetrically. Parallel edges simply scale the
/// infection rate between their endpoints.
class Graph {
 public:
  using Neighbor = std::pair<std::uint32_t, std::uint32_t>;  // (node, multiplicity)

  Graph(std::uint32_t n_nodes, const std::vector<GraphEdge>& edges) : n_(n_nodes) {
    if (n_ == 0) throw std::invalid_argument("Graph: need at least one node");
    std::vector<GraphEdge> sorted;
    sorted.reserve(edges.size());
    for (const auto& e : edges) {
      if (e.u >= n_ || e.v >= n_) throw std::invalid_argument("Graph: node index out of range");
      if (e.u == e.v) throw std::invalid_argument("Graph: self-loops are not stored");
      if (e.multiplicity == 0) throw std::invalid_argument("Graph: zero multiplicity edge");
      sorted.push_back({std::min(e.u, e.v), std::max(e.u, e.v), e.multiplicity});
    }
    std::sort(sorted.begin(), sorted.end(), [](const GraphEdge& a, const GraphEdge& b) {
      return a.u != b.u ? a.u < b.u : a.v < b.v;
    });
    adj_.resize(n_);
    degree_.assign(n_, 0);
    for (std::size_t i = 0; i < sorted.size();) {
      std::size_t j = i;
      std::uint64_t mult = 0;
      while (j < sorted.size() && sorted[j].u == sorted[i].u && sorted[j].v == sorted[i].v)
        mult += sorted[j++].multiplicity;
      auto u = sorted[i].u;
      auto v = sorted[i].v;
      auto m32 = static_cast<std::uint32_t>(mult);
      adj_[u].push_back({v, m32});
      adj_[v].push_back({u, m32});
      degree_[u] += mult;
      degree_[v] += mult;
      ++edge_count_;
      total_multiplicity_ += mult;
      i = j;
    }
    for (auto& nbrs : adj_)
      std::sort(nbrs.begin(), nbrs.end());
    degree_sum_ = 2 * total_multiplicity_;
  }

  std::uint32_t n_nodes() const { return n_; }
  std::uint64_t degree(std::uint32_t v) const { return degree_.at(v); }
  std::uint64_t degree_sum() const { return degree_sum_; }
  std::uint64_t edge_count() const { return edge_count_; }
  std::uint64_t total_multiplicity() const { return total_multiplicity_; }

  std::span<const Neighbor> neighbors(std::uint32_t v) const {
    return {adj_.at(v).data(), adj_.at(v).size()};
  }

  std::uint32_t multiplicity(std::uint32_t u, std::uint32_t v) const {
    const auto& nbrs = adj_.at(u);
    auto it = std::lower_bound(nbrs.begin(), nbrs.end(), Neighbor{v, 0});
    return (it != nbrs.end() && it->first == v) ? it->second : 0;
  }

  // Generation diagnostics (configuration model).
  std::uint64_t discarded_self_loop_stubs = 0;
  bool discarded_parity_stub = false;

 private:
  std::uint32_t n_ = 0;
  std::vector<std::vector<Neighbor>> adj_;
  std::vector<std::uint64_t> degree_;
  std::uint64_t degree_sum_ = 0;
  std::uint64_t edge_count_ = 0;
  std::uint64_t total_multiplicity_ = 0;
};

/// G(n, p): every unordered pair carries an edge independently with
/// probability p. One stream per row keeps generation deterministic under
/// any parallel split.
inline Graph gen_erdos_renyi(std::uint32_t n, double p, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_erdos_renyi: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("gen_erdos_renyi: p must be in [0, 1]");
  std::vector<GraphEdge> edges;
  for (std::uint32_t i = 0; i + 1 < n; ++i) {
    RngStream row(seed, "er.row", i);
    for (std::uint32_t j = i + 1; j < n; ++j)
      if (row.next_bernoulli(p)) edges.push_back({i, j, 1});
  }
  return Graph(n, edges);
}

/// Configuration model: i.i.d. degrees, uniform stub matching. Self-loops
/// and the leftover stub of an odd total are discarded (counted in the
/// graph diagnostics); parallel links accumulate multiplicity.
inline Graph gen_configuration(std::uint32_t n, const DegreeDistribution& dist,
                               std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("gen_configuration: n must be >= 1");
  std::vector<std::uint32_t> stubs;
  for (std::uint32_t i = 0; i < n; ++i) {
    RngStream node(seed, "cm.degree", i);
    std::uint32_t d = dist.sample(node);
    for (std::uint32_t s = 0; s < d; ++s) stubs.push_back(i);
  }
  RngStream pairing(seed, "cm.pairing");
  pairing.shuffle(stubs.data(), stubs.size());

  std::vector<GraphEdge> edges;
  std::uint64_t self_stubs = 0;
  for (std::size_t t = 0; t + 1 < stubs.size(); t += 2) {
    if (stubs[t] == stubs[t + 1]) {
      self_stubs += 2;
      continue;
    }
    edges.push_back({stubs[t], stubs[t + 1], 1});
  }
  Graph g(n, edges);
  g.discarded_self_loop_stubs = self_stubs;
  g.discarded_parity_stub = (stubs.size() % 2) == 1;
  return g;
}

struct CutQuery {
  std::vector<std::uint32_t> subset;
};

namespace graph_detail {

inline std::vector<std::uint8_t> subset_mask(const Graph& g, const std::vector<std::uint32_t>& subset) {
  std::vector<std::uint8_t> mask(g.n_nodes(), 0);
  std::size_t count = 0;
  for (auto v : subset) {
    if (v >= g.n_nodes()) throw std::invalid_argument("cut query: node index out of range");
    if (!mask[v]) {
      mask[v] = 1;
      ++count;
    }
  }
  if (count == 0) throw std::invalid_argument("cut query: subset must be nonempty");
  if (count == g.n_nodes()) throw std::invalid_argument("cut query: subset must be proper");
  return mask;
}

}  // namespace graph_detail

/// L_S: number of links (with multiplicity) between S and its complement.
inline std::uint64_t cut_size(const Graph& g, const CutQuery& q) {
  auto mask = graph_detail::subset_mask(g, q.subset);
  std::uint64_t total = 0;
  for (std::uint32_t v = 0; v < g.n_nodes(); ++v) {
    if (!mask[v]) continue;
    for (auto [nbr, mult] : g.neighbors(v))
      if (!mask[nbr]) total += mult;
  }
  return total;
}

/// C(n, k) if it does not exceed cap, otherwise nullopt.
inline std::optional<std::uint64_t> binomial_within(std::uint64_t n, std::uint64_t k,
                                                    std::uint64_t cap) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    acc = acc * (n - k + i) / i;  // exact: numerator of i consecutive ints divisible by i!
    if (acc > cap) return std::nullopt;
  }
  return static_cast<std::uint64_t>(acc);
}

struct MinCutResult {
  std::uint64_t cut = 0;
  std::vector<std::uint32_t> witness;  // one argmin subset, size k
};

namespace graph_detail {

// Depth-first combination walk with incremental cut maintenance: adding a
// node flips the contribution of each incident edge.
class MinCutSearch {
 public:
  MinCutSearch(const Graph& g, std::uint32_t k) : g_(g), k_(k), in_(g.n_nodes(), 0) {}

  MinCutResult run() {
    best_ = std::numeric_limits<std::uint64_t>::max();
    current_ = 0;
    chosen_.clear();
    descend(0, k_);
    return {best_, best_set_};
  }

 private:
  void descend(std::uint32_t start, std::uint32_t remaining) {
    if (remaining == 0) {
      if (current_ < static_cast<std::int64_t>(best_) || best_set_.empty()) {
        best_ = static_cast<std::uint64_t>(current_);
        best_set_ = chosen_;
      }
      return;
    }
    for (std::uint32_t v = start; v + remaining <= g_.n_nodes(); ++v) {
      add(v);
      descend(v + 1, remaining - 1);
      remove(v);
      if (best_ == 0 && !best_set_.empty()) return;  // cannot improve on 0
    }
  }

  void add(std::uint32_t v) {
    for (auto [nbr, mult] : g_.neighbors(v))
      current_ += in_[nbr] ? -static_cast<std::int64_t>(mult) : static_cast<std::int64_t>(mult);
    in_[v] = 1;
    chosen_.push_back(v);
  }

  void remove(std::uint32_t v) {
    in_[v] = 0;
    chosen_.pop_back();
    for (auto [nbr, mult] : g_.neighbors(v))
      current_ += in_[nbr] ? static_cast<std::int64_t>(mult) : -static_cast<std::int64_t>(mult);
  }

  const Graph& g_;
  std::uint32_t k_;
  std::vector<std::uint8_t> in_;
  std::vector<std::uint32_t> chosen_;
  std::int64_t current_ = 0;
  std::uint64_t best_ = 0;
  std::vector<std::uint32_t> best_set_;
};

inline std::vector<std::uint32_t> complement_of(const Graph& g,
                                                const std::vector<std::uint32_t>& s) {
  std::vector<std::uint8_t> mask(g.n_nodes(), 0);
  for (auto v : s) mask[v] = 1;
  std::vector<std::uint32_t> out;
  for (std::uint32_t v = 0; v < g.n_nodes(); ++v)
    if (!mask[v]) out.push_back(v);
  return out;
}

}  // namespace graph_detail

constexpr std::uint64_t kDefaultSubsetBudget = 10'000'000;

/// Exact minimum of L_S over all subsets of size k, with one argmin.
/// Enumerates the smaller of k and n-k (the cut is symmetric). Refuses with
/// budget_exceeded when C(n, k) is above the cap.
inline MinCutResult min_cut_over_size(const Graph& g, std::uint32_t k,
                                      std::uint64_t subset_budget = kDefaultSubsetBudget) {
  if (k == 0 || k >= g.n_nodes())
    throw std::invalid_argument("min_cut_over_size: need 1 <= k < n");
  std::uint32_t side = std::min(k, g.n_nodes() - k);
  auto count = binomial_within(g.n_nodes(), side, subset_budget);
  if (!count)
    throw budget_exceeded("min_cut_over_size: C(" + std::to_string(g.n_nodes()) + ", " +
                          std::to_string(side) + ") exceeds budget of " +
                          std::to_string(subset_budget) + " subsets");
  graph_detail::MinCutSearch search(g, side);
  MinCutResult res = search.run();
  if (side != k) res.witness = graph_detail::complement_of(g, res.witness);
  return res;
}

/// Minimum of L_S over uniformly sampled size-k subsets. Upper bound on the
/// true minimum.
inline MinCutResult sampled_min_cut_witness(const Graph& g, std::uint32_t k,
                                            std::uint64_t samples, std::uint64_t seed) {
  if (k == 0 || k >= g.n_nodes())
    throw std::invalid_argument("sampled_min_cut: need 1 <= k < n");
  if (samples == 0) throw std::invalid_argument("sampled_min_cut: need samples >= 1");
  std::uint32_t n = g.n_nodes();
  std::vector<std::uint32_t> perm(n);
  std::vector<std::uint8_t> mask(n);
  MinCutResult best;
  best.cut = std::numeric_limits<std::uint64_t>::max();
  for (std::uint64_t s = 0; s < samples; ++s) {
    RngStream rng(seed, "mincut.sample", s);
    for (std::uint32_t i = 0; i < n; ++i) perm[i] = i;
    // partial Fisher-Yates: first k entries form the subset
    for (std::uint32_t i = 0; i < k; ++i) {
      auto j = static_cast<std::uint32_t>(i + rng.next_below(n - i));
      std::swap(perm[i], perm[j]);
    }
    std::fill(mask.begin(), mask.end(), 0);
    for (std::uint32_t i = 0; i < k; ++i) mask[perm[i]] = 1;
    std::uint64_t cut = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
      if (!mask[v]) continue;
      for (auto [nbr, mult] : g.neighbors(v))
        if (!mask[nbr]) cut += mult;
    }
    if (cut < best.cut) {
      best.cut = cut;
      best.witness.assign(perm.begin(), perm.begin() + k);
      std::sort(best.witness.begin(), best.witness.end());
    }
  }
  return best;
}

inline std::uint64_t sampled_min_cut(const Graph& g, std::uint32_t k, std::uint64_t samples,
                                     std::uint64_t seed) {
  return sampled_min_cut_witness(g, k, samples, seed).cut;
}

enum class CutCheckStatus { verified, violated, inconclusive };

struct CutCheckResult {
  std::uint32_t k = 0;
  CutCheckStatus status = CutCheckStatus::inconclusive;
  double bound = 0.0;
  std::uint64_t min_cut_found = 0;  // exact min (verified/violated) or sampled min
  bool exact = false;
  std::vector<std::uint32_t> witness;  // argmin; a counterexample when violated
};

struct UniformBoundOptions {
  std::uint64_t subset_budget = kDefaultSubsetBudget;
  std::uint64_t samples = 20'000;
  std::uint64_t seed = 0;
};

/// For each k in [k_lo, k_hi], checks min_{|S|=k} L_S >= bound(k). Uses the
/// exact enumeration when it fits the budget and sampling otherwise; a
/// sampled check that finds no counterexample is reported inconclusive, never
/// silently passed.
inline std::vector<CutCheckResult> verify_uniform_bound(
    const Graph& g, std::uint32_t k_lo, std::uint32_t k_hi,
    const std::function<double(std::uint32_t)>& bound, UniformBoundOptions opts = {}) {
  if (k_lo == 0 || k_lo > k_hi || k_hi >= g.n_nodes())
    throw std::invalid_argument("verify_uniform_bound: need 1 <= k_lo <= k_hi < n");
  std::vector<CutCheckResult> results;
  for (std::uint32_t k = k_lo; k <= k_hi; ++k) {
    CutCheckResult r;
    r.k = k;
    r.bound = bound(k);
    try {
      MinCutResult mc = min_cut_over_size(g, k, opts.subset_budget);
      r.exact = true;
      r.min_cut_found = mc.cut;
      if (static_cast<double>(mc.cut) < r.bound) {
        r.status = CutCheckStatus::violated;
        r.witness = std::move(mc.witness);
      } else {
        r.status = CutCheckStatus::verified;
      }
    } catch (const budget_exceeded&) {
      MinCutResult mc = sampled_min_cut_witness(g, k, opts.samples, opts.seed);
      r.exact = false;
      r.min_cut_found = mc.cut;
      if (static_cast<double>(mc.cut) < r.bound) {
        r.status = CutCheckStatus::violated;
        r.witness = std::move(mc.witness);
      } else {
        r.status = CutCheckStatus::inconclusive;
      }
    }
    results.push_back(std::move(r));
  }
  return results;
}

/// Sorted "u v multiplicity" edge list with a "nodes N" header. Lines
/// starting with '#' are comments.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << "nodes " << g.n_nodes() << "\n";
  for (std::uint32_t u = 0; u < g.n_nodes(); ++u)
    for (auto [v, mult] : g.neighbors(u))
      if (u < v) out << u << " " << v << " " << mult << "\n";
}

inline Graph read_edge_list(std::istream& in) {
  std::string line;
  std::optional<std::uint32_t> n;
  std::vector<GraphEdge> edges;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!n) {
      if (line.rfind("nodes ", 0) != 0)
        throw std::invalid_argument("edge list: expected 'nodes N' header");
      n = static_cast<std::uint32_t>(std::stoul(line.substr(6)));
      continue;
    }
    unsigned long long u = 0, v = 0, m = 0;
    if (std::sscanf(line.c_str(), "%llu %llu %llu", &u, &v, &m) != 3)
      throw std::invalid_argument("edge list: malformed line: " + line);
    edges.push_back({static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v),
                     static_cast<std::uint32_t>(m)});
  }
  if (!n) throw std::invalid_argument("edge list: missing 'nodes N' header");
  return Graph(*n, edges);
}

}  // namespace cpb
