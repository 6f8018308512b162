// cpb: command-line front end for the contact-process metastability toolkit.
// Subcommands mirror the library modules: gen, mincut, pairing, hitting,
// simulate, bounds er, bounds cm, verify. Every output carries a metadata
// header (tool version, seed, parameter echo) so a table can be reproduced
// from its own header alone.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cpb/birth_death.hpp"
#include "cpb/bounds_cm.hpp"
#include "cpb/bounds_er.hpp"
#include "cpb/contact.hpp"
#include "cpb/graph.hpp"
#include "cpb/pairing.hpp"
#include "cpb/version.hpp"

using nlohmann::json;

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("CPB_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

struct Meta {
  std::string subcommand;
  std::vector<std::pair<std::string, std::string>> params;

  void add(const std::string& key, const std::string& value) { params.push_back({key, value}); }
  void add(const std::string& key, double value) { add(key, fmt(value)); }
  void add(const std::string& key, std::uint64_t value) { add(key, std::to_string(value)); }

  std::string csv_header() const {
    std::ostringstream out;
    out << "# tool: cpb " << cpb::kVersion << "\n";
    out << "# subcommand: " << subcommand << "\n";
    for (const auto& [k, v] : params) out << "# " << k << ": " << v << "\n";
    return out.str();
  }

  json to_json() const {
    json meta;
    meta["tool"] = std::string("cpb ") + cpb::kVersion;
    meta["subcommand"] = subcommand;
    for (const auto& [k, v] : params) meta[k] = v;
    return meta;
  }
};

void emit(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << content;
}

cpb::DegreeDistribution parse_dist(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos)
    throw std::invalid_argument("--dist expects constant:d, poisson:mu or empirical:file");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "constant") return cpb::DegreeDistribution::constant(std::stoul(arg));
  if (kind == "poisson") return cpb::DegreeDistribution::poisson(std::stod(arg));
  if (kind == "empirical") {
    std::ifstream in(arg);
    if (!in) throw std::invalid_argument("cannot open pmf file: " + arg);
    std::vector<double> pmf;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream row(line);
      std::uint32_t k;
      double p;
      if (!(row >> k >> p)) throw std::invalid_argument("pmf file: malformed line: " + line);
      if (k >= pmf.size()) pmf.resize(k + 1, 0.0);
      pmf[k] += p;
    }
    return cpb::DegreeDistribution::empirical(std::move(pmf));
  }
  throw std::invalid_argument("unknown distribution kind: " + kind);
}

cpb::Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open graph file: " + path);
  return cpb::read_edge_list(in);
}

json report_to_json(const cpb::BoundReport& report) {
  json j;
  j["inputs"] = report.inputs;
  j["feasible"] = report.feasible;
  if (report.threshold_tau) j["threshold_tau"] = *report.threshold_tau;
  if (report.growth_exponent) j["growth_exponent"] = *report.growth_exponent;
  j["terms"] = report.terms;
  j["notes"] = report.notes;
  return j;
}

std::string json_output(const Meta& meta, json payload) {
  json out;
  out["meta"] = meta.to_json();
  out["result"] = std::move(payload);
  return out.dump(2) + "\n";
}

// ---------------------------------------------------------------------------

int run_gen(const std::string& type, std::uint32_t n, double p, const std::string& dist_text,
            std::uint64_t seed, const std::string& output) {
  Meta meta;
  meta.subcommand = "gen";
  meta.add("type", type);
  meta.add("n", static_cast<std::uint64_t>(n));
  meta.add("seed", seed);
  std::optional<cpb::Graph> g;
  if (type == "er") {
    meta.add("p", p);
    g = cpb::gen_erdos_renyi(n, p, seed);
  } else if (type == "cm") {
    auto dist = parse_dist(dist_text);
    meta.add("dist", dist.describe());
    g = cpb::gen_configuration(n, dist, seed);
    meta.add("discarded_self_loop_stubs", g->discarded_self_loop_stubs);
    meta.add("discarded_parity_stub", std::string(g->discarded_parity_stub ? "1" : "0"));
  } else {
    throw std::invalid_argument("--type must be er or cm");
  }
  std::ostringstream body;
  body << meta.csv_header();
  cpb::write_edge_list(*g, body);
  emit(output, body.str());
  return 0;
}

int run_mincut(const std::string& graph_path, std::uint32_t k, std::uint64_t budget,
               std::uint64_t samples, std::uint64_t seed, const std::string& format,
               const std::string& output) {
  auto g = load_graph(graph_path);
  Meta meta;
  meta.subcommand = "mincut";
  meta.add("graph", graph_path);
  meta.add("k", static_cast<std::uint64_t>(k));
  meta.add("budget", budget);

  cpb::MinCutResult result;
  bool exact = true;
  if (samples > 0) {
    exact = false;
    meta.add("samples", samples);
    meta.add("seed", seed);
    result = cpb::sampled_min_cut_witness(g, k, samples, seed);
  } else {
    result = cpb::min_cut_over_size(g, k, budget);
  }
  meta.add("exact", std::string(exact ? "1" : "0"));

  if (format == "json") {
    json payload;
    payload["k"] = k;
    payload["min_cut"] = result.cut;
    payload["exact"] = exact;
    payload["witness"] = result.witness;
    emit(output, json_output(meta, payload));
  } else {
    std::ostringstream body;
    body << meta.csv_header() << "k,min_cut,exact,witness\n";
    body << k << "," << result.cut << "," << (exact ? 1 : 0) << ",";
    for (std::size_t i = 0; i < result.witness.size(); ++i)
      body << (i ? ";" : "") << result.witness[i];
    body << "\n";
    emit(output, body.str());
  }
  return 0;
}

int run_pairing(std::uint64_t n1, std::uint64_t n2, const std::string& output) {
  Meta meta;
  meta.subcommand = "pairing";
  meta.add("n1", n1);
  meta.add("n2", n2);
  auto law = cpb::mixed_pair_pmf(n1, n2);
  std::ostringstream body;
  body << meta.csv_header() << "l,probability,tail_bound\n";
  for (const auto& [l, p] : law.pmf)
    body << l << "," << fmt(p) << "," << fmt(cpb::tail_bound(n1, n2, l)) << "\n";
  emit(output, body.str());
  return 0;
}

int run_hitting(std::uint32_t n, double lambda, std::optional<std::uint32_t> k0_opt,
                std::optional<std::uint32_t> k1_opt, const std::string& output) {
  auto spec = cpb::complete_graph_spec(n, lambda);
  if (k0_opt) spec.k0 = *k0_opt;
  if (k1_opt) spec.k1 = *k1_opt;
  auto times = cpb::expected_hitting_times(spec);
  auto lower = cpb::hitting_lower_bound(spec);
  auto upper = cpb::hitting_upper_bound(spec);

  Meta meta;
  meta.subcommand = "hitting";
  meta.add("complete_n", static_cast<std::uint64_t>(n));
  meta.add("lambda", lambda);
  meta.add("k0", static_cast<std::uint64_t>(spec.k0));
  meta.add("k1", static_cast<std::uint64_t>(spec.k1));
  meta.add("exponent_per_node", times.at(spec.k1).log() / static_cast<double>(n));
  meta.add("limit_exponent", cpb::complete_graph_exponent(lambda));

  std::ostringstream body;
  body << meta.csv_header() << "k,log_hitting_time,log_lower_bound,log_upper_bound\n";
  for (std::uint32_t k = spec.k0; k <= spec.k1; ++k)
    body << k << "," << fmt(times.at(k).log()) << "," << fmt(lower.log()) << ","
         << fmt(upper.log()) << "\n";
  emit(output, body.str());
  return 0;
}

int run_simulate(const std::string& graph_path, const std::string& er_text,
                 std::uint32_t complete_n, double tau, double lambda, std::uint64_t reps,
                 double t_max, std::uint64_t seed, unsigned threads, const std::string& traj,
                 const std::string& format, const std::string& output) {
  std::optional<cpb::Graph> g;
  Meta meta;
  meta.subcommand = "simulate";
  std::uint64_t gen_seed = seed;
  if (!graph_path.empty()) {
    g = load_graph(graph_path);
    meta.add("graph", graph_path);
  } else if (!er_text.empty()) {
    auto comma = er_text.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--er expects n,p");
    const auto n = static_cast<std::uint32_t>(std::stoul(er_text.substr(0, comma)));
    const double p = std::stod(er_text.substr(comma + 1));
    g = cpb::gen_erdos_renyi(n, p, gen_seed);
    meta.add("er", er_text);
  } else if (complete_n > 0) {
    g = cpb::gen_erdos_renyi(complete_n, 1.0, 0);
    meta.add("complete_n", static_cast<std::uint64_t>(complete_n));
  } else {
    throw std::invalid_argument("simulate needs one of --graph, --er, --complete");
  }

  cpb::ContactConfig cfg;
  if (lambda > 0.0)
    cfg.tau = lambda / static_cast<double>(g->n_nodes());
  else
    cfg.tau = tau;
  cfg.seed = seed;
  if (t_max > 0.0) cfg.t_max = t_max;
  meta.add("tau", cfg.tau);
  meta.add("seed", seed);
  meta.add("n_nodes", static_cast<std::uint64_t>(g->n_nodes()));
  if (cfg.t_max) meta.add("t_max", *cfg.t_max);
  meta.add("threads", static_cast<std::uint64_t>(threads));

  if (!traj.empty()) {
    std::vector<double> times;
    std::istringstream list(traj);
    std::string item;
    while (std::getline(list, item, ',')) times.push_back(std::stod(item));
    auto counts = cpb::infected_trajectory(*g, cfg, times);
    std::ostringstream body;
    body << meta.csv_header() << "time,infected\n";
    for (std::size_t i = 0; i < times.size(); ++i)
      body << fmt(times[i]) << "," << counts[i] << "\n";
    emit(output, body.str());
    return 0;
  }

  meta.add("reps", reps);
  auto est = cpb::estimate_mean_extinction(*g, cfg, reps, threads);
  if (format == "csv") {
    std::ostringstream body;
    body << meta.csv_header();
    if (est.has_mean) {
      body << "# mean: " << fmt(est.mean) << "\n# stderr: " << fmt(est.stderr_) << "\n";
    } else {
      body << "# status: no uncensored samples\n";
    }
    body << "# censored: " << est.censored << "\n";
    body << "rep,time,censored,peak_infected,events\n";
    for (std::size_t r = 0; r < est.samples.size(); ++r) {
      const auto& s = est.samples[r];
      body << r << "," << fmt(s.time) << "," << (s.censored ? 1 : 0) << "," << s.peak_infected
           << "," << s.events << "\n";
    }
    emit(output, body.str());
  } else {
    json payload;
    payload["status"] = est.has_mean ? "ok" : "no uncensored samples";
    if (est.has_mean) {
      payload["mean"] = est.mean;
      payload["stderr"] = est.stderr_;
    }
    payload["reps"] = reps;
    payload["censored"] = est.censored;
    payload["uncensored"] = est.uncensored;
    emit(output, json_output(meta, payload));
  }
  return 0;
}

int run_bounds_er(double sigma, double tau, double eps, std::uint64_t dense_n, double dense_p,
                  const std::string& sweep, const std::string& format, const std::string& output) {
  Meta meta;
  meta.subcommand = "bounds er";
  if (!sweep.empty()) {
    // sigma=a:b:count, geometric spacing
    const std::string prefix = "sigma=";
    if (sweep.rfind(prefix, 0) != 0)
      throw std::invalid_argument("--sweep expects sigma=min:max:count");
    std::istringstream spec(sweep.substr(prefix.size()));
    std::string a, b, c;
    if (!std::getline(spec, a, ':') || !std::getline(spec, b, ':') || !std::getline(spec, c))
      throw std::invalid_argument("--sweep expects sigma=min:max:count");
    const double lo = std::stod(a), hi = std::stod(b);
    const int count = std::stoi(c);
    if (!(lo > 0.0) || !(hi > lo) || count < 2)
      throw std::invalid_argument("--sweep expects 0 < min < max and count >= 2");
    meta.add("sweep", sweep);
    std::ostringstream body;
    body << meta.csv_header()
         << "sigma,feasible,tau0,sigma_tau0,gamma_sigma,alpha_sigma,c,gamma0\n";
    for (int i = 0; i < count; ++i) {
      const double s = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
      auto sp = cpb::sparse_params(s);
      body << fmt(s) << "," << (sp.feasible ? 1 : 0) << ",";
      if (sp.feasible) {
        const double tau0 = cpb::tau0_sparse(s);
        body << fmt(tau0) << "," << fmt(s * tau0) << "," << fmt(sp.gamma_sigma) << ","
             << fmt(sp.alpha_sigma) << "," << fmt(sp.c) << "," << fmt(sp.gamma0) << "\n";
      } else {
        body << ",,,,,\n";
      }
    }
    emit(output, body.str());
    return 0;
  }

  json payload;
  if (dense_n > 0) {
    meta.add("n", dense_n);
    meta.add("p", dense_p);
    meta.add("tau", tau);
    meta.add("eps", eps);
    payload = report_to_json(cpb::dense_growth_exponent(dense_n, dense_p, tau, eps));
  } else {
    meta.add("sigma", sigma);
    meta.add("tau", tau);
    payload = report_to_json(cpb::sparse_growth_exponent(sigma, tau));
    payload["complete_graph_exponent"] = cpb::complete_graph_exponent(tau * sigma);
  }
  if (format == "csv") {
    std::ostringstream body;
    body << meta.csv_header() << "key,value\n";
    for (auto& [k, v] : payload.items())
      if (v.is_number()) body << k << "," << fmt(v.get<double>()) << "\n";
    emit(output, body.str());
  } else {
    emit(output, json_output(meta, payload));
  }
  return 0;
}

int run_bounds_cm(const std::string& dist_text, double tau, double eps, std::uint32_t grid,
                  bool do_mu0, const std::string& psi_point, double psi_sweep_gamma,
                  bool psi0_sweep, const std::string& format, const std::string& output) {
  auto dist = parse_dist(dist_text);
  Meta meta;
  meta.subcommand = "bounds cm";
  meta.add("dist", dist.describe());

  if (!psi_point.empty()) {
    auto comma = psi_point.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("--psi expects gamma,rho");
    cpb::PsiQuery q;
    q.gamma = std::stod(psi_point.substr(0, comma));
    q.rho = std::stod(psi_point.substr(comma + 1));
    auto res = cpb::psi(dist, q);
    meta.add("gamma", q.gamma);
    meta.add("rho", q.rho);
    json payload;
    payload["psi"] = res.value;
    payload["argmin_a1"] = res.a1;
    payload["argmin_a2"] = res.a2;
    payload["degenerate"] = res.degenerate;
    payload["entropy"] = cpb::entropy(q.gamma);
    emit(output, json_output(meta, payload));
    return 0;
  }

  if (psi_sweep_gamma > 0.0) {
    meta.add("gamma", psi_sweep_gamma);
    const double rho_max = psi_sweep_gamma * (1.0 - psi_sweep_gamma) * dist.mean();
    cpb::RateFunction rate(dist);
    std::ostringstream body;
    body << meta.csv_header() << "gamma,rho,psi,entropy\n";
    const int count = 60;
    for (int i = 0; i < count; ++i) {
      const double rho = rho_max * i / count;
      auto res = cpb::psi_with(rate, psi_sweep_gamma, rho);
      body << fmt(psi_sweep_gamma) << "," << fmt(rho) << "," << fmt(res.value) << ","
           << fmt(cpb::entropy(psi_sweep_gamma)) << "\n";
    }
    emit(output, body.str());
    return 0;
  }

  if (psi0_sweep) {
    // ratio Psi(gamma, 0) / H(gamma) toward gamma -> 0 (numerical exploration)
    cpb::RateFunction rate(dist);
    std::ostringstream body;
    body << meta.csv_header() << "gamma,psi0,entropy,ratio\n";
    for (double gamma = 0.5; gamma > 1e-4; gamma /= 1.3) {
      auto res = cpb::psi_with(rate, gamma, 0.0);
      const double h = cpb::entropy(gamma);
      body << fmt(gamma) << "," << fmt(res.value) << "," << fmt(h) << "," << fmt(res.value / h)
           << "\n";
    }
    emit(output, body.str());
    return 0;
  }

  json payload;
  auto cond = cpb::metastability_condition(dist);
  payload["metastability"] = {{"value", cond.value},
                              {"satisfied", cond.satisfied},
                              {"conditioned_value", cond.conditioned_value},
                              {"conditioned_satisfied", cond.conditioned_satisfied}};
  if (do_mu0) {
    auto res = cpb::mu0(dist, grid);
    meta.add("grid", static_cast<std::uint64_t>(grid));
    json m;
    m["applicable"] = res.applicable;
    if (res.applicable) {
      m["value"] = res.value;
      m["gamma"] = res.gamma;
      m["rho"] = res.rho;
      m["lambda_frac"] = res.lambda_frac;
      m["tau_threshold"] = 1.0 / res.value;
    } else {
      m["status"] = "method inapplicable: Gamma is empty on the grid";
    }
    payload["mu0"] = m;
  }
  if (tau > 0.0) {
    meta.add("tau", tau);
    if (dist.kind() == cpb::DegreeDistribution::Kind::constant)
      payload["const_degree"] = report_to_json(cpb::const_degree_bounds(
          static_cast<std::uint32_t>(dist.mean()), tau, eps));
    else if (dist.kind() == cpb::DegreeDistribution::Kind::poisson)
      payload["poisson"] = report_to_json(cpb::poisson_bounds(dist.mean(), tau, eps));
  }
  if (format == "csv") {
    std::ostringstream body;
    body << meta.csv_header() << "key,value\n";
    body << "metastability_value," << fmt(cond.value) << "\n";
    body << "metastability_satisfied," << (cond.satisfied ? 1 : 0) << "\n";
    emit(output, body.str());
  } else {
    emit(output, json_output(meta, payload));
  }
  return 0;
}

int run_verify(const std::string& graph_path, double gamma, double rho, double p_override,
               std::uint64_t budget, std::uint64_t samples, std::uint64_t seed,
               const std::string& format, const std::string& output) {
  auto g = load_graph(graph_path);
  const std::uint32_t n = g.n_nodes();
  if (!(gamma > 0.0 && gamma < 0.5))
    throw std::invalid_argument("verify: --gamma must be in (0, 0.5)");
  double p = p_override;
  if (p <= 0.0)
    p = static_cast<double>(g.edge_count()) /
        (static_cast<double>(n) * (n - 1) / 2.0);  // density estimate
  const auto k_lo = static_cast<std::uint32_t>(std::ceil(gamma * n));
  const auto k_hi = static_cast<std::uint32_t>(std::floor((1.0 - gamma) * n));

  Meta meta;
  meta.subcommand = "verify";
  meta.add("graph", graph_path);
  meta.add("gamma", gamma);
  meta.add("rho", rho);
  meta.add("p", p);
  meta.add("k_lo", static_cast<std::uint64_t>(k_lo));
  meta.add("k_hi", static_cast<std::uint64_t>(k_hi));
  meta.add("seed", seed);

  cpb::UniformBoundOptions opts;
  opts.subset_budget = budget;
  opts.samples = samples;
  opts.seed = seed;
  auto bound = [&](std::uint32_t k) {
    return rho * p * static_cast<double>(k) * static_cast<double>(n - k);
  };
  auto results = cpb::verify_uniform_bound(g, k_lo, k_hi, bound, opts);

  auto status_name = [](cpb::CutCheckStatus s) {
    switch (s) {
      case cpb::CutCheckStatus::verified:
        return "verified";
      case cpb::CutCheckStatus::violated:
        return "violated";
      default:
        return "inconclusive";
    }
  };

  if (format == "json") {
    json rows = json::array();
    for (const auto& r : results) {
      json row;
      row["k"] = r.k;
      row["status"] = status_name(r.status);
      row["bound"] = r.bound;
      row["min_cut_found"] = r.min_cut_found;
      row["exact"] = r.exact;
      if (r.status == cpb::CutCheckStatus::violated) row["witness"] = r.witness;
      rows.push_back(row);
    }
    json payload;
    payload["checks"] = rows;
    emit(output, json_output(meta, payload));
  } else {
    std::ostringstream body;
    body << meta.csv_header() << "k,status,bound,min_cut_found,exact,witness\n";
    for (const auto& r : results) {
      body << r.k << "," << status_name(r.status) << "," << fmt(r.bound) << ","
           << r.min_cut_found << "," << (r.exact ? 1 : 0) << ",";
      if (r.status == cpb::CutCheckStatus::violated)
        for (std::size_t i = 0; i < r.witness.size(); ++i)
          body << (i ? ";" : "") << r.witness[i];
      body << "\n";
    }
    emit(output, body.str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Contact-process metastability toolkit"};
  app.set_version_flag("--version", std::string("cpb ") + cpb::kVersion);
  app.require_subcommand(1);

  std::string output;
  std::string format = "json";
  app.add_option("-o,--output", output, "Output file (default: stdout)")->capture_default_str();

  // gen ----------------------------------------------------------------
  auto* gen = app.add_subcommand("gen", "Generate a random graph (edge-list text)");
  std::string gen_type = "er";
  std::uint32_t gen_n = 0;
  double gen_p = 0.0;
  std::string gen_dist;
  std::uint64_t gen_seed = default_seed();
  gen->add_option("--type", gen_type, "er or cm")->capture_default_str();
  gen->add_option("-n,--nodes", gen_n, "Number of nodes")->required();
  gen->add_option("-p,--prob", gen_p, "Edge probability (er)");
  gen->add_option("--dist", gen_dist, "Degree law (cm): constant:d | poisson:mu | empirical:file");
  gen->add_option("--seed", gen_seed, "RNG seed")->capture_default_str();

  // mincut --------------------------------------------------------------
  auto* mincut = app.add_subcommand("mincut", "Minimum edge cut over subsets of size k");
  std::string mc_graph;
  std::uint32_t mc_k = 0;
  std::uint64_t mc_budget = cpb::kDefaultSubsetBudget;
  std::uint64_t mc_samples = 0;
  std::uint64_t mc_seed = default_seed();
  std::string mc_format = "csv";
  mincut->add_option("--graph", mc_graph, "Edge-list file")->required();
  mincut->add_option("-k", mc_k, "Subset size")->required();
  mincut->add_option("--budget", mc_budget, "Subset enumeration budget")->capture_default_str();
  mincut->add_option("--samples", mc_samples, "Use sampling with this many draws instead");
  mincut->add_option("--seed", mc_seed, "RNG seed (sampling)")->capture_default_str();
  mincut->add_option("--format", mc_format, "csv or json")->capture_default_str();

  // pairing --------------------------------------------------------------
  auto* pairing = app.add_subcommand("pairing", "Mixed-pair law of uniform stub matching");
  std::uint64_t pr_n1 = 0, pr_n2 = 0;
  pairing->add_option("--n1", pr_n1, "Red stubs")->required();
  pairing->add_option("--n2", pr_n2, "White stubs")->required();

  // hitting --------------------------------------------------------------
  auto* hitting = app.add_subcommand("hitting", "Exact birth-death hitting times (complete graph)");
  std::uint32_t ht_n = 0;
  double ht_lambda = 0.0;
  std::uint32_t ht_k0 = 0, ht_k1 = 0;
  bool ht_has_k0 = false, ht_has_k1 = false;
  hitting->add_option("--complete", ht_n, "Complete graph size N")->required();
  hitting->add_option("--lambda", ht_lambda, "Infection rate scale (tau = lambda/N)")->required();
  hitting->add_option("--k0", ht_k0, "Lower state (default 0)")->each([&](const std::string&) {
    ht_has_k0 = true;
  });
  hitting->add_option("--k1", ht_k1, "Upper state (default N)")->each([&](const std::string&) {
    ht_has_k1 = true;
  });

  // simulate ---------------------------------------------------------------
  auto* simulate = app.add_subcommand("simulate", "Contact-process extinction times");
  std::string sim_graph, sim_er, sim_traj;
  std::uint32_t sim_complete = 0;
  double sim_tau = 0.0, sim_lambda = 0.0, sim_tmax = 0.0;
  std::uint64_t sim_reps = 1000;
  std::uint64_t sim_seed = default_seed();
  unsigned sim_threads = 0;
  std::string sim_format = "json";
  simulate->add_option("--graph", sim_graph, "Edge-list file");
  simulate->add_option("--er", sim_er, "Generate ER graph: n,p");
  simulate->add_option("--complete", sim_complete, "Complete graph size");
  simulate->add_option("--tau", sim_tau, "Per-edge infection rate");
  simulate->add_option("--lambda", sim_lambda, "Sets tau = lambda / N");
  simulate->add_option("--reps", sim_reps, "Replications")->capture_default_str();
  simulate->add_option("--t-max", sim_tmax, "Censoring horizon");
  simulate->add_option("--seed", sim_seed, "RNG seed")->capture_default_str();
  simulate->add_option("--threads", sim_threads, "Worker threads (0 = hardware)");
  simulate->add_option("--traj", sim_traj, "Sample |I_t| at comma-separated times (single path)");
  simulate->add_option("--format", sim_format, "csv (per-replication rows) or json (summary)")
      ->capture_default_str();

  // bounds ----------------------------------------------------------------
  auto* bounds = app.add_subcommand("bounds", "Threshold and growth-rate formulas");
  bounds->require_subcommand(1);

  auto* ber = bounds->add_subcommand("er", "Erdos-Renyi bounds");
  double ber_sigma = 0.0, ber_tau = 0.0, ber_eps = 0.0, ber_p = 0.0;
  std::uint64_t ber_n = 0;
  std::string ber_sweep;
  ber->add_option("--sigma", ber_sigma, "Sparse regime: N p = sigma");
  ber->add_option("--tau", ber_tau, "Infection rate");
  ber->add_option("--eps", ber_eps, "Slack in the dense exponent")->capture_default_str();
  ber->add_option("--dense-n", ber_n, "Dense regime: graph size");
  ber->add_option("--dense-p", ber_p, "Dense regime: edge probability");
  ber->add_option("--sweep", ber_sweep, "Tabulate tau0: sigma=min:max:count");

  auto* bcm = bounds->add_subcommand("cm", "Configuration-model bounds");
  std::string bcm_dist;
  double bcm_tau = 0.0, bcm_eps = 0.0, bcm_psi_gamma = 0.0;
  std::uint32_t bcm_grid = 100;
  bool bcm_mu0 = false, bcm_psi0 = false;
  std::string bcm_psi;
  bcm->add_option("--dist", bcm_dist, "constant:d | poisson:mu | empirical:file")->required();
  bcm->add_option("--tau", bcm_tau, "Infection rate");
  bcm->add_option("--eps", bcm_eps, "Slack in the growth exponent")->capture_default_str();
  bcm->add_option("--grid", bcm_grid, "mu0 grid resolution")->capture_default_str();
  bcm->add_flag("--mu0", bcm_mu0, "Estimate mu0 (certified lower bound)");
  bcm->add_option("--psi", bcm_psi, "Evaluate Psi at gamma,rho");
  bcm->add_option("--psi-sweep", bcm_psi_gamma, "CSV of Psi(gamma, rho) over rho at this gamma");
  bcm->add_flag("--psi0-sweep", bcm_psi0, "CSV of Psi(gamma,0)/H(gamma) toward gamma -> 0");

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "Check L_S >= rho p k (N-k) on a graph");
  std::string vf_graph;
  double vf_gamma = 0.0, vf_rho = 0.0, vf_p = 0.0;
  std::uint64_t vf_budget = cpb::kDefaultSubsetBudget;
  std::uint64_t vf_samples = 20000;
  std::uint64_t vf_seed = default_seed();
  std::string vf_format = "csv";
  verify->add_option("--graph", vf_graph, "Edge-list file")->required();
  verify->add_option("--gamma", vf_gamma, "Checks k in [gamma N, (1-gamma) N]")->required();
  verify->add_option("--rho", vf_rho, "Bound scale")->required();
  verify->add_option("-p,--prob", vf_p, "Edge probability (default: estimated density)");
  verify->add_option("--budget", vf_budget, "Subset enumeration budget")->capture_default_str();
  verify->add_option("--samples", vf_samples, "Samples when over budget")->capture_default_str();
  verify->add_option("--seed", vf_seed, "RNG seed (sampling)")->capture_default_str();
  verify->add_option("--format", vf_format, "csv or json")->capture_default_str();

  app.add_option("--format", format, "json or csv (bounds subcommands)")->capture_default_str();

  try {
    app.parse(argc, argv);
    if (gen->parsed()) return run_gen(gen_type, gen_n, gen_p, gen_dist, gen_seed, output);
    if (mincut->parsed())
      return run_mincut(mc_graph, mc_k, mc_budget, mc_samples, mc_seed, mc_format, output);
    if (pairing->parsed()) return run_pairing(pr_n1, pr_n2, output);
    if (hitting->parsed())
      return run_hitting(ht_n, ht_lambda,
                         ht_has_k0 ? std::optional<std::uint32_t>(ht_k0) : std::nullopt,
                         ht_has_k1 ? std::optional<std::uint32_t>(ht_k1) : std::nullopt, output);
    if (simulate->parsed())
      return run_simulate(sim_graph, sim_er, sim_complete, sim_tau, sim_lambda, sim_reps,
                          sim_tmax, sim_seed, sim_threads, sim_traj, sim_format, output);
    if (bounds->parsed()) {
      if (ber->parsed())
        return run_bounds_er(ber_sigma, ber_tau, ber_eps, ber_n, ber_p, ber_sweep, format,
                             output);
      if (bcm->parsed())
        return run_bounds_cm(bcm_dist, bcm_tau, bcm_eps, bcm_grid, bcm_mu0, bcm_psi,
                             bcm_psi_gamma, bcm_psi0, format, output);
    }
    if (verify->parsed())
      return run_verify(vf_graph, vf_gamma, vf_rho, vf_p, vf_budget, vf_samples, vf_seed,
                        vf_format, output);
    std::cerr << "no subcommand\n";
    return 1;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1, --help/--version exit 0
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const cpb::budget_exceeded& e) {
    std::cerr << "error: " << e.what() << "\n(add --samples to fall back to sampling)\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
}
