#pragma once

// Experiment runners. Trials run on a worker pool with no shared mutable state:
// trial i draws from its own stream (stream_seed(cfg.seed, i)) and writes only
// slot i of the result arrays, so records and aggregates do not depend on the
// thread count.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <numeric>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "steiner/clusters.hpp"
#include "steiner/combinatorics.hpp"
#include "steiner/config.hpp"
#include "steiner/exact.hpp"
#include "steiner/formulas.hpp"
#include "steiner/hypergraph.hpp"
#include "steiner/process.hpp"
#include "steiner/report.hpp"
#include "steiner/stats.hpp"
#include "steiner/switching.hpp"

namespace steiner {

/// Runs body(i) for i in [0, count) on up to `threads` workers. The first
/// exception thrown by any call is rethrown after all workers stop.
template <typename F>
void parallel_for(std::size_t count, int threads, F&& body) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex mu;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const auto workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

namespace detail {

inline Json optional_json(const std::optional<std::int64_t>& x) { return x ? Json(*x) : Json(nullptr); }

inline Json edges_json(std::span<const RSet> edges) {
  Json out = Json::array();
  for (const auto& e : edges) out.push_back(e.vertices());
  return out;
}

inline std::vector<RSet> config_edges(const ExperimentConfig& cfg) {
  std::vector<RSet> out;
  for (const auto& e : cfg.K) out.emplace_back(e);
  return out;
}

/// Small-instance oracle budget used to decide whether exact values are reported.
inline ExactBudget oracle_budget() { return {10'000, 2e7}; }

inline bool oracle_feasible(const Params& p, std::int64_t m) {
  try {
    check_budget(p, m, oracle_budget());
    return true;
  } catch (const InfeasibleError&) {
    return false;
  }
}

inline double to_double(const Rational& q) { return static_cast<double>(q); }

inline Json histogram_json(const std::map<std::int64_t, std::uint64_t>& h) {
  Json out = Json::object();
  for (auto [k, v] : h) out[std::to_string(k)] = v;
  return out;
}

inline double omega_for(const ExperimentConfig& cfg) {
  ThresholdParams tp{cfg.n, cfg.r};
  if (cfg.omega) tp.omega = *cfg.omega;
  return tp.effective_omega();
}

}  // namespace detail

// ---------------------------------------------------------------------------

inline ExperimentReport run_simulate(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  const StopRule stop = cfg.m ? StopRule::at_edge_count(*cfg.m) : StopRule::at_connectivity();
  const auto T = static_cast<std::size_t>(cfg.trials);
  rep.records.resize(T);
  std::vector<std::int64_t> accepted(T);
  std::vector<char> connected(T);
  parallel_for(T, cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = stream_seed(cfg.seed, i);
    const ProcessTrace tr = run_process(p, seed, stop);
    Json rec;
    rec["trial"] = i;
    rec["seed"] = seed;
    rec["accepted"] = tr.accepted.size();
    rec["tau_o"] = detail::optional_json(tr.tau_o);
    rec["tau_c"] = detail::optional_json(tr.tau_c);
    rec["draws"] = tr.draws_total;
    rec["rejections"] = tr.rejections;
    rec["duplicates"] = tr.duplicates_skipped;
    rec["saturated"] = tr.saturated;
    if (cfg.record_edges) rec["edges"] = detail::edges_json(tr.accepted);
    rep.records[i] = rec.dump();
    accepted[i] = static_cast<std::int64_t>(tr.accepted.size());
    connected[i] = tr.tau_c.has_value();
  });
  rep.aggregates["trials"] = T;
  rep.aggregates["mean_accepted"] = SampleSummary::from_samples(accepted).mean;
  rep.aggregates["connected"] = std::count(connected.begin(), connected.end(), 1);
  return rep;
}

inline ExperimentReport run_hitting_time_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  const double omega = detail::omega_for(cfg);
  const Thresholds th = threshold_edge_count({cfg.n, cfg.r, omega, cfg.c});
  const double log_n = std::log(static_cast<double>(cfg.n));
  const auto T = static_cast<std::size_t>(cfg.trials);
  rep.records.resize(T);
  std::vector<std::optional<std::int64_t>> tau_o(T), tau_c(T);
  parallel_for(T, cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = stream_seed(cfg.seed, i);
    const ProcessTrace tr = run_process(p, seed, StopRule::at_connectivity());
    tau_o[i] = tr.tau_o;
    tau_c[i] = tr.tau_c;
    Json rec;
    rec["trial"] = i;
    rec["seed"] = seed;
    rec["tau_o"] = detail::optional_json(tr.tau_o);
    rec["tau_c"] = detail::optional_json(tr.tau_c);
    rec["equal"] = tr.tau_o && tr.tau_c && *tr.tau_o == *tr.tau_c;
    rec["scaled"] = tr.tau_c ? Json(cfg.r * static_cast<double>(*tr.tau_c) / cfg.n - log_n) : Json(nullptr);
    rec["in_window"] = tr.tau_c && *tr.tau_c >= th.m_L && *tr.tau_c <= th.m_R;
    rec["draws"] = tr.draws_total;
    rec["rejections"] = tr.rejections;
    rec["saturated"] = tr.saturated;
    rep.records[i] = rec.dump();
  });

  std::size_t equal = 0, in_window = 0, reached = 0;
  std::vector<double> scaled, taus;
  for (std::size_t i = 0; i < T; ++i) {
    if (!tau_c[i]) continue;
    ++reached;
    if (tau_o[i] && *tau_o[i] == *tau_c[i]) ++equal;
    if (*tau_c[i] >= th.m_L && *tau_c[i] <= th.m_R) ++in_window;
    scaled.push_back(cfg.r * static_cast<double>(*tau_c[i]) / cfg.n - log_n);
    taus.push_back(static_cast<double>(*tau_c[i]));
  }
  const double frac_equal = static_cast<double>(equal) / static_cast<double>(T);
  const double frac_window = static_cast<double>(in_window) / static_cast<double>(T);
  auto& a = rep.aggregates;
  a["trials"] = T;
  a["connected"] = reached;
  a["fraction_equal"] = frac_equal;
  a["fraction_in_window"] = frac_window;
  a["omega"] = omega;
  a["m_L"] = th.m_L;
  a["m_c"] = th.m_c;
  a["m_R"] = th.m_R;
  if (!scaled.empty()) {
    a["median_scaled"] = median(scaled);
    a["mean_tau_c"] = std::accumulate(taus.begin(), taus.end(), 0.0) / static_cast<double>(taus.size());
  }
  rep.add_verdict("fraction_equal", frac_equal >= cfg.tol.fraction, frac_equal, cfg.tol.fraction, "tau_o = tau_c");
  rep.add_verdict("tau_c_in_window", frac_window >= cfg.tol.fraction, frac_window, cfg.tol.fraction, "m_L <= tau_c <= m_R");
  const double window = cfg.tol.median_window * omega;
  const double med = scaled.empty() ? std::numeric_limits<double>::infinity() : median(scaled);
  rep.add_verdict("median_scaled_in_window", std::fabs(med) <= window, med, window, "|median(r tau_c / n - log n)|");

  std::sort(taus.begin(), taus.end());
  Table curve{"connectivity_curve", "m", "fraction_connected", {}};
  for (std::size_t k = 0; k < taus.size(); ++k)
    if (k + 1 == taus.size() || taus[k + 1] != taus[k]) curve.rows.emplace_back(taus[k], static_cast<double>(k + 1) / static_cast<double>(T));
  rep.tables.push_back(std::move(curve));
  return rep;
}

inline ExperimentReport run_isolated_distribution_experiment(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  const std::int64_t stage = cfg.m ? *cfg.m : threshold_at(cfg.n, cfg.r, cfg.c);
  const double lambda = std::exp(-cfg.c);
  const auto T = static_cast<std::size_t>(cfg.trials);
  rep.records.resize(T);
  std::vector<std::int64_t> isolated(T);
  std::vector<char> reached(T);
  parallel_for(T, cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = stream_seed(cfg.seed, i);
    const ProcessTrace tr = run_process(p, seed, StopRule::at_edge_count(stage));
    std::vector<char> touched(static_cast<std::size_t>(cfg.n) + 1, 0);
    for (const auto& e : tr.accepted)
      for (Vertex v : e) touched[v] = 1;
    isolated[i] = cfg.n - std::count(touched.begin() + 1, touched.end(), 1);
    reached[i] = static_cast<std::int64_t>(tr.accepted.size()) == stage;
    Json rec;
    rec["trial"] = i;
    rec["seed"] = seed;
    rec["m"] = stage;
    rec["reached"] = static_cast<bool>(reached[i]);
    rec["isolated"] = isolated[i];
    rep.records[i] = rec.dump();
  });

  const SampleSummary s = SampleSummary::from_samples(isolated);
  auto& a = rep.aggregates;
  a["trials"] = T;
  a["m"] = stage;
  a["lambda"] = lambda;
  a["unreached"] = std::count(reached.begin(), reached.end(), 0);
  a["mean"] = s.mean;
  a["variance"] = s.variance;
  const double tv = poisson_tv_distance(s, lambda);
  a["tv_distance"] = tv;
  a["histogram"] = detail::histogram_json(s.histogram);
  rep.add_verdict("poisson_tv", tv <= cfg.tol.tv, tv, cfg.tol.tv, "TV distance to Po(e^-c)");
  for (int t = 1; t <= 3; ++t) {
    const double fm = factorial_moment(isolated, t);
    const double se = factorial_moment_standard_error(isolated, t);
    const double target = std::pow(lambda, t);
    a["factorial_moment_" + std::to_string(t)] = fm;
    a["factorial_moment_se_" + std::to_string(t)] = se;
    if (t <= 2)
      rep.add_verdict("factorial_moment_" + std::to_string(t), std::fabs(fm - target) <= cfg.tol.sigmas * se, fm - target,
                      cfg.tol.sigmas * se, "E[X]_t - lambda^t within sigmas * SE");
  }
  Table pmf{"isolated_pmf", "k", "frequency", {}};
  for (auto [k, f] : s.histogram) pmf.rows.emplace_back(static_cast<double>(k), static_cast<double>(f) / static_cast<double>(s.count));
  rep.tables.push_back(std::move(pmf));
  return rep;
}

inline ExperimentReport run_formula_validation(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  std::vector<std::int64_t> grid = cfg.m_grid;
  if (grid.empty()) grid.push_back(*cfg.m);
  const auto T = static_cast<std::size_t>(cfg.trials);
  Json points = Json::array();
  Table curve{"probability_curve", "m", "estimate", {}};
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const std::int64_t m = grid[j];
    const Estimate est = log_partial_steiner_probability(p, m);
    const double predicted = est.value.to_double();
    if (predicted < 1e-4) {
      rep.skipped.push_back("m=" + std::to_string(m) + ": predicted probability " + std::to_string(predicted) + " below 1e-4");
      continue;
    }
    std::vector<char> ok(T);
    const std::size_t first = rep.records.size();
    rep.records.resize(first + T);
    parallel_for(T, cfg.threads, [&](std::size_t i) {
      Rng rng = Rng::for_stream(cfg.seed, j * T + i);
      ok[i] = try_sample_system(p, m, rng).has_value();
      Json rec;
      rec["m"] = m;
      rec["trial"] = i;
      rec["partial_steiner"] = static_cast<bool>(ok[i]);
      rep.records[first + i] = rec.dump();
    });
    Proportion prop{static_cast<std::uint64_t>(std::count(ok.begin(), ok.end(), 1)), T};
    const double e = prop.estimate(), se = prop.standard_error();
    const double rel = std::fabs(e - predicted) / predicted;
    Json pt;
    pt["m"] = m;
    pt["samples"] = T;
    pt["hits"] = prop.hits;
    pt["estimate"] = e;
    pt["standard_error"] = se;
    pt["predicted"] = predicted;
    pt["dropped"] = est.dropped;
    pt["relative_error"] = rel;
    const std::string tag = "m=" + std::to_string(m);
    if (detail::oracle_feasible(p, m)) {
      const Rational exact = Rational(count_systems(p, m, detail::oracle_budget()), binomial_big(static_cast<std::int64_t>(p.num_rsets()), m));
      const double ex = detail::to_double(exact);
      pt["exact"] = ex;
      const double band = std::max(cfg.tol.sigmas * se, 1e-12);
      rep.add_verdict("exact_" + tag, std::fabs(e - ex) <= band, e - ex, band, "estimate vs exact oracle");
    } else {
      rep.add_verdict("formula_" + tag, rel <= cfg.tol.relative, rel, cfg.tol.relative, "relative error vs exp(exponent)");
    }
    points.push_back(pt);
    curve.rows.emplace_back(static_cast<double>(m), e);
  }
  rep.aggregates["points"] = points;
  rep.tables.push_back(std::move(curve));
  return rep;
}

namespace detail {

/// Shared body of the containment and degree-zero validations: samples uniform
/// systems and records a 0/1 event per trial.
template <typename Event>
std::vector<char> sample_events(ExperimentReport& rep, const ExperimentConfig& cfg, const char* event_name, Event&& event,
                                std::uint64_t& attempts) {
  const Params p = cfg.params();
  const std::int64_t m = *cfg.m;
  const auto T = static_cast<std::size_t>(cfg.trials);
  rep.records.resize(T);
  std::vector<char> hit(T);
  std::vector<std::uint64_t> tries(T);
  parallel_for(T, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, i);
    SamplerStats st;
    const PartialSystem sys = sample_uniform_system(p, m, rng, &st);
    hit[i] = event(sys);
    tries[i] = st.attempts;
    Json rec;
    rec["trial"] = i;
    rec[event_name] = static_cast<bool>(hit[i]);
    rec["attempts"] = st.attempts;
    rep.records[i] = rec.dump();
  });
  attempts = std::accumulate(tries.begin(), tries.end(), std::uint64_t{0});
  return hit;
}

inline void event_verdicts(ExperimentReport& rep, const ExperimentConfig& cfg, const std::vector<char>& hit, std::uint64_t attempts,
                           const Estimate& est, const std::optional<Rational>& exact) {
  const Proportion prop{static_cast<std::uint64_t>(std::count(hit.begin(), hit.end(), 1)), hit.size()};
  const double f = prop.estimate(), se = prop.standard_error();
  const double predicted = est.value.to_double();
  auto& a = rep.aggregates;
  a["trials"] = hit.size();
  a["frequency"] = f;
  a["standard_error"] = se;
  a["predicted"] = predicted;
  a["dropped"] = est.dropped;
  a["acceptance_rate"] = static_cast<double>(hit.size()) / static_cast<double>(std::max<std::uint64_t>(attempts, 1));
  const double band = std::max(cfg.tol.sigmas * se + cfg.tol.dropped_multiple * est.dropped * predicted, 1e-12);
  rep.add_verdict("formula", std::fabs(f - predicted) <= band, f - predicted, band, "frequency vs asymptotic formula");
  if (exact) {
    const double ex = to_double(*exact);
    a["exact"] = ex;
    const double eband = std::max(cfg.tol.sigmas * se, 1e-12);
    rep.add_verdict("exact", std::fabs(f - ex) <= eband, f - ex, eband, "frequency vs exact oracle");
  }
}

}  // namespace detail

inline ExperimentReport run_containment_validation(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  const std::int64_t m = *cfg.m;
  const std::vector<RSet> K = detail::config_edges(cfg);
  if (!is_partial_steiner(K, p)) throw ConfigError("K is not a partial Steiner system");
  std::uint64_t attempts = 0;
  const auto hit = detail::sample_events(
      rep, cfg, "contains",
      [&](const PartialSystem& sys) {
        for (const auto& e : K)
          if (!sys.find_edge(e)) return false;
        return true;
      },
      attempts);
  std::optional<Rational> exact;
  if (detail::oracle_feasible(p, m)) exact = exact_containment_prob(p, m, K, detail::oracle_budget());
  rep.aggregates["m"] = m;
  rep.aggregates["k"] = K.size();
  detail::event_verdicts(rep, cfg, hit, attempts, log_containment_asymptotic(p, m, static_cast<std::int64_t>(K.size())), exact);
  return rep;
}

inline ExperimentReport run_degzero_validation(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  const std::int64_t m = *cfg.m;
  std::uint64_t attempts = 0;
  const auto hit = detail::sample_events(
      rep, cfg, "deg_zero",
      [&](const PartialSystem& sys) {
        for (Vertex v = 1; v <= static_cast<Vertex>(cfg.h); ++v)
          if (sys.degree(v) != 0) return false;
        return true;
      },
      attempts);
  std::optional<Rational> exact;
  if (detail::oracle_feasible(p, m)) exact = exact_deg_zero_prob(p, m, cfg.h, detail::oracle_budget());
  rep.aggregates["m"] = m;
  rep.aggregates["h"] = cfg.h;
  detail::event_verdicts(rep, cfg, hit, attempts, log_deg_zero_asymptotic(p, m, cfg.h), exact);
  return rep;
}

/// Distribution of the process stage m over S(n, r, ell; m). Reports the
/// chi-square statistic against uniform without a verdict.
inline ExperimentReport run_uniformity_probe(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  const std::int64_t m = *cfg.m;
  std::map<std::vector<RSet>, std::int64_t> index;
  for_each_system(p, m, [&](const std::vector<RSet>& edges) {
    const auto id = static_cast<std::int64_t>(index.size());
    index.emplace(edges, id);
  });
  const auto T = static_cast<std::size_t>(cfg.trials);
  rep.records.resize(T);
  std::vector<std::int64_t> category(T, -1);
  parallel_for(T, cfg.threads, [&](std::size_t i) {
    const std::uint64_t seed = stream_seed(cfg.seed, i);
    const ProcessTrace tr = run_process(p, seed, StopRule::at_edge_count(m));
    Json rec;
    rec["trial"] = i;
    rec["seed"] = seed;
    if (static_cast<std::int64_t>(tr.accepted.size()) == m) {
      auto edges = tr.accepted;
      std::sort(edges.begin(), edges.end());
      category[i] = index.at(edges);
      rec["category"] = category[i];
    } else {
      rec["category"] = nullptr;
    }
    rep.records[i] = rec.dump();
  });
  std::map<std::int64_t, std::uint64_t> counts;
  std::size_t unreached = 0;
  for (auto c : category) {
    if (c < 0) ++unreached;
    else ++counts[c];
  }
  auto& a = rep.aggregates;
  a["trials"] = T;
  a["categories"] = index.size();
  a["unreached"] = unreached;
  Table freq{"category_counts", "category", "count", {}};
  for (std::size_t k = 0; k < index.size(); ++k) {
    auto it = counts.find(static_cast<std::int64_t>(k));
    freq.rows.emplace_back(static_cast<double>(k), it == counts.end() ? 0.0 : static_cast<double>(it->second));
  }
  rep.tables.push_back(std::move(freq));
  if (index.size() >= 2 && unreached < T) {
    try {
      const ChiSquareResult chi = chi_square_uniformity(counts, static_cast<std::int64_t>(index.size()));
      a["chi_square"] = chi.statistic;
      a["dof"] = chi.dof;
      a["p_value"] = chi.p_value;
      a["pooled_categories"] = chi.categories;
    } catch (const std::invalid_argument& e) {
      rep.skipped.push_back(std::string("chi-square: ") + e.what());
    }
  } else {
    rep.skipped.push_back("chi-square: fewer than two categories or no completed trials");
  }
  return rep;
}

/// Classifies uniform m-edge r-graphs into the switching classes and, on the
/// first count_limit trials, compares exact switching counts with their
/// leading terms.
inline ExperimentReport run_switching_census(const ExperimentConfig& cfg) {
  ExperimentReport rep;
  rep.config = cfg;
  const Params p = cfg.params();
  const std::int64_t m = *cfg.m;
  const std::int64_t M = capacity_M(p, m);
  const auto T = static_cast<std::size_t>(cfg.trials);
  const double N = static_cast<double>(p.num_rsets());
  const double lower_factor = N - static_cast<double>(binomial_u64(p.r, p.ell)) * static_cast<double>(m) *
                                      static_cast<double>(binomial_u64(p.n - p.ell, p.r - p.ell));
  rep.records.resize(T);
  struct Row {
    ClassLabel::Kind kind = ClassLabel::Kind::InClass;
    std::size_t t = 0;
    bool counted = false;
    SwitchingCount forward, reverse;
  };
  std::vector<Row> rows(T);
  parallel_for(T, cfg.threads, [&](std::size_t i) {
    Rng rng = Rng::for_stream(cfg.seed, i);
    const GeneralGraph g(p, sample_uniform_msubset(p, m, rng));
    const ClassLabel label = classify_splus(g, M);
    Row& row = rows[i];
    row.kind = label.kind;
    row.t = label.t;
    Json rec;
    rec["trial"] = i;
    rec["class"] = to_string(label.kind);
    rec["t"] = label.t;
    if (label.in_class() && static_cast<std::int64_t>(i) < cfg.count_limit) {
      try {
        row.forward = count_forward_switchings(g, M);
        row.reverse = count_reverse_switchings(g, M);
        row.counted = true;
        rec["forward_exact"] = row.forward.exact;
        rec["forward_local"] = row.forward.local;
        rec["forward_predicted"] = row.forward.predicted;
        rec["reverse_exact"] = row.reverse.exact;
        rec["reverse_local"] = row.reverse.local;
        rec["reverse_predicted"] = row.reverse.predicted;
      } catch (const InfeasibleError& e) {
        rec["count_error"] = e.what();
      }
    }
    if (cfg.record_edges) rec["edges"] = detail::edges_json(g.edges());
    rep.records[i] = rec.dump();
  });

  std::size_t in_class = 0, counted = 0, with_clusters = 0, sandwich_violations = 0;
  std::map<std::int64_t, std::uint64_t> t_hist;
  std::map<std::string, std::uint64_t> kinds;
  double max_dev = 0.0, min_ratio = std::numeric_limits<double>::infinity(), max_ratio = 0.0;
  for (const auto& row : rows) {
    ++kinds[to_string(row.kind)];
    if (row.kind != ClassLabel::Kind::InClass) continue;
    ++in_class;
    ++t_hist[static_cast<std::int64_t>(row.t)];
    if (!row.counted) continue;
    ++counted;
    if (row.t == 0) continue;
    ++with_clusters;
    const double ratio = static_cast<double>(row.forward.exact) / row.forward.predicted;
    min_ratio = std::min(min_ratio, ratio);
    max_ratio = std::max(max_ratio, ratio);
    max_dev = std::max(max_dev, std::fabs(ratio - 1.0));
    const double lo = static_cast<double>(row.t) * lower_factor * lower_factor;
    if (static_cast<double>(row.forward.exact) < lo || static_cast<double>(row.forward.exact) > row.forward.predicted)
      ++sandwich_violations;
  }
  const double coverage = static_cast<double>(in_class) / static_cast<double>(T);
  const double coverage_threshold =
      1.0 - cfg.tol.coverage_multiple * static_cast<double>(m) * static_cast<double>(m) / std::pow(static_cast<double>(p.n), p.ell + 1);
  auto& a = rep.aggregates;
  a["trials"] = T;
  a["M"] = M;
  a["coverage"] = coverage;
  a["coverage_threshold"] = coverage_threshold;
  a["counted"] = counted;
  a["counted_with_clusters"] = with_clusters;
  Json kj = Json::object();
  for (const auto& [k, v] : kinds) kj[k] = v;
  a["classes"] = kj;
  a["t_histogram"] = detail::histogram_json(t_hist);
  rep.add_verdict("coverage", coverage >= coverage_threshold, coverage, coverage_threshold, "fraction in some S+(t)");
  if (with_clusters > 0) {
    const double band = cfg.tol.forward_band * static_cast<double>(m) / (static_cast<double>(p.n) * p.n);
    a["forward_ratio_min"] = min_ratio;
    a["forward_ratio_max"] = max_ratio;
    a["sandwich_violations"] = sandwich_violations;
    rep.add_verdict("forward_band", max_dev <= band, max_dev, band, "max |forward / (t N^2) - 1|");
    rep.add_verdict("forward_sandwich", sandwich_violations == 0, static_cast<double>(sandwich_violations), 0.0,
                    "t (N - C(r,ell) m C(n-ell,r-ell))^2 <= forward <= t N^2");
  }
  return rep;
}

/// Validates the config and dispatches on its kind.
inline ExperimentReport run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  switch (cfg.kind) {
    case ExperimentKind::Simulate: rep = run_simulate(cfg); break;
    case ExperimentKind::HittingTimes: rep = run_hitting_time_experiment(cfg); break;
    case ExperimentKind::IsolatedDist: rep = run_isolated_distribution_experiment(cfg); break;
    case ExperimentKind::ValidateCount: rep = run_formula_validation(cfg); break;
    case ExperimentKind::ValidateContainment: rep = run_containment_validation(cfg); break;
    case ExperimentKind::ValidateDegZero: rep = run_degzero_validation(cfg); break;
    case ExperimentKind::UniformityProbe: rep = run_uniformity_probe(cfg); break;
    case ExperimentKind::SwitchingCensus: rep = run_switching_census(cfg); break;
  }
  rep.wall_clock_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace steiner
