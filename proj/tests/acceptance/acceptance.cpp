// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
//
//   acceptance            run all criteria
//   acceptance 4 9        run only the listed criteria

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "steiner/steiner.hpp"

using namespace steiner;

namespace {

struct Outcome {
  bool passed = true;
  std::string detail;

  void check(bool ok, const std::string& what) {
    if (!ok) passed = false;
    if (!detail.empty()) detail += "; ";
    detail += (ok ? "" : "FAILED ") + what;
  }
};

std::string fmt(double x, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << x;
  return os.str();
}

const Verdict* find_verdict(const ExperimentReport& rep, const std::string& name) {
  for (const auto& v : rep.verdicts)
    if (v.name == name) return &v;
  return nullptr;
}

void check_verdict(Outcome& out, const ExperimentReport& rep, const std::string& name, const std::string& label) {
  const Verdict* v = find_verdict(rep, name);
  if (!v) {
    out.check(false, label + ": verdict '" + name + "' missing");
    return;
  }
  out.check(v->passed, label + " " + name + " observed=" + fmt(v->observed) + " threshold=" + fmt(v->threshold));
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Outcome crit1() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  out.check(count_systems({5, 3, 2}, 2) == 15, "|S(5,3,2;2)| = " + count_systems({5, 3, 2}, 2).str());
  int bad = 0, cases = 0;
  for (int n = 3; n <= 12; ++n)
    for (int r = 3; r <= std::min(5, n); ++r)
      for (int ell = 2; ell < r; ++ell) {
        ++cases;
        if (count_systems({n, r, ell}, 1) != binomial_big(n, r)) ++bad;
      }
  out.check(bad == 0, "m=1 count equals C(n,r) in " + std::to_string(cases - bad) + "/" + std::to_string(cases) + " cases");
  int ordered_bad = 0, ordered_cases = 0;
  for (int n = 3; n <= 6; ++n)
    for (int r = 3; r <= n; ++r)
      for (int ell = 2; ell < r; ++ell)
        for (std::int64_t m = 0; m <= 3; ++m) {
          ++ordered_cases;
          if (count_ordered_sequences({n, r, ell}, m) != count_systems({n, r, ell}, m) * falling_factorial<BigInt>(m, m))
            ++ordered_bad;
        }
  out.check(ordered_bad == 0, "ordered = m! * unordered in " + std::to_string(ordered_cases - ordered_bad) + "/" +
                                  std::to_string(ordered_cases) + " cases");
  const double secs = seconds_since(t0);
  out.check(secs < 10, "runtime " + fmt(secs, 3) + " s < 10 s");
  return out;
}

Outcome crit2() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ValidateCount;
  cfg.n = 40;
  cfg.m_grid = {13};
  cfg.trials = 100'000;
  cfg.seed = 2;
  const auto rep = run_experiment(cfg);
  const auto& pt = rep.aggregates["points"][0];
  out.check(true, "estimate " + fmt(pt["estimate"].get<double>()) + " vs exp(-[r]_2^2 [m]_2/(4n^2)) = " +
                      fmt(std::exp(-quadratic_exponent(cfg.params(), 13))));
  const double leading = std::exp(-quadratic_exponent(cfg.params(), 13));
  const double rel = std::fabs(pt["estimate"].get<double>() - leading) / leading;
  out.check(rel <= 0.05, "relative error vs quadratic-term formula " + fmt(rel) + " <= 0.05");
  check_verdict(out, rep, "formula_m=13", "full exponent");
  out.check(rep.wall_clock_seconds < 120, "runtime " + fmt(rep.wall_clock_seconds, 3) + " s < 120 s");
  return out;
}

Outcome crit3() {
  Outcome out;
  int bad = 0, cases = 0;
  for (int n = 3; n <= 200; n += 11)
    for (int r = 3; r <= 10; ++r)
      for (std::int64_t m = 0; m <= 500; m += 37) {
        const Params p{std::max(n, r), r, 2};
        ++cases;
        if (quadratic_exponent_exact(p, m) != linear_quadratic_exponent_exact(p.n, r, m)) ++bad;
      }
  out.check(bad == 0, "general exponent at ell=2 equals the linear quadratic term exactly in " + std::to_string(cases - bad) +
                          "/" + std::to_string(cases) + " cases");
  return out;
}

Outcome crit4() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  const Rational exact = exact_containment_prob({5, 3, 2}, 2, {RSet{1, 2, 3}});
  out.check(exact == Rational(1, 5), "exact oracle " + exact.str());

  ExperimentConfig tiny;
  tiny.kind = ExperimentKind::ValidateContainment;
  tiny.n = 5;
  tiny.m = 2;
  tiny.K = {{1, 2, 3}};
  tiny.trials = 100'000;
  tiny.seed = 4;
  const auto rep1 = run_experiment(tiny);
  const double f = rep1.aggregates["frequency"].get<double>();
  out.check(std::fabs(f - 0.2) <= 0.004, "(5,3,2) m=2 frequency " + fmt(f) + " within 0.200 +- 0.004");

  ExperimentConfig big;
  big.kind = ExperimentKind::ValidateContainment;
  big.n = 30;
  big.m = 20;
  big.K = {{1, 2, 3}};
  big.trials = 1'000'000;
  big.seed = 4;
  big.tol.dropped_multiple = 0;  // plain 3 standard errors
  const auto rep2 = run_experiment(big);
  check_verdict(out, rep2, "formula", "(30,3,2) m=20 k=1");
  const double secs = seconds_since(t0);
  out.check(secs < 300, "runtime " + fmt(secs, 3) + " s < 300 s");
  return out;
}

Outcome crit5() {
  Outcome out;
  const Rational exact = exact_deg_zero_prob({5, 3, 2}, 1, 1);
  out.check(exact == Rational(2, 5), "exact_deg_zero_prob(5,3,2;1,1) = " + exact.str());
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::ValidateDegZero;
  cfg.n = 60;
  cfg.m = 20;
  cfg.h = 1;
  cfg.trials = 100'000;
  cfg.seed = 5;
  const auto rep = run_experiment(cfg);
  out.check(true, "frequency " + fmt(rep.aggregates["frequency"].get<double>()) + " vs exp(-1)");
  check_verdict(out, rep, "formula", "(60,3,2) m=20");
  return out;
}

Outcome crit6() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::HittingTimes;
  cfg.n = 2000;
  cfg.trials = 100;
  cfg.seed = 6;
  const auto rep = run_experiment(cfg);
  check_verdict(out, rep, "fraction_equal", "n=2000");
  check_verdict(out, rep, "tau_c_in_window", "n=2000");
  out.check(rep.wall_clock_seconds < 600, "runtime " + fmt(rep.wall_clock_seconds, 3) + " s < 600 s");
  return out;
}

Outcome crit7() {
  Outcome out;
  for (int n : {500, 1000, 2000, 4000}) {
    ExperimentConfig cfg;
    cfg.kind = ExperimentKind::HittingTimes;
    cfg.n = n;
    cfg.trials = 50;
    cfg.seed = 7;
    const auto rep = run_experiment(cfg);
    check_verdict(out, rep, "median_scaled_in_window", "n=" + std::to_string(n));
  }
  return out;
}

Outcome crit8() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::IsolatedDist;
  cfg.n = 5000;
  cfg.c = 0;
  cfg.trials = 1000;
  cfg.seed = 8;
  const auto rep = run_experiment(cfg);
  out.check(rep.aggregates["m"] == threshold_at(5000, 3, 0.0), "stage m = " + rep.aggregates["m"].dump());
  check_verdict(out, rep, "poisson_tv", "n=5000");
  check_verdict(out, rep, "factorial_moment_1", "n=5000");
  check_verdict(out, rep, "factorial_moment_2", "n=5000");
  out.check(rep.wall_clock_seconds < 900, "runtime " + fmt(rep.wall_clock_seconds, 3) + " s < 900 s");
  return out;
}

Outcome crit9() {
  Outcome out;
  const Params tiny{6, 3, 2};
  const auto c = count_Pr(GeneralGraph(tiny, {RSet{1, 2, 3}}), RSet{4, 5, 6});
  out.check(c.exact == 9, "count_Pr on (6,3,2), g={{1,2,3}}, e_i={4,5,6} = " + std::to_string(c.exact));
  const Params p{30, 3, 2};
  const std::int64_t m = 15;
  const double N = static_cast<double>(p.num_rsets());
  const double bound = 10.0 * m * m / std::pow(30.0, 3);
  Rng rng(9);
  double worst = 0;
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const PartialSystem sys = sample_uniform_system(p, m, rng);
    const PrCount pr = count_Pr(sys, sample_uniform_rset(p, rng));
    const double dev = std::fabs(static_cast<double>(pr.exact) - pr.predicted) / N;
    worst = std::max(worst, dev);
    violations += dev > bound;
  }
  out.check(violations == 0, "100 linear systems at n=30, m=15: max |exact - predicted| / N = " + fmt(worst) +
                                 " <= " + fmt(bound));
  return out;
}

Outcome crit10() {
  Outcome out;
  for (int n = 6; n <= 8; ++n)
    for (std::int64_t m = 2; m <= 3; ++m) {
      const Params p{n, 3, 2};
      const DoubleCountingCheck d = double_counting_check(p, m, 1);
      const std::string tag = "n=" + std::to_string(n) + " m=" + std::to_string(m);
      out.check(d.forward_total == d.reverse_total,
                tag + " forward " + std::to_string(d.forward_total) + " = reverse " + std::to_string(d.reverse_total));
      const auto s0 = d.class_sizes.count(0) ? d.class_sizes.at(0) : 0;
      const auto s1 = d.class_sizes.count(1) ? d.class_sizes.at(1) : 0;
      const double ratio = static_cast<double>(s1) / static_cast<double>(s0);
      const double pred = static_cast<double>(m * (m - 1) / 2) * 36.0 / (2.0 * n * n);
      out.check(std::fabs(ratio / pred - 1.0) <= 10.0 / n,
                tag + " |S+(1)|/|S+(0)| = " + fmt(ratio) + " vs " + fmt(pred) + " (factor " + fmt(ratio / pred) + ")");
    }
  return out;
}

Outcome crit11() {
  Outcome out;
  const auto t0 = std::chrono::steady_clock::now();
  Rng rng(11);
  int accepted = 0, violations = 0;
  for (int iter = 0; iter < 10'000; ++iter) {
    SummationInput in;
    in.N = 2 + static_cast<int>(rng.below(60));
    in.c_hat = 1e-3 + rng.uniform01() * (1.0 / 3.0 - 2e-3);
    for (int i = 1; i <= in.N; ++i) {
      const double a = rng.uniform01() * in.c_hat * in.N;
      double b = a > 0 ? (2 * rng.uniform01() - 1) * in.c_hat / a : 0.0;
      if (i > 1) b = std::min(b, 1.0 / (i - 1));
      in.A.push_back(a);
      in.B.push_back(b);
    }
    const SummationBounds s = summation_bounds(in);
    ++accepted;
    const double tol = 1e-12 * s.exact_sum;
    if (!(s.sigma1 <= s.exact_sum + tol && s.exact_sum <= s.sigma2 + tol)) ++violations;
  }
  out.check(violations == 0, "sandwich held on " + std::to_string(accepted - violations) + "/" + std::to_string(accepted) + " inputs");
  const double secs = seconds_since(t0);
  out.check(secs < 10, "runtime " + fmt(secs, 3) + " s < 10 s");
  return out;
}

Outcome crit12() {
  Outcome out;
  ExperimentConfig cfg;
  cfg.kind = ExperimentKind::SwitchingCensus;
  cfg.n = 40;
  cfg.m = 13;
  cfg.trials = 100'000;
  cfg.count_limit = 0;
  cfg.seed = 12;
  const auto rep = run_experiment(cfg);
  check_verdict(out, rep, "coverage", "(40,3,2) m=13");
  out.check(true, "classes " + rep.aggregates["classes"].dump());
  return out;
}

Outcome crit13() {
  Outcome out;
  std::vector<ExperimentConfig> cfgs;
  {
    ExperimentConfig c;
    c.kind = ExperimentKind::HittingTimes;
    c.n = 300;
    c.trials = 24;
    cfgs.push_back(c);
    c.kind = ExperimentKind::IsolatedDist;
    c.n = 400;
    cfgs.push_back(c);
    c.kind = ExperimentKind::ValidateCount;
    c.n = 40;
    c.m_grid = {5, 13};
    c.trials = 500;
    cfgs.push_back(c);
    c.kind = ExperimentKind::ValidateContainment;
    c.m = 13;
    c.K = {{1, 2, 3}};
    cfgs.push_back(c);
    c.kind = ExperimentKind::SwitchingCensus;
    c.n = 14;
    c.m = 5;
    c.K.clear();
    c.trials = 30;
    c.count_limit = 10;
    c.record_edges = true;
    cfgs.push_back(c);
  }
  for (auto cfg : cfgs) {
    cfg.seed = 13;
    std::string reference;
    bool same = true;
    for (int threads : {1, 4, 8}) {
      cfg.threads = threads;
      const std::string jsonl = run_experiment(cfg).jsonl();
      if (threads == 1) reference = jsonl;
      else same = same && jsonl == reference;
    }
    out.check(same && !reference.empty(), to_string(cfg.kind) + " JSONL identical at 1/4/8 workers");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"exact oracle fidelity", crit1},
      {"count formula at (40,3,2), m=13", crit2},
      {"ell=2 branch identity", crit3},
      {"containment probability", crit4},
      {"degree-zero probability", crit5},
      {"hitting times at n=2000", crit6},
      {"threshold median trend", crit7},
      {"Poisson isolated vertices at n=5000", crit8},
      {"free r-set count", crit9},
      {"switching double counting and class ratio", crit10},
      {"summation sandwich", crit11},
      {"class coverage at (40,3,2), m=13", crit12},
      {"determinism across worker counts", crit13},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.passed = false;
      o.detail = std::string("exception: ") + e.what();
    }
    failures += !o.passed;
    std::printf("%s %2d %s [%.1f s]: %s\n", o.passed ? "PASS" : "FAIL", id, criteria[i].first.c_str(), seconds_since(t0),
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures ? 1 : 0;
}
