#pragma once

// Experiment reports: per-trial JSONL, aggregates, verdicts, "x y" tables and a
// CSV summary.
//
// CSV summary columns (fixed): section,name,value,threshold,passed
//   section is "aggregate" or "verdict"; threshold and passed are empty for
//   aggregates.

#include <cstdint>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "steiner/config.hpp"

namespace steiner {

using Json = nlohmann::ordered_json;

inline constexpr const char* kCodeVersion = "0.1.0";

struct Verdict {
  std::string name;
  bool passed = false;
  double observed = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct Table {
  std::string name;
  std::string x_label;
  std::string y_label;
  std::vector<std::pair<double, double>> rows;

  /// Plot-ready text: a "# x_label y_label" header then one "x y" line per row.
  std::string text() const {
    std::ostringstream os;
    os.precision(10);
    os << "# " << x_label << ' ' << y_label << '\n';
    for (auto [x, y] : rows) os << x << ' ' << y << '\n';
    return os.str();
  }
};

struct ExperimentReport {
  ExperimentConfig config;
  std::string code_version = kCodeVersion;
  /// One serialized JSON object per trial, in trial order. Contains no timing.
  std::vector<std::string> records;
  Json aggregates = Json::object();
  std::vector<Verdict> verdicts;
  std::vector<Table> tables;
  /// Grid points or instances that were not run, with the reason.
  std::vector<std::string> skipped;
  double wall_clock_seconds = 0.0;

  bool all_passed() const {
    for (const auto& v : verdicts)
      if (!v.passed) return false;
    return true;
  }

  void add_verdict(std::string name, bool passed, double observed, double threshold, std::string detail = {}) {
    verdicts.push_back({std::move(name), passed, observed, threshold, std::move(detail)});
  }

  std::string jsonl() const {
    std::string out;
    for (const auto& r : records) {
      out += r;
      out += '\n';
    }
    return out;
  }

  Json summary() const {
    Json j;
    j["code_version"] = code_version;
    j["config"] = config.to_text();
    j["seed"] = config.seed;
    j["stream_rule"] = "trial i seeds mt19937_64 with splitmix64(splitmix64(seed) ^ splitmix64(i + 0x9E3779B97F4A7C15))";
    j["trials_recorded"] = records.size();
    j["aggregates"] = aggregates;
    Json vs = Json::array();
    for (const auto& v : verdicts)
      vs.push_back({{"name", v.name}, {"passed", v.passed}, {"observed", v.observed}, {"threshold", v.threshold}, {"detail", v.detail}});
    j["verdicts"] = vs;
    j["all_passed"] = all_passed();
    j["skipped"] = skipped;
    Json ts = Json::object();
    for (const auto& t : tables) ts[t.name] = t.text();
    j["tables"] = ts;
    j["wall_clock_seconds"] = wall_clock_seconds;
    return j;
  }

  std::string csv_summary() const {
    std::ostringstream os;
    os.precision(17);
    os << "section,name,value,threshold,passed\n";
    for (const auto& [k, v] : aggregates.items()) {
      if (v.is_number() || v.is_boolean()) os << "aggregate," << k << ',' << v.dump() << ",,\n";
    }
    for (const auto& v : verdicts)
      os << "verdict," << v.name << ',' << v.observed << ',' << v.threshold << ',' << (v.passed ? "true" : "false") << '\n';
    return os.str();
  }

  /// Human-readable lines, one per verdict.
  std::string verdict_lines() const {
    std::ostringstream os;
    os.precision(6);
    for (const auto& v : verdicts) {
      os << (v.passed ? "PASS " : "FAIL ") << v.name << " observed=" << v.observed << " threshold=" << v.threshold;
      if (!v.detail.empty()) os << " (" << v.detail << ')';
      os << '\n';
    }
    return os.str();
  }
};

}  // namespace steiner
