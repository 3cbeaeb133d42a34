#pragma once

// Experiment configuration and its key = value text format.
//
//   # comment
//   kind = hitting-times
//   n = 2000
//   m_grid = 2,5,13
//   omega = auto
//   K = 1 2 3; 4 5 6
//
// Every field has one key; unknown or repeated keys are errors. to_text() writes
// every key, so parse(to_text(cfg)) == cfg.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "steiner/combinatorics.hpp"
#include "steiner/hypergraph.hpp"

namespace steiner {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class ExperimentKind {
  Simulate,
  HittingTimes,
  IsolatedDist,
  ValidateCount,
  ValidateContainment,
  ValidateDegZero,
  UniformityProbe,
  SwitchingCensus,
};

inline const std::vector<std::pair<ExperimentKind, std::string>>& experiment_kinds() {
  static const std::vector<std::pair<ExperimentKind, std::string>> kinds = {
      {ExperimentKind::Simulate, "simulate"},
      {ExperimentKind::HittingTimes, "hitting-times"},
      {ExperimentKind::IsolatedDist, "isolated-dist"},
      {ExperimentKind::ValidateCount, "validate-count"},
      {ExperimentKind::ValidateContainment, "validate-containment"},
      {ExperimentKind::ValidateDegZero, "validate-degzero"},
      {ExperimentKind::UniformityProbe, "uniformity-probe"},
      {ExperimentKind::SwitchingCensus, "switching-census"},
  };
  return kinds;
}

inline std::string to_string(ExperimentKind k) {
  for (const auto& [kind, name] : experiment_kinds())
    if (kind == k) return name;
  throw std::logic_error("unknown experiment kind");
}

inline ExperimentKind parse_kind(std::string_view s) {
  for (const auto& [kind, name] : experiment_kinds())
    if (name == s) return kind;
  throw ConfigError("unknown experiment kind '" + std::string(s) + "'");
}

/// Declared tolerances; every verdict refers to one of these.
struct Tolerances {
  double fraction = 0.95;           // hitting-time fractions
  double median_window = 2.0;       // |median of r tau_c / n - log n| <= this * omega
  double tv = 0.05;                 // Poisson TV distance
  double sigmas = 3.0;              // Monte Carlo standard errors
  double dropped_multiple = 10.0;   // multiple of the dropped-term budget
  double relative = 0.05;           // relative error of the count formula
  double coverage_multiple = 10.0;  // coverage >= 1 - this * m^2 / n^(ell+1)
  double forward_band = 10.0;       // forward / (t N^2) within 1 +- this * m / n^2

  friend bool operator==(const Tolerances&, const Tolerances&) = default;
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Simulate;
  int n = 0;
  int r = 3;
  int ell = 2;
  std::int64_t trials = 1;
  std::uint64_t seed = 1;
  int threads = 1;
  std::optional<std::int64_t> m;   // stage / edge count; kind-specific default when absent
  std::vector<std::int64_t> m_grid;
  double c = 0.0;
  std::optional<double> omega;     // absent: log log n
  std::int64_t h = 1;              // vertices forced to degree zero
  std::vector<std::vector<Vertex>> K;
  /// Switching census: exact counters run on trials with index below this.
  std::int64_t count_limit = 100;
  bool record_edges = false;
  Tolerances tol;

  Params params() const { return {n, r, ell}; }

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;

  void validate() const {
    try {
      params().validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
    if (trials < 1) throw ConfigError("trials must be >= 1");
    if (threads < 1 || threads > 1024) throw ConfigError("threads must lie in [1, 1024]");
    if (h < 0 || h > n) throw ConfigError("h must lie in [0, n]");
    if (count_limit < 0) throw ConfigError("count_limit must be >= 0");
    if (!std::isfinite(c)) throw ConfigError("c must be finite");
    if (omega && !(*omega >= 0.0 && std::isfinite(*omega))) throw ConfigError("omega must be finite and >= 0");
    auto check_m = [&](std::int64_t mm, const char* what) {
      if (mm < 0) throw ConfigError(std::string(what) + " must be >= 0");
      std::uint64_t N = 0;
      try {
        N = params().num_rsets();
      } catch (const std::overflow_error&) {
        return;
      }
      if (static_cast<std::uint64_t>(mm) > N) throw ConfigError(std::string(what) + " exceeds C(n,r)");
    };
    if (m) check_m(*m, "m");
    for (auto mm : m_grid) check_m(mm, "m_grid entry");
    for (const auto& e : K) {
      if (static_cast<int>(e.size()) != r) throw ConfigError("K edges must have r vertices");
      try {
        check_rset(params(), RSet(e));
      } catch (const std::invalid_argument& ex) {
        throw ConfigError(std::string("K: ") + ex.what());
      }
    }
    const auto& t = tol;
    if (!(t.fraction >= 0 && t.fraction <= 1)) throw ConfigError("tol_fraction must lie in [0, 1]");
    if (!(t.tv >= 0 && t.tv <= 1)) throw ConfigError("tol_tv must lie in [0, 1]");
    if (!(t.sigmas >= 0 && t.dropped_multiple >= 0 && t.relative >= 0 && t.coverage_multiple >= 0 && t.forward_band >= 0 &&
          t.median_window >= 0))
      throw ConfigError("tolerances must be non-negative");

    switch (kind) {
      case ExperimentKind::ValidateCount:
        if (m_grid.empty() && !m) throw ConfigError("validate-count needs m or m_grid");
        break;
      case ExperimentKind::ValidateContainment:
      case ExperimentKind::ValidateDegZero:
      case ExperimentKind::UniformityProbe:
      case ExperimentKind::SwitchingCensus:
        if (!m) throw ConfigError(to_string(kind) + " needs m");
        break;
      default:
        break;
    }
  }

  std::string to_text() const {
    std::ostringstream os;
    os << "kind = " << to_string(kind) << '\n';
    os << "n = " << n << '\n' << "r = " << r << '\n' << "ell = " << ell << '\n';
    os << "trials = " << trials << '\n' << "seed = " << seed << '\n' << "threads = " << threads << '\n';
    os << "m = " << (m ? std::to_string(*m) : "auto") << '\n';
    os << "m_grid = ";
    for (std::size_t i = 0; i < m_grid.size(); ++i) os << (i ? "," : "") << m_grid[i];
    os << '\n';
    os << "c = " << format_double(c) << '\n';
    os << "omega = " << (omega ? format_double(*omega) : "auto") << '\n';
    os << "h = " << h << '\n';
    os << "K = ";
    for (std::size_t i = 0; i < K.size(); ++i) {
      if (i) os << "; ";
      for (std::size_t j = 0; j < K[i].size(); ++j) os << (j ? " " : "") << K[i][j];
    }
    os << '\n';
    os << "count_limit = " << count_limit << '\n';
    os << "record_edges = " << (record_edges ? "true" : "false") << '\n';
    os << "tol_fraction = " << format_double(tol.fraction) << '\n';
    os << "tol_median_window = " << format_double(tol.median_window) << '\n';
    os << "tol_tv = " << format_double(tol.tv) << '\n';
    os << "tol_sigmas = " << format_double(tol.sigmas) << '\n';
    os << "tol_dropped_multiple = " << format_double(tol.dropped_multiple) << '\n';
    os << "tol_relative = " << format_double(tol.relative) << '\n';
    os << "tol_coverage_multiple = " << format_double(tol.coverage_multiple) << '\n';
    os << "tol_forward_band = " << format_double(tol.forward_band) << '\n';
    return os.str();
  }

  /// Parses the text format; keys absent from the text keep their defaults.
  static ExperimentConfig parse(std::string_view text) {
    ExperimentConfig cfg;
    std::vector<std::string> seen;
    std::istringstream is{std::string(text)};
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      const auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      line = trim(line);
      if (line.empty()) continue;
      const auto eq = line.find('=');
      if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
      const std::string key = trim(line.substr(0, eq));
      const std::string value = trim(line.substr(eq + 1));
      for (const auto& s : seen)
        if (s == key) throw ConfigError("config line " + std::to_string(lineno) + ": repeated key '" + key + "'");
      seen.push_back(key);
      try {
        cfg.set(key, value);
      } catch (const ConfigError& e) {
        throw ConfigError("config line " + std::to_string(lineno) + ": " + e.what());
      }
    }
    return cfg;
  }

  static ExperimentConfig load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse(buf.str());
  }

  /// Sets one field from its text form.
  void set(const std::string& key, const std::string& value) {
    if (key == "kind") kind = parse_kind(value);
    else if (key == "n") n = static_cast<int>(parse_int(key, value));
    else if (key == "r") r = static_cast<int>(parse_int(key, value));
    else if (key == "ell") ell = static_cast<int>(parse_int(key, value));
    else if (key == "trials") trials = parse_int(key, value);
    else if (key == "seed") seed = parse_uint(key, value);
    else if (key == "threads") threads = static_cast<int>(parse_int(key, value));
    else if (key == "m") m = (value == "auto" || value.empty()) ? std::nullopt : std::optional<std::int64_t>(parse_int(key, value));
    else if (key == "m_grid") m_grid = parse_int_list(key, value);
    else if (key == "c") c = parse_double(key, value);
    else if (key == "omega") omega = (value == "auto" || value.empty()) ? std::nullopt : std::optional<double>(parse_double(key, value));
    else if (key == "h") h = parse_int(key, value);
    else if (key == "K") K = parse_edges(value);
    else if (key == "count_limit") count_limit = parse_int(key, value);
    else if (key == "record_edges") record_edges = parse_bool(key, value);
    else if (key == "tol_fraction") tol.fraction = parse_double(key, value);
    else if (key == "tol_median_window") tol.median_window = parse_double(key, value);
    else if (key == "tol_tv") tol.tv = parse_double(key, value);
    else if (key == "tol_sigmas") tol.sigmas = parse_double(key, value);
    else if (key == "tol_dropped_multiple") tol.dropped_multiple = parse_double(key, value);
    else if (key == "tol_relative") tol.relative = parse_double(key, value);
    else if (key == "tol_coverage_multiple") tol.coverage_multiple = parse_double(key, value);
    else if (key == "tol_forward_band") tol.forward_band = parse_double(key, value);
    else throw ConfigError("unknown key '" + key + "'");
  }

  static std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
  }

 private:
  static std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }

  static std::int64_t parse_int(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const long long x = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected an integer, got '" + v + "'");
    }
  }

  static std::uint64_t parse_uint(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      if (!v.empty() && v[0] == '-') throw std::invalid_argument(v);
      const unsigned long long x = std::stoull(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
    }
  }

  static double parse_double(const std::string& key, const std::string& v) {
    try {
      std::size_t pos = 0;
      const double x = std::stod(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return x;
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected a number, got '" + v + "'");
    }
  }

  static bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError(key + ": expected true or false, got '" + v + "'");
  }

  static std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& v) {
    std::vector<std::int64_t> out;
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ',')) {
      item = trim(item);
      if (!item.empty()) out.push_back(parse_int(key, item));
    }
    return out;
  }

  static std::vector<std::vector<Vertex>> parse_edges(const std::string& v) {
    std::vector<std::vector<Vertex>> out;
    std::istringstream is(v);
    std::string item;
    while (std::getline(is, item, ';')) {
      item = trim(item);
      if (item.empty()) continue;
      std::istringstream row(item);
      std::vector<Vertex> e;
      std::string tok;
      while (row >> tok) {
        const auto x = parse_int("K", tok);
        if (x < 1) throw ConfigError("K: labels are 1-based");
        e.push_back(static_cast<Vertex>(x));
      }
      out.push_back(std::move(e));
    }
    return out;
  }
};

}  // namespace steiner
