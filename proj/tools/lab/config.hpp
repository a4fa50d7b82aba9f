#pragma once

// Experiment configuration: a single JSON document with a "schema" tag, parsed
// into a typed record and validated with field paths.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include <srrw/estimators.hpp>
#include <srrw/evolving_set.hpp>
#include <srrw/oracle.hpp>

namespace lab {

using json = nlohmann::json;

inline constexpr const char* schema_tag = "srrw-lab/1";

enum class experiment_kind { tv_curve, mixing_scan, phase_transition, cutoff, forest_stats, profiles, oracle_check };

inline const std::vector<std::pair<std::string, experiment_kind>>& kind_names() {
  static const std::vector<std::pair<std::string, experiment_kind>> names = {
      {"tv-curve", experiment_kind::tv_curve},
      {"mixing-scan", experiment_kind::mixing_scan},
      {"phase-transition", experiment_kind::phase_transition},
      {"cutoff", experiment_kind::cutoff},
      {"forest-stats", experiment_kind::forest_stats},
      {"profiles", experiment_kind::profiles},
      {"oracle-check", experiment_kind::oracle_check}};
  return names;
}

inline std::string to_string(experiment_kind k) {
  for (const auto& [name, kind] : kind_names())
    if (kind == k) return name;
  return "?";
}

struct grid_spec {
  std::string type = "geometric";  // geometric | linear | list
  std::uint64_t n_max = 1000, dense_until = 10;
  double per_decade = 40.0;
  std::uint64_t start = 1, stop = 1, step = 1;
  std::vector<std::uint64_t> values;

  srrw::time_grid build() const {
    if (type == "linear") return srrw::linear_grid(start, stop, step);
    if (type == "list") return values;
    return srrw::geometric_grid(n_max, dense_until, per_decade);
  }
};

struct experiment_config {
  std::string name;
  experiment_kind kind = experiment_kind::tv_curve;
  std::string group_kind = "cyclic";
  std::uint32_t group_size = 0;
  std::vector<std::uint32_t> sizes;  // phase-transition L list, cutoff d list
  json mu = "simple";
  std::vector<double> alphas;
  grid_spec grid;
  std::uint64_t replicas = 1;
  std::uint64_t seed = 1;
  std::string estimator;
  std::vector<double> epsilons;
  std::uint64_t horizon = 0;
  std::optional<double> smoothing;
  unsigned threads = 0;
  std::string output_dir = "out";
  // forest-stats
  std::uint32_t n = 0;
  std::uint32_t block_length = 0;
  std::vector<std::uint32_t> index_set;
  bool dump_forest = false;
  // profiles
  std::string profile_mode = "exhaustive";
  std::uint64_t samples = 20000;
  std::uint32_t trajectory_steps = 0;
  // oracle-check
  std::uint32_t n_max = 6;
};

struct diagnostic {
  std::string field;
  std::string message;
  bool capacity = false;
};

inline constexpr double memory_cap_megabytes = 2000.0;

struct validation_report {
  std::vector<diagnostic> errors;
  double estimated_seconds = 0.0;
  double estimated_megabytes = 0.0;

  bool ok() const { return errors.empty(); }
  bool capacity_only() const {
    for (const auto& e : errors)
      if (!e.capacity) return false;
    return !errors.empty();
  }
};

namespace detail {

// Collects type errors with JSON-pointer-like paths instead of throwing.
class reader {
 public:
  reader(const json& doc, validation_report& rep) : doc_(doc), rep_(rep) {}

  bool has(const std::string& key) const { return doc_.is_object() && doc_.contains(key); }

  template <class T>
  void get(const std::string& key, T& out, bool required = false) {
    if (!has(key)) {
      if (required) fail(key, "is required");
      return;
    }
    try {
      out = doc_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(key, "has the wrong type");
    }
  }

  void fail(const std::string& key, const std::string& msg, bool capacity = false) {
    rep_.errors.push_back({key, msg, capacity});
  }

 private:
  const json& doc_;
  validation_report& rep_;
};

inline std::string member(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

}  // namespace detail

inline experiment_config parse_config(const json& doc, validation_report& rep) {
  experiment_config c;
  detail::reader r(doc, rep);
  if (!doc.is_object()) {
    r.fail("", "config must be a JSON object");
    return c;
  }
  std::string schema;
  r.get("schema", schema, true);
  if (r.has("schema") && schema != schema_tag)
    r.fail("schema", "unsupported schema '" + schema + "', expected '" + schema_tag + "'");

  static const std::vector<std::string> known = {
      "schema",     "name",    "kind",        "group",        "sizes",       "mu",
      "alpha",      "grid",    "replicas",    "seed",         "estimator",   "epsilon",
      "horizon",    "smoothing", "threads",   "output",       "n",           "block_length",
      "index_set",  "dump_forest", "mode",    "samples",      "trajectory_steps", "n_max"};
  for (const auto& [key, value] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end()) r.fail(key, "unknown field");

  r.get("name", c.name);
  std::string kind;
  r.get("kind", kind, true);
  bool kind_ok = false;
  for (const auto& [name, k] : kind_names())
    if (name == kind) {
      c.kind = k;
      kind_ok = true;
    }
  if (r.has("kind") && !kind_ok) r.fail("kind", "unknown experiment kind '" + kind + "'");

  if (r.has("group")) {
    const auto& g = doc.at("group");
    if (!g.is_object()) r.fail("group", "must be an object {kind, size}");
    else {
      detail::reader gr(g, rep);
      const std::size_t before = rep.errors.size();
      gr.get("kind", c.group_kind, true);
      std::int64_t size = 0;
      gr.get("size", size, true);
      if (size < 0 || size > 0xFFFFFFFFll) gr.fail("size", "out of range");
      else c.group_size = static_cast<std::uint32_t>(size);
      for (std::size_t i = before; i < rep.errors.size(); ++i)
        rep.errors[i].field = detail::member("group", rep.errors[i].field);
    }
  }
  r.get("sizes", c.sizes);
  if (r.has("mu")) c.mu = doc.at("mu");

  if (r.has("alpha")) {
    const auto& a = doc.at("alpha");
    if (a.is_number()) c.alphas = {a.get<double>()};
    else r.get("alpha", c.alphas);
  }

  if (r.has("grid")) {
    const auto& g = doc.at("grid");
    if (!g.is_object()) r.fail("grid", "must be an object");
    else {
      detail::reader gr(g, rep);
      const std::size_t before = rep.errors.size();
      gr.get("type", c.grid.type);
      gr.get("n_max", c.grid.n_max);
      gr.get("dense_until", c.grid.dense_until);
      gr.get("per_decade", c.grid.per_decade);
      gr.get("start", c.grid.start);
      gr.get("stop", c.grid.stop);
      gr.get("step", c.grid.step);
      gr.get("values", c.grid.values);
      for (std::size_t i = before; i < rep.errors.size(); ++i)
        rep.errors[i].field = detail::member("grid", rep.errors[i].field);
    }
  }

  std::int64_t replicas = 1;
  r.get("replicas", replicas);
  if (replicas < 1) r.fail("replicas", "must be >= 1");
  else c.replicas = static_cast<std::uint64_t>(replicas);
  if (r.has("seed")) {
    const auto& s = doc.at("seed");
    if (s.is_number_unsigned()) c.seed = s.get<std::uint64_t>();
    else if (s.is_number_integer() && s.get<std::int64_t>() >= 0) c.seed = s.get<std::uint64_t>();
    else r.fail("seed", "must be a non-negative 64-bit integer");
  }
  r.get("estimator", c.estimator);
  if (r.has("epsilon")) {
    const auto& e = doc.at("epsilon");
    if (e.is_number()) c.epsilons = {e.get<double>()};
    else r.get("epsilon", c.epsilons);
  }
  r.get("horizon", c.horizon);
  if (r.has("smoothing")) {
    double b = 0;
    r.get("smoothing", b);
    c.smoothing = b;
  }
  r.get("threads", c.threads);
  if (r.has("output")) {
    const auto& o = doc.at("output");
    if (o.is_string()) c.output_dir = o.get<std::string>();
    else if (o.is_object() && o.contains("dir") && o.at("dir").is_string())
      c.output_dir = o.at("dir").get<std::string>();
    else r.fail("output", "must be a directory string or {dir}");
  }
  r.get("n", c.n);
  r.get("block_length", c.block_length);
  r.get("index_set", c.index_set);
  r.get("dump_forest", c.dump_forest);
  r.get("mode", c.profile_mode);
  r.get("samples", c.samples);
  r.get("trajectory_steps", c.trajectory_steps);
  r.get("n_max", c.n_max);
  return c;
}

// Builds the step distribution named by the "mu" field.
inline srrw::step_distribution build_mu(const srrw::finite_group& g, const json& mu) {
  using namespace srrw;
  if (mu.is_string()) {
    const auto name = mu.get<std::string>();
    if (name == "simple") return simple_cycle_step(g);
    if (name == "uniform") return uniform_step(g);
    if (name == "lazy") {
      switch (g.kind()) {
        case group_kind::cyclic: return lazy_cycle_step(g);
        case group_kind::hypercube: return lazy_hypercube_step(g);
        case group_kind::lamplighter: return lamplighter_lazy_step(g);
        default: break;
      }
      throw parameter_error("no lazy preset for " + g.describe());
    }
    throw parameter_error("unknown mu preset '" + name + "'");
  }
  if (mu.is_object()) {
    std::vector<std::pair<std::string, double>> entries;
    for (const auto& [key, value] : mu.items()) {
      if (!value.is_number()) throw parameter_error("mu entry '" + key + "' is not a number");
      entries.emplace_back(key, value.get<double>());
    }
    return step_distribution::from_notation(g, entries);
  }
  throw parameter_error("mu must be a preset name or an {element: probability} object");
}

inline bool uses_semi_exact(const experiment_config& c) {
  return c.estimator == "hypercube-semi-exact" || c.kind == experiment_kind::cutoff;
}

inline std::string default_estimator(const experiment_config& c) {
  if (!c.estimator.empty()) return c.estimator;
  switch (c.kind) {
    case experiment_kind::cutoff: return "hypercube-semi-exact";
    case experiment_kind::phase_transition: return "rao-blackwell";
    case experiment_kind::oracle_check: return "exact";
    case experiment_kind::forest_stats: return "forest";
    case experiment_kind::profiles: return c.profile_mode == "sampled" ? "profile-sampled" : "profile-exhaustive";
    default: return "empirical-direct";
  }
}

// Schema checks, then capacity checks against the library caps, then a rough cost model.
inline validation_report validate_config(const json& doc, experiment_config* out = nullptr) {
  using namespace srrw;
  validation_report rep;
  experiment_config c = parse_config(doc, rep);
  detail::reader r(doc, rep);
  c.estimator = default_estimator(c);

  const bool curve_kind = c.kind == experiment_kind::tv_curve || c.kind == experiment_kind::mixing_scan ||
                          c.kind == experiment_kind::phase_transition || c.kind == experiment_kind::cutoff;
  if (c.alphas.empty() && c.kind != experiment_kind::profiles) r.fail("alpha", "needs at least one value");
  for (std::size_t i = 0; i < c.alphas.size(); ++i)
    if (!(c.alphas[i] >= 0.0 && c.alphas[i] < 1.0))
      r.fail("alpha[" + std::to_string(i) + "]", "must lie in [0,1)");

  time_grid grid;
  if (curve_kind) {
    if (c.grid.type != "geometric" && c.grid.type != "linear" && c.grid.type != "list")
      r.fail("grid.type", "must be geometric, linear or list");
    else {
      try {
        grid = c.grid.build();
        check_grid(grid);
      } catch (const srrw::error& e) {
        r.fail("grid", e.what());
        grid.clear();
      }
    }
  }
  if ((c.kind == experiment_kind::mixing_scan || c.kind == experiment_kind::phase_transition ||
       c.kind == experiment_kind::cutoff) && c.epsilons.empty())
    r.fail("epsilon", "needs at least one value");
  for (std::size_t i = 0; i < c.epsilons.size(); ++i)
    if (!(c.epsilons[i] > 0.0 && c.epsilons[i] < 1.0))
      r.fail("epsilon[" + std::to_string(i) + "]", "must lie in (0,1)");
  if (c.smoothing && *c.smoothing < 0) r.fail("smoothing", "bandwidth must be >= 0");

  static const std::vector<std::string> estimators = {
      "empirical-direct", "empirical-forest", "rao-blackwell", "hypercube-semi-exact", "exact",
      "forest", "profile-exhaustive", "profile-sampled"};
  if (std::find(estimators.begin(), estimators.end(), c.estimator) == estimators.end())
    r.fail("estimator", "unknown estimator '" + c.estimator + "'");

  const double G = static_cast<double>(grid.size());
  const double n_max = grid.empty() ? 0.0 : static_cast<double>(grid.back());
  const double R = static_cast<double>(c.replicas);
  const double A = static_cast<double>(std::max<std::size_t>(c.alphas.size(), 1));
  const double ops_per_second = 1.5e8;

  auto check_group = [&](const std::string& field, const std::string& kind, std::uint32_t size)
      -> std::optional<finite_group> {
    try {
      return make_group(kind, size);
    } catch (const capacity_error& e) {
      r.fail(field, e.what(), true);
    } catch (const srrw::error& e) {
      r.fail(field, e.what());
    }
    return std::nullopt;
  };
  auto check_mu = [&](const finite_group& g) -> std::optional<step_distribution> {
    try {
      return build_mu(g, c.mu);
    } catch (const capacity_error& e) {
      r.fail("mu", e.what(), true);
    } catch (const srrw::error& e) {
      r.fail("mu", e.what());
    }
    return std::nullopt;
  };

  switch (c.kind) {
    case experiment_kind::tv_curve:
    case experiment_kind::mixing_scan: {
      if (c.estimator == "hypercube-semi-exact") {
        if (c.group_kind != "hypercube") r.fail("estimator", "semi-exact estimator needs a hypercube group");
        if (c.group_size < 1 || c.group_size > hypercube_max_d)
          r.fail("group.size", "hypercube estimator caps d at 1024", true);
        if (!(c.mu.is_string() && c.mu.get<std::string>() == "lazy"))
          r.fail("mu", "semi-exact estimator needs the lazy hypercube step");
        rep.estimated_seconds = A * R * n_max * 3 / ops_per_second +
                                A * G * 64 * (c.group_size + 1) * n_max / 50 / ops_per_second;
        rep.estimated_megabytes = (R * G * 16 + G * 64 * (c.group_size + 1) * 8) / 1e6;
        break;
      }
      const auto g = check_group("group", c.group_kind, c.group_size);
      if (!g) break;
      const auto mu = check_mu(*g);
      if (!mu) break;
      if (c.estimator == "rao-blackwell") {
        try {
          check_simple_cycle(*mu);
        } catch (const srrw::error& e) {
          r.fail("estimator", e.what());
        }
        const double K = (g->order() - 1) / 2.0;
        rep.estimated_seconds = A * R * n_max * (5 + 2 * K) / ops_per_second;
        rep.estimated_megabytes = 64 * G * (K + 1) * 8 / 1e6;
      } else if (c.estimator == "exact") {
        if (n_max > oracle_max_n) r.fail("grid", "exact oracle is capped at n = 9", true);
        if (g->order() > matrix_limit) r.fail("group.size", "exact oracle needs |G| <= 4096", true);
        rep.estimated_seconds = 1.0;
      } else if (c.estimator == "empirical-direct" || c.estimator == "empirical-forest") {
        const double cells = static_cast<double>(g->order()) * G * std::min(R, 64.0);
        if (g->order() > dense_distribution_limit)
          r.fail("group.size", "empirical histograms need |G| <= 2^20", true);
        else if (cells > 1.5e8)
          r.fail("replicas", "empirical histograms exceed the 600 MB cap", true);
        rep.estimated_seconds = A * R * n_max * 4 / ops_per_second;
        rep.estimated_megabytes = cells * 4 / 1e6;
      } else {
        r.fail("estimator", "not available for curve experiments");
      }
      break;
    }
    case experiment_kind::phase_transition: {
      if (c.sizes.empty()) r.fail("sizes", "needs at least one cycle length");
      if (c.estimator != "rao-blackwell") r.fail("estimator", "phase transition uses rao-blackwell");
      for (std::size_t i = 0; i < c.sizes.size(); ++i)
        if (c.sizes[i] < 3 || c.sizes[i] % 2 == 0)
          r.fail("sizes[" + std::to_string(i) + "]", "cycle length must be odd and >= 3");
      for (auto L : c.sizes) rep.estimated_seconds += A * R * n_max * (5 + L) / ops_per_second;
      break;
    }
    case experiment_kind::cutoff: {
      if (c.sizes.empty()) r.fail("sizes", "needs at least one dimension");
      if (c.estimator != "hypercube-semi-exact") r.fail("estimator", "cutoff uses hypercube-semi-exact");
      for (std::size_t i = 0; i < c.sizes.size(); ++i)
        if (c.sizes[i] < 1 || c.sizes[i] > hypercube_max_d)
          r.fail("sizes[" + std::to_string(i) + "]", "hypercube estimator caps d at 1024", true);
      for (auto d : c.sizes) {
        rep.estimated_seconds += A * R * n_max * 3 / ops_per_second;
        rep.estimated_megabytes = std::max(rep.estimated_megabytes, (R * G * 16 + G * 64 * (d + 1) * 8) / 1e6);
      }
      break;
    }
    case experiment_kind::forest_stats:
      if (c.n < 1) r.fail("n", "forest length must be >= 1");
      rep.estimated_seconds = A * R * c.n * 20 / ops_per_second;
      rep.estimated_megabytes = c.n * 17 / 1e6;
      break;
    case experiment_kind::profiles: {
      const auto g = check_group("group", c.group_kind, c.group_size);
      if (!g) break;
      const auto mu = check_mu(*g);
      if (c.profile_mode != "exhaustive" && c.profile_mode != "sampled")
        r.fail("mode", "must be exhaustive or sampled");
      if (c.profile_mode == "exhaustive" && g->order() > exhaustive_limit)
        r.fail("group", "exhaustive profiles are capped at |G| <= 24, got " + std::to_string(g->order()), true);
      if (c.profile_mode == "sampled" && g->order() > 64)
        r.fail("group", "sampled profiles are capped at |G| <= 64", true);
      if (c.trajectory_steps > 0 && g->order() > trajectory_limit)
        r.fail("trajectory_steps", "trajectories need |G| <= 4096", true);
      if (c.trajectory_steps > 0 && c.alphas.empty()) r.fail("alpha", "trajectories need an alpha");
      (void)mu;
      if (c.profile_mode == "exhaustive")
        rep.estimated_seconds = std::ldexp(1.0, static_cast<int>(std::min<std::uint64_t>(g->order(), 60))) *
                                g->order() * 4 / ops_per_second;
      break;
    }
    case experiment_kind::oracle_check: {
      if (c.n_max < 1 || c.n_max > oracle_max_n) r.fail("n_max", "exact oracle is capped at n = 9", true);
      const auto g = check_group("group", c.group_kind, c.group_size);
      if (!g) break;
      const auto mu = check_mu(*g);
      if (g->order() > matrix_limit) r.fail("group.size", "exact oracle needs |G| <= 4096", true);
      if (mu && std::pow(static_cast<double>(mu->support_size()), c.n_max / 2) > oracle_spin_cap)
        r.fail("mu", "support too large for the exact oracle spin cap of 10^5", true);
      rep.estimated_seconds = 1.0;
      break;
    }
  }
  if (rep.estimated_megabytes > memory_cap_megabytes)
    r.fail("replicas", "estimated working set of " + std::to_string(std::lround(rep.estimated_megabytes)) +
                           " MB exceeds the " + std::to_string(std::lround(memory_cap_megabytes)) +
                           " MB cap; coarsen the grid or lower replicas",
           true);
  if (out) *out = c;
  return rep;
}

}  // namespace lab
