#pragma once

// Executes a validated experiment and writes its artifacts. All files are built in
// memory and written (temp file + rename) only after every computation succeeded.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include <srrw.hpp>

#include "config.hpp"

namespace lab {

struct run_options {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> threads;
  bool deterministic = false;
  std::function<void(const std::string&)> status = [](const std::string&) {};
};

struct run_result {
  json summary;
  bool guard_triggered = false;
  std::vector<std::string> files;
};

inline json to_json(const srrw::mixing_estimate& m) {
  return {{"epsilon", m.epsilon},         {"t_mix", m.t_mix},
          {"upper", m.upper},             {"horizon", m.horizon},
          {"exceedances", m.exceedances}, {"guard_triggered", m.guard_triggered}};
}

namespace detail {

inline std::string alpha_tag(double a) { return srrw::format_double(a); }

// Least-squares slope of log y on log x.
inline double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (std::log(x[i]) - mx) * (std::log(x[i]) - mx);
    sxy += (std::log(x[i]) - mx) * (std::log(y[i]) - my);
  }
  return sxx > 0 ? sxy / sxx : std::nan("");
}

class artifact_set {
 public:
  explicit artifact_set(std::filesystem::path dir) : dir_(std::move(dir)) {}
  void add(const std::string& name, std::string bytes) { files_.emplace_back(name, std::move(bytes)); }
  std::vector<std::string> commit() const {
    std::vector<std::string> written;
    for (const auto& [name, bytes] : files_) {
      srrw::write_file_atomic(dir_ / name, bytes);
      written.push_back((dir_ / name).string());
    }
    return written;
  }

 private:
  std::filesystem::path dir_;
  std::vector<std::pair<std::string, std::string>> files_;
};

}  // namespace detail

// Curve for one alpha with the configured estimator.
inline srrw::distance_curve compute_curve(const experiment_config& c, double alpha,
                                          const srrw::time_grid& grid, std::uint32_t size,
                                          unsigned threads, srrw::distance_curve* bound = nullptr) {
  using namespace srrw;
  if (c.estimator == "hypercube-semi-exact")
    return hypercube_tv_estimate(size, alpha, grid, c.replicas, c.seed, threads);
  const auto g = make_group(c.group_kind, size);
  const auto mu = build_mu(g, c.mu);
  if (c.estimator == "rao-blackwell") {
    check_simple_cycle(mu);
    auto r = rao_blackwell_cycle(size, alpha, grid, c.replicas, c.seed, threads, bound != nullptr);
    if (bound) *bound = std::move(r.bound);
    return std::move(r.tv);
  }
  if (c.estimator == "exact") {
    distance_curve out;
    out.group = g.describe();
    out.estimator = "exact";
    out.alpha = alpha;
    out.seed = c.seed;
    for (auto n : grid)
      out.push(n, tv_to_uniform(exact_endpoint_distribution(mu, alpha, static_cast<std::uint32_t>(n), threads)));
    return out;
  }
  const auto how = c.estimator == "empirical-forest" ? construction::forest : construction::direct;
  return empirical_tv_curve(mu, alpha, grid, c.replicas, c.seed, how, threads);
}

inline run_result run_experiment(experiment_config c, const run_options& opt = {}) {
  using namespace srrw;
  const auto t0 = std::chrono::steady_clock::now();
  if (opt.seed) c.seed = *opt.seed;
  const unsigned threads = opt.threads ? *opt.threads : (c.threads ? c.threads : default_thread_count());
  detail::artifact_set out(c.output_dir);
  run_result res;
  json results = json::object();
  std::vector<std::string> warnings;
  const provenance src{c.seed, c.estimator};
  const auto grid = (c.kind == experiment_kind::tv_curve || c.kind == experiment_kind::mixing_scan ||
                     c.kind == experiment_kind::phase_transition || c.kind == experiment_kind::cutoff)
                        ? c.grid.build()
                        : time_grid{};

  switch (c.kind) {
    case experiment_kind::tv_curve:
    case experiment_kind::mixing_scan: {
      std::vector<distance_curve> curves, bounds, smoothed;
      json scans = json::array();
      for (double a : c.alphas) {
        opt.status("curve alpha=" + detail::alpha_tag(a));
        distance_curve bound;
        auto curve = compute_curve(c, a, grid, c.group_size, threads,
                                   c.estimator == "rao-blackwell" ? &bound : nullptr);
        for (const auto& w : curve.warnings) warnings.push_back(detail::alpha_tag(a) + ": " + w);
        if (c.estimator == "rao-blackwell") bounds.push_back(bound);
        if (c.smoothing) smoothed.push_back(smooth_curve(curve, *c.smoothing));
        for (double eps : c.epsilons) {
          const auto m = mixing_time_scan(curve, eps, c.horizon);
          res.guard_triggered |= m.guard_triggered;
          auto j = to_json(m);
          j["alpha"] = a;
          j["seed"] = c.seed;
          j["estimator"] = c.estimator;
          scans.push_back(j);
        }
        curves.push_back(std::move(curve));
      }
      out.add("curves.csv", curves_csv(curves));
      if (!bounds.empty()) out.add("fourier_bound.csv", curves_csv(bounds));
      if (!smoothed.empty()) out.add("curves_smoothed.csv", curves_csv(smoothed));
      if (!scans.empty()) {
        out.add("mixing.json", scans.dump(2) + "\n");
        results["mixing"] = scans;
      }
      break;
    }
    case experiment_kind::phase_transition: {
      std::string table = "seed,estimator,alpha,L,epsilon,t_mix,guard_triggered\n";
      std::vector<distance_curve> curves;
      json slopes = json::array();
      for (double a : c.alphas) {
        std::vector<std::vector<double>> t(c.epsilons.size());
        std::vector<double> Ls;
        for (auto L : c.sizes) {
          opt.status("phase alpha=" + detail::alpha_tag(a) + " L=" + std::to_string(L));
          auto curve = rao_blackwell_cycle(L, a, grid, c.replicas, c.seed, threads, false).tv;
          Ls.push_back(L);
          for (std::size_t e = 0; e < c.epsilons.size(); ++e) {
            const auto m = mixing_time_scan(curve, c.epsilons[e], c.horizon);
            res.guard_triggered |= m.guard_triggered;
            t[e].push_back(static_cast<double>(m.t_mix));
            table += std::to_string(c.seed) + "," + c.estimator + "," + format_double(a) + "," +
                     std::to_string(L) + "," + format_double(c.epsilons[e]) + "," +
                     std::to_string(m.t_mix) + "," + (m.guard_triggered ? "1" : "0") + "\n";
          }
          curves.push_back(std::move(curve));
        }
        for (std::size_t e = 0; e < c.epsilons.size(); ++e)
          slopes.push_back(json{{"alpha", a},
                            {"epsilon", c.epsilons[e]},
                            {"slope", Ls.size() >= 2 ? json(detail::log_log_slope(Ls, t[e])) : json(nullptr)},
                            {"predicted", a <= 0.5 ? 2.0 : 1.0 / a}});
      }
      out.add("phase.csv", table);
      out.add("curves.csv", curves_csv(curves));
      results["slopes"] = slopes;
      break;
    }
    case experiment_kind::cutoff: {
      std::string table = "seed,estimator,alpha,d,epsilon,t_mix,t_over_dlogd,c_alpha,guard_triggered\n";
      std::vector<distance_curve> curves;
      for (double a : c.alphas)
        for (auto d : c.sizes) {
          opt.status("cutoff alpha=" + detail::alpha_tag(a) + " d=" + std::to_string(d));
          auto curve = hypercube_tv_estimate(d, a, grid, c.replicas, c.seed, threads);
          const double dlogd = d * std::log(static_cast<double>(d));
          const std::string ca = a > 0 ? format_double(cutoff_constant(a)) : format_double(0.5);
          for (double eps : c.epsilons) {
            const auto m = mixing_time_scan(curve, eps, c.horizon);
            res.guard_triggered |= m.guard_triggered;
            table += std::to_string(c.seed) + "," + c.estimator + "," + format_double(a) + "," +
                     std::to_string(d) + "," + format_double(eps) + "," + std::to_string(m.t_mix) +
                     "," + format_double(m.t_mix / dlogd) + "," + ca + "," +
                     (m.guard_triggered ? "1" : "0") + "\n";
          }
          curves.push_back(std::move(curve));
        }
      out.add("cutoff.csv", table);
      out.add("curves.csv", curves_csv(curves));
      break;
    }
    case experiment_kind::forest_stats: {
      std::string rows = cluster_stats_csv_header();
      std::string summary = "seed,estimator,alpha,n,replicas,statistic,mean,predicted\n";
      cluster_options copt;
      copt.block_length = c.block_length;
      copt.index_set = c.index_set;
      for (double a : c.alphas) {
        opt.status("forests alpha=" + detail::alpha_tag(a));
        std::vector<cluster_stats> stats(c.replicas);
        forest_path first;
        const batch_plan plan(c.replicas);
        parallel_for(plan.batches, threads, [&](std::size_t b) {
          for (std::uint64_t r = plan.begin(b); r < plan.end(b); ++r) {
            auto rng = rng_stream::stream(c.seed, r);
            const auto f = grow_forest(c.n, a, rng, c.seed);
            stats[r] = cluster_statistics(f, copt);
            if (r == 0) first = f;
          }
        });
        double iso = 0, odd = 0, nj = 0;
        std::vector<double> nk(6, 0.0);
        for (std::uint64_t r = 0; r < c.replicas; ++r) {
          rows += cluster_stats_csv_rows(stats[r], c.n, a, r, src);
          iso += stats[r].isolated;
          odd += stats[r].odd_clusters;
          nj += stats[r].index_set_count;
          for (std::uint32_t k = 1; k <= 5; ++k) nk[k] += stats[r].N(k);
        }
        const double scale = 1.0 / (static_cast<double>(c.replicas) * c.n);
        auto line = [&](const std::string& name, double mean, const std::string& predicted) {
          summary += std::to_string(c.seed) + "," + c.estimator + "," + format_double(a) + "," +
                     std::to_string(c.n) + "," + std::to_string(c.replicas) + "," + name + "," +
                     format_double(mean) + "," + predicted + "\n";
        };
        line("I/n", iso * scale, format_double(expected_isolated_exact(c.n, a) / c.n));
        const bool open = a > 0.0;
        line("N_odd/n", odd * scale, open ? format_double(odd_cluster_density(a)) : "1");
        if (!c.index_set.empty()) line("N_J/n", nj * scale, "");
        for (std::uint32_t k = 1; k <= 5; ++k)
          line("N_" + std::to_string(k) + "/n", nk[k] * scale,
               open ? format_double(theta_k(a, k)) : (k == 1 ? "1" : "0"));
        if (c.dump_forest) out.add("forest_alpha" + detail::alpha_tag(a) + ".bin", encode_forest(first));
      }
      out.add("cluster_stats.csv", rows);
      out.add("forest_summary.csv", summary);
      break;
    }
    case experiment_kind::profiles: {
      const auto g = make_group(c.group_kind, c.group_size);
      const auto mu = build_mu(g, c.mu);
      opt.status("profiles on " + g.describe());
      const auto mode = c.profile_mode == "sampled" ? profile_mode::sampled : profile_mode::exhaustive;
      const auto table = iso_profile(mu, mode, c.samples, c.seed);
      out.add("profile.csv", profile_csv(table, src));
      results["certified"] = table.certified;
      results["subsets_evaluated"] = table.subsets_evaluated;
      results["phi_half"] = table.rows.back().phi;
      results["psi_half"] = table.rows.back().psi;
      if (!table.certified) warnings.push_back("sampled profile values are upper bounds");
      if (mode == profile_mode::exhaustive) {
        try {
          const auto gen = psi_positivity_vs_generation(mu);
          results["gamma_gamma_inverse_generates"] = gen.gamma_gamma_inv_generates;
          results["equivalence_holds"] = gen.equivalence_holds;
          if (gen.witness) {
            results["witness"] = hex_mask(*gen.witness);
            results["witness_fixed"] = gen.witness_fixed;
          }
        } catch (const reducible_error& e) {
          warnings.push_back(std::string("generation check skipped: ") + e.what());
        }
        if (mu(g.identity()) > 0 && g.order() <= 16)
          results["psi_phi_min_slack"] = psi_phi_inequality_check(mu);
      }
      if (c.trajectory_steps > 0) {
        const double a = c.alphas.front();
        auto rng = rng_stream::stream(c.seed, 0);
        const auto f = grow_forest(c.trajectory_steps, a, rng, c.seed);
        spin_assignment spins(f.n);
        for (const auto& [root, size] : f.clusters())
          if (size >= 2) spins.set(root, mu.sample(rng));
        subset w0(g.order(), 0);
        w0[g.identity()] = 1;
        const auto sizes = evolving_trajectory(mu, f, spins, w0, rng);
        out.add("trajectory.csv", trajectory_csv(sizes, {c.seed, "evolving-set-trajectory"}));
      }
      break;
    }
    case experiment_kind::oracle_check: {
      const auto g = make_group(c.group_kind, c.group_size);
      const auto mu = build_mu(g, c.mu);
      std::string table = "seed,estimator,alpha,n,tv,p_identity\n";
      std::string dist = "seed,estimator,alpha,n,element,probability\n";
      for (double a : c.alphas)
        for (std::uint32_t n = 1; n <= c.n_max; ++n) {
          const auto p = exact_endpoint_distribution(mu, a, n, threads);
          table += std::to_string(c.seed) + ",exact," + format_double(a) + "," + std::to_string(n) +
                   "," + format_double(tv_to_uniform(p)) + "," + format_double(p[g.identity()]) + "\n";
          if (n == c.n_max)
            for (std::size_t x = 0; x < p.size(); ++x)
              dist += std::to_string(c.seed) + ",exact," + format_double(a) + "," + std::to_string(n) +
                      "," + std::to_string(x) + "," + format_double(p[x]) + "\n";
        }
      out.add("oracle.csv", table);
      out.add("oracle_distribution.csv", dist);
      break;
    }
  }

  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  res.summary = {{"schema", schema_tag},
                 {"name", c.name},
                 {"kind", to_string(c.kind)},
                 {"seed", c.seed},
                 {"estimator", c.estimator},
                 {"replicas", c.replicas},
                 {"threads", threads},
                 {"deterministic", opt.deterministic},
                 {"wall_clock_seconds", seconds},
                 {"guard_triggered", res.guard_triggered},
                 {"warnings", warnings},
                 {"results", results}};
  out.add("summary.json", res.summary.dump(2) + "\n");
  res.files = out.commit();
  return res;
}

}  // namespace lab
