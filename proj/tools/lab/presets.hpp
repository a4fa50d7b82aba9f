#pragma once

// Built-in configurations. The curve presets are scaled to run in minutes: the
// cycle uses L = 101 with 20000 forests, the hypercube d = 128 with 10000.

#include <string>
#include <utility>
#include <vector>

#include "config.hpp"

namespace lab {

struct preset {
  std::string name;
  std::string description;
  json config;
};

inline std::vector<preset> presets() {
  std::vector<preset> p;
  p.push_back({"cycle-curves", "TV curves on Z_101, simple step, four alphas (Rao-Blackwell)",
               {{"schema", schema_tag},
                {"name", "cycle-curves"},
                {"kind", "tv-curve"},
                {"group", {{"kind", "cyclic"}, {"size", 101}}},
                {"mu", "simple"},
                {"alpha", {0.0, 0.5, 0.75, 0.9}},
                {"grid", {{"type", "geometric"}, {"n_max", 20000}, {"dense_until", 10}, {"per_decade", 60}}},
                {"replicas", 20000},
                {"seed", 20240101},
                {"estimator", "rao-blackwell"},
                {"epsilon", {0.25}},
                {"smoothing", 2.0},
                {"output", "out/cycle-curves"}}});
  p.push_back({"hypercube-curves", "TV curves on Z_2^128, lazy step (semi-exact)",
               {{"schema", schema_tag},
                {"name", "hypercube-curves"},
                {"kind", "tv-curve"},
                {"group", {{"kind", "hypercube"}, {"size", 128}}},
                {"mu", "lazy"},
                {"alpha", {0.0, 0.25, 0.5, 0.75}},
                {"grid", {{"type", "linear"}, {"start", 1}, {"stop", 6000}, {"step", 10}}},
                {"replicas", 10000},
                {"seed", 20240102},
                {"estimator", "hypercube-semi-exact"},
                {"epsilon", {0.25}},
                {"output", "out/hypercube-curves"}}});
  p.push_back({"phase-transition", "t_mix(1/4) on odd cycles L = 33, 65, 129",
               {{"schema", schema_tag},
                {"name", "phase-transition"},
                {"kind", "phase-transition"},
                {"sizes", {33, 65, 129}},
                {"alpha", {0.25, 0.75}},
                {"grid", {{"type", "geometric"}, {"n_max", 40000}, {"dense_until", 10}, {"per_decade", 80}}},
                {"replicas", 20000},
                {"seed", 7},
                {"estimator", "rao-blackwell"},
                {"epsilon", {0.25}},
                {"output", "out/phase-transition"}}});
  p.push_back({"cutoff", "t_mix(eps) / (d log d) on hypercubes d = 64, 128, 256",
               {{"schema", schema_tag},
                {"name", "cutoff"},
                {"kind", "cutoff"},
                {"sizes", {64, 128, 256}},
                {"alpha", {0.5}},
                {"grid", {{"type", "linear"}, {"start", 4}, {"stop", 8000}, {"step", 8}}},
                {"replicas", 10000},
                {"seed", 11},
                {"estimator", "hypercube-semi-exact"},
                {"epsilon", {0.1, 0.25, 0.9}},
                {"output", "out/cutoff"}}});
  p.push_back({"mixing-scan-z5", "mixing times on Z_5 from exact curves",
               {{"schema", schema_tag},
                {"name", "mixing-scan-z5"},
                {"kind", "mixing-scan"},
                {"group", {{"kind", "cyclic"}, {"size", 5}}},
                {"mu", "simple"},
                {"alpha", {0.0, 0.5}},
                {"grid", {{"type", "linear"}, {"start", 1}, {"stop", 9}, {"step", 1}}},
                {"seed", 1},
                {"estimator", "exact"},
                {"epsilon", {0.25, 0.1}},
                {"output", "out/mixing-scan-z5"}}});
  p.push_back({"forest-stats", "cluster census at n = 10^5",
               {{"schema", schema_tag},
                {"name", "forest-stats"},
                {"kind", "forest-stats"},
                {"alpha", {0.5}},
                {"n", 100000},
                {"replicas", 200},
                {"seed", 3},
                {"block_length", 4},
                {"output", "out/forest-stats"}}});
  p.push_back({"profiles-s3", "root profile on S_3 with Gamma = {(12),(132)}",
               {{"schema", schema_tag},
                {"name", "profiles-s3"},
                {"kind", "profiles"},
                {"group", {{"kind", "symmetric"}, {"size", 3}}},
                {"mu", {{"(12)", 0.5}, {"(132)", 0.5}}},
                {"alpha", {0.5}},
                {"trajectory_steps", 30},
                {"seed", 5},
                {"output", "out/profiles-s3"}}});
  p.push_back({"oracle-z2", "exact laws on Z_2 with uniform steps",
               {{"schema", schema_tag},
                {"name", "oracle-z2"},
                {"kind", "oracle-check"},
                {"group", {{"kind", "cyclic"}, {"size", 2}}},
                {"mu", "uniform"},
                {"alpha", {0.0, 0.3, 0.5, 0.7}},
                {"n_max", 6},
                {"seed", 0},
                {"output", "out/oracle-z2"}}});
  return p;
}

}  // namespace lab
