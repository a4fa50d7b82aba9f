#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include <srrw/io.hpp>

#include "lab/config.hpp"
#include "lab/presets.hpp"
#include "lab/runner.hpp"

using namespace srrw;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("srrw_test_io_" + name);
  fs::remove_all(p);
  return p;
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

lab::json preset(const std::string& name) {
  for (const auto& p : lab::presets())
    if (p.name == name) return p.config;
  throw std::runtime_error("no preset " + name);
}

}  // namespace

TEST(Format, DoublesRoundTrip) {
  for (double x : {0.1, 1.0 / 3, 1e-300, 123456789.125, 0.0, -2.5})
    EXPECT_EQ(std::stod(format_double(x)), x);
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(hex_mask(255), "0xff");
  EXPECT_EQ(csv_field("cyclic(5)"), "cyclic(5)");
  EXPECT_EQ(csv_field("a,b"), "\"a,b\"");
}

TEST(Files, AtomicWriteLeavesNoPartial) {
  const auto dir = scratch("atomic");
  write_file_atomic(dir / "sub" / "x.csv", "abc\n");
  EXPECT_EQ(read_file(dir / "sub" / "x.csv"), "abc\n");
  write_file_atomic(dir / "sub" / "x.csv", "def\n");
  EXPECT_EQ(read_file(dir / "sub" / "x.csv"), "def\n");
  for (const auto& e : fs::recursive_directory_iterator(dir))
    EXPECT_EQ(e.path().string().find(".partial"), std::string::npos);
  EXPECT_THROW(read_file(dir / "missing"), io_error);
  fs::remove_all(dir);
}

TEST(Forest, BinaryRoundTrip) {
  rng_stream rng(9);
  const auto f = grow_forest(500, 0.6, rng, 1234);
  const auto bytes = encode_forest(f);
  EXPECT_EQ(bytes.substr(0, 8), "SRRWFST1");
  EXPECT_EQ(bytes.size(), 28u + 5u * 500u);
  const auto g = decode_forest(bytes);
  EXPECT_EQ(g.n, f.n);
  EXPECT_EQ(g.alpha, f.alpha);
  EXPECT_EQ(g.seed, 1234u);
  EXPECT_EQ(g.xi, f.xi);
  EXPECT_EQ(g.parent, f.parent);
  EXPECT_EQ(g.root, f.root);
  EXPECT_THROW(decode_forest(bytes.substr(0, 100)), io_error);
  auto bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(decode_forest(bad), io_error);
}

TEST(Csv, CurveAndTables) {
  distance_curve c;
  c.group = "cyclic(5)";
  c.estimator = "exact";
  c.alpha = 0.5;
  c.seed = 42;
  c.replicas = 7;
  c.push(1, 0.5, 0.01);
  c.push(3, 0.25);
  const auto rows = parse_csv(curves_csv({c}));
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"seed", "group", "alpha", "estimator", "n", "value",
                                               "stderr", "replicas"}));
  EXPECT_EQ(rows[2], (std::vector<std::string>{"42", "cyclic(5)", "0.5", "exact", "3", "0.25", "0", "7"}));

  const auto t = iso_profile(simple_cycle_step(make_cyclic(6)));
  const auto prof = parse_csv(profile_csv(t, {3, "profile-exhaustive"}));
  ASSERT_EQ(prof.size(), 4u);
  EXPECT_EQ(prof[1][0], "3");
  EXPECT_EQ(prof[1][5].substr(0, 2), "0x");

  const auto consts = parse_csv(constants_csv({0.5}));
  ASSERT_EQ(consts[0].size(), 13u);
  EXPECT_NEAR(std::stod(consts[1][11]), hyp2f1_half(0.5), 1e-15);
  EXPECT_NEAR(std::stod(consts[1][1]), 1.0 / 3, 1e-15);

  const auto dist = parse_csv(distribution_csv({0.75, 0.25}, {0, "exact"}));
  EXPECT_EQ(dist[1], (std::vector<std::string>{"0", "exact", "0", "0.75"}));

  rng_stream rng(1);
  const auto w = sample_path_direct(simple_cycle_step(make_cyclic(5)), 0.5, 4, rng);
  const auto path = parse_csv(path_csv_header() + path_csv_rows(w, 2, {1, "direct"}));
  ASSERT_EQ(path.size(), 5u);
  EXPECT_EQ(path[4][3], "4");
  EXPECT_EQ(path[4][5], std::to_string(w.endpoint()));
}

TEST(Config, ValidationFieldPaths) {
  auto cfg = preset("cycle-curves");
  cfg["replicas"] = 0;
  auto rep = lab::validate_config(cfg);
  ASSERT_FALSE(rep.ok());
  EXPECT_EQ(rep.errors.front().field, "replicas");
  EXPECT_FALSE(rep.capacity_only());

  cfg = preset("profiles-s3");
  cfg["group"]["size"] = 8;
  cfg["mu"] = "uniform";
  rep = lab::validate_config(cfg);
  ASSERT_FALSE(rep.ok());
  EXPECT_TRUE(rep.capacity_only());
  EXPECT_NE(rep.errors.front().message.find("24"), std::string::npos);

  cfg = preset("cycle-curves");
  cfg["grid"]["n_max"] = "many";
  cfg["bogus"] = 1;
  cfg.erase("schema");
  rep = lab::validate_config(cfg);
  std::vector<std::string> fields;
  for (const auto& e : rep.errors) fields.push_back(e.field);
  EXPECT_NE(std::find(fields.begin(), fields.end(), "grid.n_max"), fields.end());
  EXPECT_NE(std::find(fields.begin(), fields.end(), "bogus"), fields.end());
  EXPECT_NE(std::find(fields.begin(), fields.end(), "schema"), fields.end());
}

TEST(Config, WorkingSetCap) {
  auto cfg = preset("cutoff");
  cfg["grid"]["step"] = 1;
  cfg["replicas"] = 40000;
  const auto rep = lab::validate_config(cfg);
  ASSERT_FALSE(rep.ok());
  EXPECT_TRUE(rep.capacity_only());
  EXPECT_GT(rep.estimated_megabytes, lab::memory_cap_megabytes);
  EXPECT_NE(rep.errors.back().message.find("MB"), std::string::npos);
}

TEST(Config, PresetsValidate) {
  for (const auto& p : lab::presets()) {
    const auto rep = lab::validate_config(p.config);
    EXPECT_TRUE(rep.ok()) << p.name << ": " << (rep.errors.empty() ? "" : rep.errors[0].message);
  }
  const auto cycle_rep = lab::validate_config(preset("cycle-curves"));
  EXPECT_GT(cycle_rep.estimated_seconds, 1.0);
  EXPECT_GT(cycle_rep.estimated_megabytes, 0.0);
}

TEST(Runner, OracleCheckTable) {
  auto cfg = preset("oracle-z2");
  const auto dir = scratch("oracle");
  cfg["output"] = dir.string();
  lab::experiment_config c;
  ASSERT_TRUE(lab::validate_config(cfg, &c).ok());
  const auto res = lab::run_experiment(c);
  const auto rows = parse_csv(read_file(dir / "oracle.csv"));
  ASSERT_EQ(rows.size(), 1u + 4 * 6);
  int checked = 0;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][3] == "2") {
      EXPECT_NEAR(std::stod(rows[i][5]), (1 + std::stod(rows[i][2])) / 2, 1e-12);
      ++checked;
    }
  EXPECT_EQ(checked, 4);
  EXPECT_TRUE(fs::exists(dir / "summary.json"));
  EXPECT_EQ(res.summary["kind"], "oracle-check");
  fs::remove_all(dir);
}

TEST(Runner, OutputsIndependentOfThreads) {
  auto cfg = preset("cycle-curves");
  cfg["alpha"] = {0.5, 0.9};
  cfg["group"]["size"] = 11;
  cfg["replicas"] = 300;
  cfg["grid"] = {{"type", "geometric"}, {"n_max", 300}};
  std::string first;
  for (unsigned threads : {1u, 3u}) {
    const auto dir = scratch("threads" + std::to_string(threads));
    cfg["output"] = dir.string();
    lab::experiment_config c;
    ASSERT_TRUE(lab::validate_config(cfg, &c).ok());
    lab::run_options opt;
    opt.threads = threads;
    lab::run_experiment(c, opt);
    const auto text = read_file(dir / "curves.csv") + read_file(dir / "mixing.json");
    if (first.empty()) first = text;
    else EXPECT_EQ(text, first);
    fs::remove_all(dir);
  }
}

TEST(Runner, MixingScanJson) {
  auto cfg = preset("mixing-scan-z5");
  const auto dir = scratch("scan");
  cfg["output"] = dir.string();
  lab::experiment_config c;
  ASSERT_TRUE(lab::validate_config(cfg, &c).ok());
  const auto res = lab::run_experiment(c);
  const auto j = lab::json::parse(read_file(dir / "mixing.json"));
  ASSERT_EQ(j.size(), 4u);
  for (const auto& m : j)
    for (const char* key : {"epsilon", "t_mix", "horizon", "exceedances", "guard_triggered"})
      EXPECT_TRUE(m.contains(key)) << key;
  EXPECT_EQ(j[0]["horizon"], 9);
  fs::remove_all(dir);
}

TEST(Runner, ProfilesAndForests) {
  auto cfg = preset("profiles-s3");
  const auto dir = scratch("profiles");
  cfg["output"] = dir.string();
  lab::experiment_config c;
  ASSERT_TRUE(lab::validate_config(cfg, &c).ok());
  const auto res = lab::run_experiment(c);
  EXPECT_NEAR(res.summary["results"]["psi_half"].get<double>(), 0.0, 1e-12);
  EXPECT_EQ(res.summary["results"]["gamma_gamma_inverse_generates"], false);
  EXPECT_TRUE(fs::exists(dir / "trajectory.csv"));

  auto fcfg = preset("forest-stats");
  fcfg["n"] = 2000;
  fcfg["replicas"] = 5;
  fcfg["dump_forest"] = true;
  fcfg["output"] = dir.string();
  ASSERT_TRUE(lab::validate_config(fcfg, &c).ok());
  lab::run_experiment(c);
  const auto f = decode_forest(read_file(dir / "forest_alpha0.5.bin"));
  EXPECT_EQ(f.n, 2000u);
  EXPECT_GT(parse_csv(read_file(dir / "forest_summary.csv")).size(), 6u);
  fs::remove_all(dir);
}
