#pragma once

// CSV and binary writers for curves, profiles, trajectories and forests. Files are
// written to a temporary sibling and renamed into place, so an interrupted run
// leaves no partial output.

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "srrw/analytic.hpp"
#include "srrw/distance.hpp"
#include "srrw/error.hpp"
#include "srrw/evolving_set.hpp"
#include "srrw/forest.hpp"
#include "srrw/walk.hpp"

namespace srrw {

class io_error : public error {
 public:
  using error::error;
};

// Shortest round-trip representation.
inline std::string format_double(double x) {
  char buf[32];
  for (int prec = 6; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

inline std::string hex_mask(std::uint64_t m) {
  char buf[24];
  std::snprintf(buf, sizeof buf, "0x%llx", static_cast<unsigned long long>(m));
  return buf;
}

// Quotes a CSV field when it contains a separator, quote or newline.
inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

inline void write_file_atomic(const std::filesystem::path& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw io_error("short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw io_error("cannot rename into " + path.string() + ": " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Source of a table row: master seed and estimator or procedure name.
struct provenance {
  std::uint64_t seed = 0;
  std::string estimator;
};

inline constexpr const char* curve_header = "seed,group,alpha,estimator,n,value,stderr,replicas\n";

inline std::string curve_rows(const distance_curve& c) {
  std::string out;
  for (const auto& p : c.points) {
    out += std::to_string(c.seed) + ',' + csv_field(c.group) + ',' + format_double(c.alpha) + ',' +
           csv_field(c.estimator) + ',' + std::to_string(p.n) + ',' + format_double(p.value) + ',' +
           format_double(p.std_error) + ',' + std::to_string(c.replicas) + '\n';
  }
  return out;
}

inline std::string curves_csv(const std::vector<distance_curve>& curves) {
  std::string out = curve_header;
  for (const auto& c : curves) out += curve_rows(c);
  return out;
}

inline std::string profile_csv(const profile_table& t, const provenance& src) {
  std::string out = "seed,estimator,r,phi,psi,phi_witness,psi_witness\n";
  for (const auto& row : t.rows)
    out += std::to_string(src.seed) + ',' + csv_field(src.estimator) + ',' + format_double(row.r) +
           ',' + format_double(row.phi) + ',' + format_double(row.psi) + ',' +
           hex_mask(row.phi_witness) + ',' + hex_mask(row.psi_witness) + '\n';
  return out;
}

inline std::string trajectory_csv(const std::vector<std::size_t>& sizes, const provenance& src) {
  std::string out = "seed,estimator,step,size\n";
  for (std::size_t i = 0; i < sizes.size(); ++i)
    out += std::to_string(src.seed) + ',' + csv_field(src.estimator) + ',' + std::to_string(i) +
           ',' + std::to_string(sizes[i]) + '\n';
  return out;
}

inline std::string distribution_csv(const std::vector<double>& p, const provenance& src) {
  std::string out = "seed,estimator,element,probability\n";
  for (std::size_t x = 0; x < p.size(); ++x)
    out += std::to_string(src.seed) + ',' + csv_field(src.estimator) + ',' + std::to_string(x) +
           ',' + format_double(p[x]) + '\n';
  return out;
}

inline std::string constants_csv(const std::vector<double>& alphas) {
  std::string out = "alpha";
  for (int k = 1; k <= 10; ++k) out += ",theta" + std::to_string(k);
  out += ",F,c_alpha\n";
  for (double a : alphas) {
    out += format_double(a);
    for (unsigned k = 1; k <= 10; ++k) out += ',' + format_double(theta_k(a, k));
    out += ',' + format_double(hyp2f1_half(a)) + ',' + format_double(cutoff_constant(a)) + '\n';
  }
  return out;
}

inline std::string path_csv_header() { return "seed,estimator,replica,j,X_j,S_j\n"; }

inline std::string path_csv_rows(const walk_path& w, std::uint64_t replica, const provenance& src) {
  std::string out;
  for (std::size_t j = 0; j < w.steps.size(); ++j)
    out += std::to_string(src.seed) + ',' + csv_field(src.estimator) + ',' +
           std::to_string(replica) + ',' + std::to_string(j + 1) + ',' +
           std::to_string(w.steps[j]) + ',' + std::to_string(w.positions[j + 1]) + '\n';
  return out;
}

inline std::string cluster_stats_csv_header() { return "seed,estimator,n,alpha,replica,k,count\n"; }

// One row per cluster size present.
inline std::string cluster_stats_csv_rows(const cluster_stats& s, std::uint32_t n, double alpha,
                                          std::uint64_t replica, const provenance& src) {
  std::string out;
  for (const auto& [k, count] : s.size_counts) {
    out += std::to_string(src.seed) + ',' + csv_field(src.estimator) + ',' + std::to_string(n) +
           ',' + format_double(alpha) + ',' + std::to_string(replica) + ',' + std::to_string(k) +
           ',' + std::to_string(count) + '\n';
  }
  return out;
}

// Forest dump: "SRRWFST1", u32 n, f64 alpha, u64 seed, n bytes xi, n u32 parents.
// Little-endian host order.
inline constexpr char forest_magic[8] = {'S', 'R', 'R', 'W', 'F', 'S', 'T', '1'};

inline std::string encode_forest(const forest_path& f) {
  std::string out(forest_magic, 8);
  auto put = [&](const void* p, std::size_t k) { out.append(static_cast<const char*>(p), k); };
  put(&f.n, 4);
  put(&f.alpha, 8);
  put(&f.seed, 8);
  for (std::uint8_t x : f.xi) put(&x, 1);
  for (std::uint32_t u : f.parent) put(&u, 4);
  return out;
}

inline forest_path decode_forest(const std::string& bytes) {
  std::size_t at = 0;
  auto get = [&](void* p, std::size_t k) {
    if (at + k > bytes.size()) throw io_error("truncated forest dump");
    std::memcpy(p, bytes.data() + at, k);
    at += k;
  };
  char magic[8];
  get(magic, 8);
  if (std::memcmp(magic, forest_magic, 8) != 0) throw io_error("not a forest dump");
  std::uint32_t n = 0;
  double alpha = 0;
  std::uint64_t seed = 0;
  get(&n, 4);
  get(&alpha, 8);
  get(&seed, 8);
  if (bytes.size() != 28 + std::size_t{n} * 5) throw io_error("forest dump has the wrong length");
  std::vector<std::uint8_t> xi(n);
  std::vector<std::uint32_t> u(n);
  for (auto& x : xi) get(&x, 1);
  for (auto& v : u) get(&v, 4);
  auto f = forest_from_choices(xi, u, alpha);
  f.seed = seed;
  return f;
}

}  // namespace srrw
