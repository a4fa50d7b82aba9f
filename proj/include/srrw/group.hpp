#pragma once

// Finite groups with dense element indices.
//
// Elements are integers in [0, order). The identity is index 0 for every structured
// kind; explicit Cayley tables keep their own labels and report `identity()`.
// Cyclic and hypercube groups use arithmetic fast paths; symmetric and lamplighter
// groups are tabulated when order <= 4096 and computed arithmetically otherwise.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srrw/error.hpp"
#include "srrw/rng.hpp"

namespace srrw {

using element_t = std::uint32_t;

enum class group_kind { cyclic, hypercube, symmetric, lamplighter, table };

inline constexpr std::uint64_t tabulation_limit = 4096;
inline constexpr std::uint64_t lamplighter_default_cap = std::uint64_t{1} << 24;

inline std::string_view to_string(group_kind kind) {
  switch (kind) {
    case group_kind::cyclic: return "cyclic";
    case group_kind::hypercube: return "hypercube";
    case group_kind::symmetric: return "symmetric";
    case group_kind::lamplighter: return "lamplighter";
    case group_kind::table: return "table";
  }
  return "unknown";
}

namespace detail {

inline std::uint64_t factorial(unsigned m) {
  std::uint64_t f = 1;
  for (unsigned i = 2; i <= m; ++i) f *= i;
  return f;
}

// Lexicographic rank of a permutation image array (Lehmer code).
inline element_t perm_rank(const std::array<std::uint8_t, 8>& p, unsigned m) {
  std::uint64_t rank = 0;
  for (unsigned i = 0; i < m; ++i) {
    unsigned smaller = 0;
    for (unsigned j = i + 1; j < m; ++j) smaller += p[j] < p[i];
    rank = rank * (m - i) + smaller;
  }
  return static_cast<element_t>(rank);
}

inline std::array<std::uint8_t, 8> perm_unrank(element_t rank, unsigned m) {
  std::array<std::uint8_t, 8> digits{};
  std::uint64_t r = rank;
  for (unsigned i = m; i-- > 0;) {
    digits[i] = static_cast<std::uint8_t>(r % (m - i));
    r /= (m - i);
  }
  std::array<bool, 8> used{};
  std::array<std::uint8_t, 8> p{};
  for (unsigned i = 0; i < m; ++i) {
    unsigned count = digits[i];
    for (unsigned v = 0; v < m; ++v) {
      if (used[v]) continue;
      if (count-- == 0) {
        p[i] = static_cast<std::uint8_t>(v);
        used[v] = true;
        break;
      }
    }
  }
  return p;
}

inline std::uint32_t reverse_bits(std::uint32_t x, unsigned width) {
  std::uint32_t r = 0;
  for (unsigned i = 0; i < width; ++i) r |= ((x >> i) & 1u) << (width - 1 - i);
  return r;
}

inline std::uint32_t rotl_bits(std::uint32_t x, unsigned shift, unsigned width) {
  if (width == 0) return x;
  shift %= width;
  if (shift == 0) return x;
  const std::uint32_t mask = width >= 32 ? 0xFFFFFFFFu : ((1u << width) - 1u);
  return ((x << shift) | (x >> (width - shift))) & mask;
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

inline long long parse_integer(std::string_view s) {
  s = trim(s);
  long long value = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw parameter_error("not an integer: '" + std::string(s) + "'");
  }
  return value;
}

}  // namespace detail

class finite_group {
 public:
  group_kind kind() const noexcept { return kind_; }
  // L for cyclic/lamplighter, d for hypercube, m for symmetric, order for tables.
  std::uint32_t parameter() const noexcept { return param_; }
  std::uint64_t order() const noexcept { return order_; }
  element_t identity() const noexcept { return identity_; }
  bool tabulated() const noexcept { return static_cast<bool>(tables_); }

  std::string describe() const {
    return std::string(to_string(kind_)) + "(" + std::to_string(param_) + ")";
  }

  bool is_abelian() const {
    switch (kind_) {
      case group_kind::cyclic:
      case group_kind::hypercube: return true;
      case group_kind::symmetric: return param_ <= 2;
      case group_kind::lamplighter: return false;
      case group_kind::table: {
        for (element_t a = 0; a < order_; ++a)
          for (element_t b = a + 1; b < order_; ++b)
            if (multiply(a, b) != multiply(b, a)) return false;
        return true;
      }
    }
    return false;
  }

  element_t multiply(element_t a, element_t b) const {
    switch (kind_) {
      case group_kind::cyclic: {
        const std::uint64_t s = std::uint64_t{a} + b;
        return static_cast<element_t>(s >= param_ ? s - param_ : s);
      }
      case group_kind::hypercube: return a ^ b;
      default: break;
    }
    if (tables_) return tables_->mul[std::size_t{a} * order_ + b];
    return multiply_slow(a, b);
  }

  element_t inverse(element_t a) const {
    switch (kind_) {
      case group_kind::cyclic: return a == 0 ? 0 : param_ - a;
      case group_kind::hypercube: return a;
      default: break;
    }
    if (tables_) return tables_->inv[a];
    return inverse_slow(a);
  }

  // x^k for k >= 0.
  element_t power(element_t x, std::uint64_t k) const {
    element_t result = identity_;
    element_t base = x;
    while (k > 0) {
      if (k & 1) result = multiply(result, base);
      base = multiply(base, base);
      k >>= 1;
    }
    return result;
  }

  // A generating set. Conjugacy and class-function checks only need conjugation by these.
  std::vector<element_t> generators() const {
    switch (kind_) {
      case group_kind::cyclic: return {1};
      case group_kind::hypercube: {
        std::vector<element_t> g;
        for (unsigned k = 0; k < param_; ++k) g.push_back(element_t{1} << k);
        return g;
      }
      case group_kind::symmetric: {
        const unsigned m = param_;
        if (m < 2) return {};
        std::array<std::uint8_t, 8> swap{}, cycle{};
        for (unsigned i = 0; i < m; ++i) {
          swap[i] = static_cast<std::uint8_t>(i);
          cycle[i] = static_cast<std::uint8_t>((i + 1) % m);
        }
        std::swap(swap[0], swap[1]);
        std::vector<element_t> g{detail::perm_rank(swap, m)};
        if (m > 2) g.push_back(detail::perm_rank(cycle, m));
        return g;
      }
      case group_kind::lamplighter: {
        // (h1, 0) toggles lamp 0; (h0, 1) moves the walker.
        const unsigned L = param_;
        const std::uint32_t toggle_rank = detail::reverse_bits(1u, L);
        return {static_cast<element_t>(std::uint64_t{toggle_rank} * L), 1};
      }
      case group_kind::table: return table_generators();
    }
    return {};
  }

  // Canonical notation: integers (cyclic), bitstrings where character k-1 is
  // coordinate k (hypercube), cycle notation (symmetric), "(lamps,position)"
  // with character i the lamp at site i (lamplighter), plain index (table).
  std::string format(element_t x) const {
    switch (kind_) {
      case group_kind::cyclic:
      case group_kind::table: return std::to_string(x);
      case group_kind::hypercube: {
        std::string s(param_, '0');
        for (unsigned k = 0; k < param_; ++k)
          if ((x >> k) & 1u) s[k] = '1';
        return s;
      }
      case group_kind::symmetric: return format_permutation(x);
      case group_kind::lamplighter: {
        const unsigned L = param_;
        const auto [lamps, pos] = lamplighter_decode(x);
        std::string s = "(";
        for (unsigned i = 0; i < L; ++i) s += ((lamps >> i) & 1u) ? '1' : '0';
        s += "," + std::to_string(pos) + ")";
        return s;
      }
    }
    return {};
  }

  element_t parse(std::string_view text) const {
    text = detail::trim(text);
    switch (kind_) {
      case group_kind::cyclic: {
        const long long v = detail::parse_integer(text);
        const long long L = param_;
        return static_cast<element_t>(((v % L) + L) % L);
      }
      case group_kind::table: {
        const long long v = detail::parse_integer(text);
        if (v < 0 || static_cast<std::uint64_t>(v) >= order_)
          throw parameter_error("element index out of range: " + std::string(text));
        return static_cast<element_t>(v);
      }
      case group_kind::hypercube: {
        if (text == "e" || text == "0") return 0;
        if (text.size() != param_)
          throw parameter_error("hypercube element must be a bitstring of length " +
                                std::to_string(param_) + ": '" + std::string(text) + "'");
        element_t x = 0;
        for (unsigned k = 0; k < param_; ++k) {
          if (text[k] == '1') x |= element_t{1} << k;
          else if (text[k] != '0') throw parameter_error("bad bitstring: " + std::string(text));
        }
        return x;
      }
      case group_kind::symmetric: return parse_permutation(text);
      case group_kind::lamplighter: return parse_lamplighter(text);
    }
    throw parameter_error("cannot parse element");
  }

  // For the lamplighter: (lamp word with bit i = lamp i, position).
  std::pair<std::uint32_t, std::uint32_t> lamplighter_decode(element_t x) const {
    const unsigned L = param_;
    const std::uint32_t rank = x / L;
    return {detail::reverse_bits(rank, L), x % L};
  }
  element_t lamplighter_encode(std::uint32_t lamps, std::uint32_t pos) const {
    const unsigned L = param_;
    return static_cast<element_t>(std::uint64_t{detail::reverse_bits(lamps, L)} * L + pos % L);
  }

  // Image array of a permutation (0-based): image[i] = x(i).
  std::vector<unsigned> permutation_images(element_t x) const {
    const auto p = detail::perm_unrank(x, param_);
    return std::vector<unsigned>(p.begin(), p.begin() + param_);
  }

  // Factories.
  friend finite_group make_cyclic(std::uint32_t L);
  friend finite_group make_hypercube(std::uint32_t d);
  friend finite_group make_symmetric(std::uint32_t m);
  friend finite_group make_lamplighter(std::uint32_t L, std::uint64_t cap);
  friend finite_group make_table_group(const std::vector<std::vector<element_t>>& table);

 private:
  struct tables {
    std::vector<element_t> mul;
    std::vector<element_t> inv;
    std::vector<element_t> gens;
  };

  finite_group(group_kind kind, std::uint32_t param, std::uint64_t order)
      : kind_(kind), param_(param), order_(order) {}

  element_t multiply_slow(element_t a, element_t b) const {
    if (kind_ == group_kind::symmetric) {
      const unsigned m = param_;
      const auto pa = detail::perm_unrank(a, m);
      const auto pb = detail::perm_unrank(b, m);
      std::array<std::uint8_t, 8> c{};
      for (unsigned i = 0; i < m; ++i) c[i] = pb[pa[i]];  // apply a, then b
      return detail::perm_rank(c, m);
    }
    if (kind_ == group_kind::lamplighter) {
      // (f,j)·(h,k) = (phi, j+k), phi(i) = f(i) + h(i-j)
      const unsigned L = param_;
      const auto [f, j] = lamplighter_decode(a);
      const auto [h, k] = lamplighter_decode(b);
      const std::uint32_t phi = f ^ detail::rotl_bits(h, j, L);
      return lamplighter_encode(phi, (j + k) % L);
    }
    throw contract_error("multiply_slow called on a kind without an arithmetic path");
  }

  element_t inverse_slow(element_t a) const {
    if (kind_ == group_kind::symmetric) {
      const unsigned m = param_;
      const auto p = detail::perm_unrank(a, m);
      std::array<std::uint8_t, 8> q{};
      for (unsigned i = 0; i < m; ++i) q[p[i]] = static_cast<std::uint8_t>(i);
      return detail::perm_rank(q, m);
    }
    if (kind_ == group_kind::lamplighter) {
      // (f,j)^{-1} = (f', -j), f'(i) = f(i+j)
      const unsigned L = param_;
      const auto [f, j] = lamplighter_decode(a);
      const std::uint32_t fp = detail::rotl_bits(f, (L - j) % L, L);
      return lamplighter_encode(fp, (L - j) % L);
    }
    throw contract_error("inverse_slow called on a kind without an arithmetic path");
  }

  void tabulate() {
    auto t = std::make_shared<tables>();
    const std::size_t n = order_;
    t->mul.resize(n * n);
    t->inv.resize(n);
    for (element_t a = 0; a < n; ++a) {
      for (element_t b = 0; b < n; ++b) t->mul[a * n + b] = multiply_slow(a, b);
      t->inv[a] = inverse_slow(a);
    }
    tables_ = std::move(t);
  }

  std::vector<element_t> table_generators() const {
    // Greedy: add any element outside the subgroup generated so far.
    std::vector<element_t> gens;
    std::vector<bool> in(order_, false);
    in[identity_] = true;
    std::size_t covered = 1;
    for (element_t x = 0; x < order_ && covered < order_; ++x) {
      if (in[x]) continue;
      gens.push_back(x);
      std::vector<element_t> frontier;
      for (element_t y = 0; y < order_; ++y)
        if (in[y]) frontier.push_back(y);
      while (!frontier.empty()) {
        const element_t y = frontier.back();
        frontier.pop_back();
        for (element_t g : gens) {
          const element_t z = multiply(y, g);
          if (!in[z]) {
            in[z] = true;
            ++covered;
            frontier.push_back(z);
          }
        }
      }
    }
    return gens;
  }

  std::string format_permutation(element_t x) const {
    const unsigned m = param_;
    const auto p = detail::perm_unrank(x, m);
    std::array<bool, 8> seen{};
    std::string out;
    for (unsigned i = 0; i < m; ++i) {
      if (seen[i] || p[i] == i) continue;
      out += '(';
      unsigned j = i;
      while (!seen[j]) {
        seen[j] = true;
        out += static_cast<char>('1' + j);
        j = p[j];
      }
      out += ')';
    }
    return out.empty() ? "()" : out;
  }

  element_t parse_permutation(std::string_view text) const {
    const unsigned m = param_;
    std::array<std::uint8_t, 8> p{};
    for (unsigned i = 0; i < m; ++i) p[i] = static_cast<std::uint8_t>(i);
    if (text == "e" || text == "()" || text.empty()) return detail::perm_rank(p, m);
    std::array<bool, 8> moved{};
    std::size_t pos = 0;
    while (pos < text.size()) {
      if (text[pos] == ' ') {
        ++pos;
        continue;
      }
      if (text[pos] != '(') throw parameter_error("bad cycle notation: " + std::string(text));
      const std::size_t close = text.find(')', pos);
      if (close == std::string_view::npos)
        throw parameter_error("unterminated cycle: " + std::string(text));
      std::vector<unsigned> cycle;
      for (std::size_t i = pos + 1; i < close; ++i) {
        const char c = text[i];
        if (c == ' ' || c == ',') continue;
        if (c < '1' || c > static_cast<char>('0' + m))
          throw parameter_error("cycle entry out of range in " + std::string(text));
        cycle.push_back(static_cast<unsigned>(c - '1'));
      }
      for (unsigned v : cycle) {
        if (moved[v]) throw parameter_error("cycles must be disjoint: " + std::string(text));
        moved[v] = true;
      }
      for (std::size_t i = 0; i < cycle.size(); ++i)
        p[cycle[i]] = static_cast<std::uint8_t>(cycle[(i + 1) % cycle.size()]);
      pos = close + 1;
    }
    return detail::perm_rank(p, m);
  }

  element_t parse_lamplighter(std::string_view text) const {
    const unsigned L = param_;
    if (text == "e") return 0;
    if (text.size() < 5 || text.front() != '(' || text.back() != ')')
      throw parameter_error("lamplighter element must look like (bits,position): " +
                            std::string(text));
    const std::string_view inner = text.substr(1, text.size() - 2);
    const std::size_t comma = inner.find(',');
    if (comma == std::string_view::npos)
      throw parameter_error("lamplighter element needs a comma: " + std::string(text));
    const std::string_view bits = detail::trim(inner.substr(0, comma));
    if (bits.size() != L)
      throw parameter_error("lamp bitstring must have length " + std::to_string(L));
    std::uint32_t lamps = 0;
    for (unsigned i = 0; i < L; ++i) {
      if (bits[i] == '1') lamps |= 1u << i;
      else if (bits[i] != '0') throw parameter_error("bad lamp bitstring: " + std::string(bits));
    }
    const long long pos = detail::parse_integer(inner.substr(comma + 1));
    const long long Ls = L;
    return lamplighter_encode(lamps, static_cast<std::uint32_t>(((pos % Ls) + Ls) % Ls));
  }

  group_kind kind_;
  std::uint32_t param_;
  std::uint64_t order_;
  element_t identity_ = 0;
  std::shared_ptr<const tables> tables_;
};

inline finite_group make_cyclic(std::uint32_t L) {
  if (L < 2) throw size_error("cyclic group needs L >= 2");
  return finite_group(group_kind::cyclic, L, L);
}

// Element indices are 32-bit, so d <= 32.
inline finite_group make_hypercube(std::uint32_t d) {
  if (d < 1 || d > 32) throw size_error("hypercube group needs 1 <= d <= 32");
  return finite_group(group_kind::hypercube, d, std::uint64_t{1} << d);
}

inline finite_group make_symmetric(std::uint32_t m) {
  if (m < 1 || m > 8) throw size_error("symmetric group needs 1 <= m <= 8");
  finite_group g(group_kind::symmetric, m, detail::factorial(m));
  if (g.order_ <= tabulation_limit) g.tabulate();
  return g;
}

inline finite_group make_lamplighter(std::uint32_t L, std::uint64_t cap = lamplighter_default_cap) {
  if (L < 2 || L > 26) throw size_error("lamplighter group needs 2 <= L");
  const std::uint64_t order = std::uint64_t{L} << L;
  if (order > cap)
    throw size_error("lamplighter order L*2^L = " + std::to_string(order) + " exceeds cap " +
                     std::to_string(cap));
  finite_group g(group_kind::lamplighter, L, order);
  if (order <= tabulation_limit) g.tabulate();
  return g;
}

// Group from an explicit Cayley table. Checks closure, identity, inverses, and
// associativity (exhaustive for order <= 256, 10^5 sampled triples otherwise).
inline finite_group make_table_group(const std::vector<std::vector<element_t>>& table) {
  const std::size_t n = table.size();
  if (n < 1 || n > tabulation_limit) throw size_error("Cayley table order must be in [1, 4096]");
  for (const auto& row : table)
    if (row.size() != n) throw parameter_error("Cayley table must be square");
  for (const auto& row : table)
    for (element_t v : row)
      if (v >= n) throw parameter_error("Cayley table entry out of range");

  std::optional<element_t> identity;
  for (element_t e = 0; e < n && !identity; ++e) {
    bool ok = true;
    for (element_t x = 0; x < n && ok; ++x) ok = table[e][x] == x && table[x][e] == x;
    if (ok) identity = e;
  }
  if (!identity) throw parameter_error("Cayley table has no identity");

  finite_group g(group_kind::table, static_cast<std::uint32_t>(n), n);
  g.identity_ = *identity;
  auto t = std::make_shared<finite_group::tables>();
  t->mul.resize(n * n);
  t->inv.assign(n, 0);
  for (element_t a = 0; a < n; ++a) {
    bool found = false;
    for (element_t b = 0; b < n; ++b) {
      t->mul[a * n + b] = table[a][b];
      if (table[a][b] == *identity) {
        if (table[b][a] != *identity) throw parameter_error("Cayley table: one-sided inverse");
        t->inv[a] = b;
        found = true;
      }
    }
    if (!found) throw parameter_error("Cayley table: element without inverse");
  }
  auto assoc = [&](element_t x, element_t y, element_t z) {
    return table[table[x][y]][z] == table[x][table[y][z]];
  };
  if (n <= 256) {
    for (element_t x = 0; x < n; ++x)
      for (element_t y = 0; y < n; ++y)
        for (element_t z = 0; z < n; ++z)
          if (!assoc(x, y, z)) throw parameter_error("Cayley table is not associative");
  } else {
    std::uint64_t s = 0x5EED;
    for (int i = 0; i < 100000; ++i) {
      const auto x = static_cast<element_t>(mix64(s++) % n);
      const auto y = static_cast<element_t>(mix64(s++) % n);
      const auto z = static_cast<element_t>(mix64(s++) % n);
      if (!assoc(x, y, z)) throw parameter_error("Cayley table is not associative");
    }
  }
  g.tables_ = std::move(t);
  return g;
}

// Builds one of the named groups: "cyclic" (L), "hypercube" (d), "symmetric" (m),
// "lamplighter" (L).
inline finite_group make_group(std::string_view kind, std::uint32_t size) {
  if (kind == "cyclic") return make_cyclic(size);
  if (kind == "hypercube") return make_hypercube(size);
  if (kind == "symmetric") return make_symmetric(size);
  if (kind == "lamplighter") return make_lamplighter(size);
  throw parameter_error("unknown group kind '" + std::string(kind) + "'");
}

}  // namespace srrw
