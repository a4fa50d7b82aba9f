// Exact and Rao-Blackwell TV curves for the simple walk on Z_5.

#include <cstdio>

#include <srrw.hpp>

int main() {
  using namespace srrw;
  const auto mu = simple_cycle_step(make_cyclic(5));
  const double alpha = 0.5;
  const auto exact = exact_tv_curve(mu, alpha, 9);
  const auto rb = rao_blackwell_cycle(5, alpha, linear_grid(1, 9, 1), 50000, 1);
  std::printf("  n     exact        RB    stderr\n");
  for (std::size_t i = 0; i < exact.size(); ++i)
    std::printf("%3llu  %.6f  %.6f  %.1e\n", static_cast<unsigned long long>(exact[i].n),
                exact[i].value, rb.tv[i].value, rb.tv[i].std_error);
  const auto m = mixing_time_scan(exact, 0.25);
  std::printf("t_mix(1/4) = %llu\n", static_cast<unsigned long long>(m.t_mix));
}
