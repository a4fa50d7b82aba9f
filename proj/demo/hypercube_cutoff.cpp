// t_mix(eps) / (d log d) on Z_2^d at alpha = 1/2 against the limit c_alpha.

#include <cmath>
#include <cstdio>

#include <srrw.hpp>

int main() {
  using namespace srrw;
  const double alpha = 0.5;
  const auto grid = linear_grid(1, 3000, 1);
  std::printf("c_alpha = %.5f\n", cutoff_constant(alpha));
  for (std::uint32_t d : {32u, 64u, 128u}) {
    const auto curve = hypercube_tv_estimate(d, alpha, grid, 4000, 2);
    const double scale = d * std::log(static_cast<double>(d));
    std::printf("d=%4u", d);
    for (double eps : {0.9, 0.5, 0.1})
      std::printf("  t(%.1f)/dlogd=%.3f", eps, mixing_time_scan(curve, eps).t_mix / scale);
    std::printf("\n");
  }
}
