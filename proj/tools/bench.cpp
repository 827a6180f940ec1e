// Times the serial reference kernels against the OpenMP versions and checks
// that the two backends produce bit-identical results.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <vector>

#include "robagg/aggregators.hpp"
#include "robagg/kernels.hpp"
#include "robagg/rng.hpp"
#include "robagg/vec.hpp"

using namespace robagg;

namespace {

double ms_best_of(int reps, const std::function<void()>& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    best = std::min(
        best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

std::vector<Vec> instance(int n, int d, std::uint64_t seed) {
  RngStream rng(seed, 0);
  std::vector<Vec> xs(n, Vec(d));
  for (auto& x : xs)
    for (auto& v : x) v = rng.normal();
  return xs;
}

void report(const char* name, double serial_ms, double par_ms, bool same) {
  std::printf("%-20s serial %9.3f ms   openmp %9.3f ms   x%-5.2f %s\n", name,
              serial_ms, par_ms, serial_ms / par_ms,
              same ? "outputs identical" : "OUTPUT MISMATCH");
}

}  // namespace

int main() {
  std::printf("openmp: %s, max threads %d\n",
              kernels::openmp_available() ? "available" : "not built in",
              kernels::max_threads());

  {
    auto xs = instance(400, 100, 7);
    std::vector<double> a, b;
    double s =
        ms_best_of(3, [&] { a = kernels::serial::pairwise_sq_dists(xs); });
    double p = ms_best_of(3, [&] { b = kernels::par::pairwise_sq_dists(xs); });
    report("pairwise_sq_dists", s, p, a == b);

    const auto& dists = a;
    std::vector<Vec> ya, yb;
    s = ms_best_of(3,
                   [&] { ya = kernels::serial::nearest_mean_mix(xs, 100, dists); });
    p = ms_best_of(3,
                   [&] { yb = kernels::par::nearest_mean_mix(xs, 100, dists); });
    report("nearest_mean_mix", s, p, ya == yb);
  }

  {
    // C(24,6) = 134596 subsets
    auto xs = instance(24, 10, 8);
    Vec center = mean(xs);
    kernels::SubsetScanResult ra, rb;
    double s = ms_best_of(
        3, [&] { ra = kernels::serial::kappa_subset_scan(xs, center, 6, 1e-12); });
    double p = ms_best_of(
        3, [&] { rb = kernels::par::kappa_subset_scan(xs, center, 6, 1e-12); });
    bool same = ra.best.value == rb.best.value &&
                ra.best.rank == rb.best.rank && ra.evaluated == rb.evaluated &&
                ra.degenerate == rb.degenerate;
    report("kappa_subset_scan", s, p, same);
  }

  {
    // the eta-search inner loop: one candidate attack vector per grid point,
    // scored through a trimmed mean
    auto xs = instance(50, 20, 9);
    Vec sbar = mean(xs);
    auto score = [&](int i) {
      double eta = 10.0 * i / 2000.0;
      std::vector<Vec> ys = xs;
      for (int b = 45; b < 50; ++b) ys[b] = scale(sbar, 1.0 - eta);
      return sq_dist(cwtm(ys, 5), sbar);
    };
    kernels::ScanBest ba, bb;
    double s =
        ms_best_of(3, [&] { ba = kernels::serial::grid_argmax(2001, score); });
    double p =
        ms_best_of(3, [&] { bb = kernels::par::grid_argmax(2001, score); });
    report("grid_argmax", s, p,
           ba.value == bb.value && ba.rank == bb.rank);
  }
  return 0;
}
