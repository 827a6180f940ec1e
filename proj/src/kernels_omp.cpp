// OpenMP backend. Loops are parallel over independent outputs and every
// reduction merges (value, rank) pairs under a total order, so results are
// bit-identical to kernels_serial.cpp for any thread count.

#include <utility>

#include "robagg/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace robagg::kernels {

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

namespace serial::detail {
Vec mix_one(const std::vector<Vec>& xs, int f, const std::vector<double>& dists,
            int i, std::vector<std::pair<double, int>>& order,
            std::vector<int>& keep);
void advance_combination(std::vector<int>& combo, int n);
}  // namespace serial::detail

namespace par {

#ifndef _OPENMP

// Without OpenMP this backend is the reference one.
std::vector<double> pairwise_sq_dists(const std::vector<Vec>& xs) {
  return serial::pairwise_sq_dists(xs);
}
std::vector<Vec> nearest_mean_mix(const std::vector<Vec>& xs, int f,
                                  const std::vector<double>& dists) {
  return serial::nearest_mean_mix(xs, f, dists);
}
SubsetScanResult kappa_subset_scan(const std::vector<Vec>& xs,
                                   const Vec& center, int f,
                                   double zero_var_tol) {
  return serial::kappa_subset_scan(xs, center, f, zero_var_tol);
}
ScanBest grid_argmax(int points, const std::function<double(int)>& score) {
  return serial::grid_argmax(points, score);
}
void for_each_index(int n, const std::function<void(int)>& fn) {
  serial::for_each_index(n, fn);
}

#else

std::vector<double> pairwise_sq_dists(const std::vector<Vec>& xs) {
  int n = static_cast<int>(xs.size());
  std::vector<double> d(static_cast<std::size_t>(n) * n);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d[static_cast<std::size_t>(i) * n + j] = sq_dist(xs[i], xs[j]);
  return d;
}

std::vector<Vec> nearest_mean_mix(const std::vector<Vec>& xs, int f,
                                  const std::vector<double>& dists) {
  int n = static_cast<int>(xs.size());
  std::vector<Vec> out(n);
#pragma omp parallel
  {
    std::vector<std::pair<double, int>> order;
    std::vector<int> keep;
#pragma omp for schedule(static)
    for (int i = 0; i < n; ++i)
      out[i] = serial::detail::mix_one(xs, f, dists, i, order, keep);
  }
  return out;
}

SubsetScanResult kappa_subset_scan(const std::vector<Vec>& xs,
                                   const Vec& center, int f,
                                   double zero_var_tol) {
  int n = static_cast<int>(xs.size());
  SubsetScanResult r;
  r.evaluated = combination_count(n, f);
  long long total = static_cast<long long>(r.evaluated);
  std::uint64_t degenerate_total = 0;
  ScanBest global;
#pragma omp parallel
  {
    ScanBest local;
    std::uint64_t degenerate = 0;
    std::vector<int> combo;
    long long cursor = -2;  // force an unrank on first iteration
#pragma omp for schedule(static) nowait
    for (long long rank = 0; rank < total; ++rank) {
      if (rank != cursor + 1)
        unrank_combination(static_cast<std::uint64_t>(rank), n, f, combo);
      else
        serial::detail::advance_combination(combo, n);
      cursor = rank;
      bool degen = false, skip = false;
      double ratio =
          subset_ratio(xs, center, combo, zero_var_tol, degen, skip);
      if (degen) ++degenerate;
      if (!skip)
        local = merge_best(
            local, ScanBest{ratio, static_cast<std::uint64_t>(rank), true});
    }
#pragma omp critical
    {
      global = merge_best(global, local);
      degenerate_total += degenerate;
    }
  }
  r.best = global;
  r.degenerate = degenerate_total;
  return r;
}

ScanBest grid_argmax(int points, const std::function<double(int)>& score) {
  ScanBest global;
#pragma omp parallel
  {
    ScanBest local;
#pragma omp for schedule(static) nowait
    for (int i = 0; i < points; ++i)
      local = merge_best(
          local, ScanBest{score(i), static_cast<std::uint64_t>(i), true});
#pragma omp critical
    global = merge_best(global, local);
  }
  return global;
}

void for_each_index(int n, const std::function<void(int)>& fn) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < n; ++i) fn(i);
}

#endif  // _OPENMP

}  // namespace par
}  // namespace robagg::kernels
