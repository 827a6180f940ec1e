// Reference implementations: plain loops, no threading. The parallel
// backend in kernels_omp.cpp must match these bit for bit.

#include <algorithm>
#include <utility>

#include "robagg/kernels.hpp"

namespace robagg::kernels::serial {

std::vector<double> pairwise_sq_dists(const std::vector<Vec>& xs) {
  int n = static_cast<int>(xs.size());
  std::vector<double> d(static_cast<std::size_t>(n) * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      d[static_cast<std::size_t>(i) * n + j] = sq_dist(xs[i], xs[j]);
  return d;
}

namespace detail {

// One mixed output: average of the n-f nearest inputs to point i,
// accumulated in ascending neighbor-index order.
Vec mix_one(const std::vector<Vec>& xs, int f, const std::vector<double>& dists,
            int i, std::vector<std::pair<double, int>>& order,
            std::vector<int>& keep) {
  int n = static_cast<int>(xs.size());
  order.clear();
  for (int j = 0; j < n; ++j)
    order.emplace_back(dists[static_cast<std::size_t>(i) * n + j], j);
  std::sort(order.begin(), order.end());  // (distance, index): ties low index
  keep.clear();
  for (int k = 0; k < n - f; ++k) keep.push_back(order[k].second);
  std::sort(keep.begin(), keep.end());

  Vec y(xs[0].size(), 0.0);
  for (int j : keep)
    for (std::size_t c = 0; c < y.size(); ++c) y[c] += xs[j][c];
  for (auto& v : y) v /= static_cast<double>(n - f);
  return y;
}

void advance_combination(std::vector<int>& combo, int n) {
  int f = static_cast<int>(combo.size());
  int i = f - 1;
  while (i >= 0 && combo[i] == n - f + i) --i;
  if (i < 0) return;
  ++combo[i];
  for (int j = i + 1; j < f; ++j) combo[j] = combo[j - 1] + 1;
}

}  // namespace detail

std::vector<Vec> nearest_mean_mix(const std::vector<Vec>& xs, int f,
                                  const std::vector<double>& dists) {
  int n = static_cast<int>(xs.size());
  std::vector<Vec> out(n);
  std::vector<std::pair<double, int>> order;
  std::vector<int> keep;
  for (int i = 0; i < n; ++i)
    out[i] = detail::mix_one(xs, f, dists, i, order, keep);
  return out;
}

SubsetScanResult kappa_subset_scan(const std::vector<Vec>& xs,
                                   const Vec& center, int f,
                                   double zero_var_tol) {
  int n = static_cast<int>(xs.size());
  SubsetScanResult r;
  r.evaluated = combination_count(n, f);
  std::vector<int> combo(f);
  for (int i = 0; i < f; ++i) combo[i] = i;
  for (std::uint64_t rank = 0; rank < r.evaluated; ++rank) {
    bool degenerate = false, skip = false;
    double ratio = subset_ratio(xs, center, combo, zero_var_tol, degenerate, skip);
    if (degenerate) ++r.degenerate;
    if (!skip) r.best = merge_best(r.best, ScanBest{ratio, rank, true});
    detail::advance_combination(combo, n);
  }
  return r;
}

ScanBest grid_argmax(int points, const std::function<double(int)>& score) {
  ScanBest best;
  for (int i = 0; i < points; ++i)
    best = merge_best(best,
                      ScanBest{score(i), static_cast<std::uint64_t>(i), true});
  return best;
}

void for_each_index(int n, const std::function<void(int)>& fn) {
  for (int i = 0; i < n; ++i) fn(i);
}

}  // namespace robagg::kernels::serial
