#include "robagg/kernels.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace robagg::kernels {

namespace {
std::atomic<Backend> g_backend{Backend::openmp};
}

Backend backend() { return g_backend.load(std::memory_order_relaxed); }

void set_backend(Backend b) { g_backend.store(b, std::memory_order_relaxed); }

ScanBest merge_best(const ScanBest& a, const ScanBest& b) {
  if (!a.valid) return b;
  if (!b.valid) return a;
  if (b.value > a.value) return b;
  if (b.value < a.value) return a;
  return b.rank < a.rank ? b : a;
}

std::uint64_t combination_count(int n, int f) {
  if (f < 0 || n < 0 || f > n) return 0;
  f = std::min(f, n - f);
  unsigned __int128 c = 1;
  for (int i = 1; i <= f; ++i) {
    c = c * static_cast<unsigned>(n - f + i) / static_cast<unsigned>(i);
    if (c > static_cast<unsigned __int128>(1000000000000000000ULL))
      throw std::overflow_error("combination count overflow");
  }
  return static_cast<std::uint64_t>(c);
}

void unrank_combination(std::uint64_t rank, int n, int f,
                        std::vector<int>& out) {
  out.clear();
  int x = 0;
  for (int k = f; k >= 1; --k) {
    while (true) {
      std::uint64_t c = combination_count(n - x - 1, k - 1);
      if (rank < c) {
        out.push_back(x);
        ++x;
        break;
      }
      rank -= c;
      ++x;
    }
  }
}

double subset_ratio(const std::vector<Vec>& xs, const Vec& center,
                    const std::vector<int>& dropped, double zero_var_tol,
                    bool& degenerate, bool& skip) {
  int n = static_cast<int>(xs.size());
  std::size_t d = center.size();
  degenerate = false;
  skip = false;

  // mean over the complement, ascending index order
  Vec mean(d, 0.0);
  int kept = 0;
  std::size_t di = 0;
  for (int i = 0; i < n; ++i) {
    if (di < dropped.size() && dropped[di] == i) {
      ++di;
      continue;
    }
    for (std::size_t k = 0; k < d; ++k) mean[k] += xs[i][k];
    ++kept;
  }
  for (auto& v : mean) v /= static_cast<double>(kept);

  double var = 0.0;
  di = 0;
  for (int i = 0; i < n; ++i) {
    if (di < dropped.size() && dropped[di] == i) {
      ++di;
      continue;
    }
    var += sq_dist(xs[i], mean);
  }
  var /= static_cast<double>(kept);

  double num = sq_dist(center, mean);
  if (var < zero_var_tol) {
    degenerate = true;
    if (num > zero_var_tol) return std::numeric_limits<double>::infinity();
    skip = true;
    return 0.0;
  }
  return num / var;
}

bool openmp_available() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

std::vector<double> pairwise_sq_dists(const std::vector<Vec>& xs) {
  return backend() == Backend::openmp ? par::pairwise_sq_dists(xs)
                                      : serial::pairwise_sq_dists(xs);
}

std::vector<Vec> nearest_mean_mix(const std::vector<Vec>& xs, int f,
                                  const std::vector<double>& dists) {
  return backend() == Backend::openmp ? par::nearest_mean_mix(xs, f, dists)
                                      : serial::nearest_mean_mix(xs, f, dists);
}

SubsetScanResult kappa_subset_scan(const std::vector<Vec>& xs,
                                   const Vec& center, int f,
                                   double zero_var_tol) {
  return backend() == Backend::openmp
             ? par::kappa_subset_scan(xs, center, f, zero_var_tol)
             : serial::kappa_subset_scan(xs, center, f, zero_var_tol);
}

ScanBest grid_argmax(int points, const std::function<double(int)>& score) {
  return backend() == Backend::openmp ? par::grid_argmax(points, score)
                                      : serial::grid_argmax(points, score);
}

void for_each_index(int n, const std::function<void(int)>& fn) {
  if (backend() == Backend::openmp)
    par::for_each_index(n, fn);
  else
    serial::for_each_index(n, fn);
}

}  // namespace robagg::kernels
