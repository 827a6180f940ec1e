#pragma once

// Shared test helpers: deterministic instance generators and slow oracle
// implementations that the fast library code is checked against.

#include <algorithm>
#include <cmath>
#include <vector>

#include "robagg/rng.hpp"
#include "robagg/vec.hpp"

namespace testsupport {

using robagg::RngStream;
using robagg::Vec;

inline std::vector<Vec> gaussian_instance(int n, int d, RngStream& rng,
                                          double scale = 1.0) {
  std::vector<Vec> xs(n, Vec(d));
  for (auto& x : xs)
    for (auto& v : x) v = scale * rng.normal();
  return xs;
}

// Mean over a 0-based index list, accumulated in the given order.
inline Vec mean_of(const std::vector<Vec>& xs, const std::vector<int>& ids) {
  Vec m(xs[0].size(), 0.0);
  for (int i : ids)
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += xs[i][k];
  for (auto& v : m) v /= static_cast<double>(ids.size());
  return m;
}

// Variance via the pairwise identity (1/2|S|^2) sum_{i,j} ||x_i - x_j||^2,
// an independent route from the library's deviations-from-mean form.
inline double pairwise_variance(const std::vector<Vec>& xs,
                                const std::vector<int>& ids) {
  double s = 0.0;
  for (int i : ids)
    for (int j : ids) s += robagg::sq_dist(xs[i], xs[j]);
  double m = static_cast<double>(ids.size());
  return s / (2.0 * m * m);
}

// All 0-based combinations of size k from [0, n), lexicographic.
inline std::vector<std::vector<int>> combinations(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  if (k == 0) return {std::vector<int>{}};
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[i] == n - k + i) --i;
    if (i < 0) break;
    ++c[i];
    for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  }
  return out;
}

inline bool close(double a, double b, double tol) {
  return std::fabs(a - b) <= tol;
}

inline bool close_rel(double a, double b, double tol) {
  double scale = std::max({1.0, std::fabs(a), std::fabs(b)});
  return std::fabs(a - b) <= tol * scale;
}

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::fabs(a[i] - b[i]));
  return m;
}

}  // namespace testsupport
