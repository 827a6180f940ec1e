#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "robagg/vec.hpp"

// Data-parallel kernels behind the aggregation and certification code.
// Each kernel exists twice: kernels::serial is the plain reference used by
// the tests, kernels::par is the OpenMP version. Both are written so the
// result is bit-identical regardless of backend or thread count: parallel
// loops only ever write disjoint outputs, and reductions carry an explicit
// (value, rank) pair merged with a total order.

namespace robagg::kernels {

enum class Backend { serial, openmp };

Backend backend();
void set_backend(Backend b);
bool openmp_available();
int max_threads();

struct ScanBest {
  double value = 0.0;       // may be +inf
  std::uint64_t rank = 0;   // lowest rank wins ties
  bool valid = false;
};

// Prefer higher value; on exactly equal value prefer lower rank.
ScanBest merge_best(const ScanBest& a, const ScanBest& b);

struct SubsetScanResult {
  ScanBest best;                 // max ratio and the rank of its subset
  std::uint64_t evaluated = 0;   // subsets enumerated
  std::uint64_t degenerate = 0;  // subsets with variance below tolerance
};

// Row-major n*n matrix of squared distances.
std::vector<double> pairwise_sq_dists(const std::vector<Vec>& xs);

// For each input, the mean of its n-f nearest inputs (itself included,
// distance ties broken toward the lower index). dists must come from
// pairwise_sq_dists on the same inputs.
std::vector<Vec> nearest_mean_mix(const std::vector<Vec>& xs, int f,
                                  const std::vector<double>& dists);

// Scans all C(n,f) subsets S = [n] minus (a size-f combination), computing
// ||center - mean_S||^2 / variance_S. Combinations are ranked
// lexicographically; rank is what SubsetScanResult reports. Subsets with
// variance < zero_var_tol count as degenerate: they contribute +inf when the
// numerator exceeds zero_var_tol and are skipped otherwise.
SubsetScanResult kappa_subset_scan(const std::vector<Vec>& xs, const Vec& center,
                                   int f, double zero_var_tol);

// Evaluates score(i) for i in [0, points) and returns the argmax with
// first-index tie-breaking. score must be pure.
ScanBest grid_argmax(int points, const std::function<double(int)>& score);

// Runs fn(i) for i in [0, n); fn may only touch state owned by slot i.
void for_each_index(int n, const std::function<void(int)>& fn);

// Lexicographic rank <-> combination helpers for size-f combinations
// drawn from [0, n). Exposed for the scan tests.
std::uint64_t combination_count(int n, int f);  // throws above 10^18
void unrank_combination(std::uint64_t rank, int n, int f, std::vector<int>& out);

namespace serial {
std::vector<double> pairwise_sq_dists(const std::vector<Vec>& xs);
std::vector<Vec> nearest_mean_mix(const std::vector<Vec>& xs, int f,
                                  const std::vector<double>& dists);
SubsetScanResult kappa_subset_scan(const std::vector<Vec>& xs, const Vec& center,
                                   int f, double zero_var_tol);
ScanBest grid_argmax(int points, const std::function<double(int)>& score);
void for_each_index(int n, const std::function<void(int)>& fn);
}  // namespace serial

namespace par {
std::vector<double> pairwise_sq_dists(const std::vector<Vec>& xs);
std::vector<Vec> nearest_mean_mix(const std::vector<Vec>& xs, int f,
                                  const std::vector<double>& dists);
SubsetScanResult kappa_subset_scan(const std::vector<Vec>& xs, const Vec& center,
                                   int f, double zero_var_tol);
ScanBest grid_argmax(int points, const std::function<double(int)>& score);
void for_each_index(int n, const std::function<void(int)>& fn);
}  // namespace par

// Shared by both backends: ratio for one subset, given the combination of
// dropped indices. Exact summation order is part of the contract.
double subset_ratio(const std::vector<Vec>& xs, const Vec& center,
                    const std::vector<int>& dropped, double zero_var_tol,
                    bool& degenerate, bool& skip);

}  // namespace robagg::kernels
