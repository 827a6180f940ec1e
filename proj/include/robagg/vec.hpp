#pragma once

#include <cstddef>
#include <vector>

namespace robagg {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b);
double sq_norm(const Vec& a);
double norm(const Vec& a);
double sq_dist(const Vec& a, const Vec& b);

Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(const Vec& a, double c);
// y += c * x
void axpy(Vec& y, double c, const Vec& x);

// 1-based worker indices, kept sorted and unique.
struct IndexSet {
  std::vector<int> idx;

  IndexSet() = default;
  explicit IndexSet(std::vector<int> v);
  // {lo, lo+1, ..., hi}; empty when hi < lo.
  static IndexSet range(int lo, int hi);

  std::size_t size() const { return idx.size(); }
  bool empty() const { return idx.empty(); }
  bool contains(int i) const;
  // Every index must lie in [1, n].
  void validate(int n) const;
};

// Mean of the selected vectors, summed in ascending index order.
Vec subset_mean(const std::vector<Vec>& xs, const IndexSet& S);
// (1/|S|) sum_{i in S} ||x_i - mean_S||^2.
double subset_variance(const std::vector<Vec>& xs, const IndexSet& S);
// Per-coordinate population standard deviation over all input vectors.
Vec coordinate_std(const std::vector<Vec>& xs);

// Throws unless all vectors share one dimension and the list is nonempty.
void check_same_dim(const std::vector<Vec>& xs);

}  // namespace robagg
