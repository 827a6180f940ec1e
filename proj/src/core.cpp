#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "robagg/vec.hpp"

namespace robagg {

namespace {
void check_dims(const Vec& a, const Vec& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("dimension mismatch: " +
                                std::to_string(a.size()) + " vs " +
                                std::to_string(b.size()));
}
}  // namespace

double dot(const Vec& a, const Vec& b) {
  check_dims(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double sq_norm(const Vec& a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return s;
}

double norm(const Vec& a) { return std::sqrt(sq_norm(a)); }

double sq_dist(const Vec& a, const Vec& b) {
  check_dims(a, b);
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

Vec add(const Vec& a, const Vec& b) {
  check_dims(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

Vec sub(const Vec& a, const Vec& b) {
  check_dims(a, b);
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

Vec scale(const Vec& a, double c) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

void axpy(Vec& y, double c, const Vec& x) {
  check_dims(y, x);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += c * x[i];
}

IndexSet::IndexSet(std::vector<int> v) : idx(std::move(v)) {
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] < 1)
      throw std::invalid_argument("worker indices are 1-based");
    if (i > 0 && idx[i] == idx[i - 1])
      throw std::invalid_argument("duplicate worker index " +
                                  std::to_string(idx[i]));
  }
}

IndexSet IndexSet::range(int lo, int hi) {
  IndexSet s;
  for (int i = lo; i <= hi; ++i) s.idx.push_back(i);
  return s;
}

bool IndexSet::contains(int i) const {
  return std::binary_search(idx.begin(), idx.end(), i);
}

void IndexSet::validate(int n) const {
  for (int i : idx)
    if (i < 1 || i > n)
      throw std::invalid_argument("worker index " + std::to_string(i) +
                                  " out of range [1," + std::to_string(n) +
                                  "]");
}

void check_same_dim(const std::vector<Vec>& xs) {
  if (xs.empty()) throw std::invalid_argument("empty vector list");
  for (const auto& x : xs)
    if (x.size() != xs.front().size())
      throw std::invalid_argument("dimension mismatch within vector list");
}

Vec subset_mean(const std::vector<Vec>& xs, const IndexSet& S) {
  if (S.empty()) throw std::invalid_argument("empty index set");
  check_same_dim(xs);
  S.validate(static_cast<int>(xs.size()));
  Vec m(xs.front().size(), 0.0);
  for (int i : S.idx)
    for (std::size_t k = 0; k < m.size(); ++k) m[k] += xs[i - 1][k];
  for (auto& v : m) v /= static_cast<double>(S.size());
  return m;
}

double subset_variance(const std::vector<Vec>& xs, const IndexSet& S) {
  Vec m = subset_mean(xs, S);
  double s = 0.0;
  for (int i : S.idx) s += sq_dist(xs[i - 1], m);
  return s / static_cast<double>(S.size());
}

Vec coordinate_std(const std::vector<Vec>& xs) {
  check_same_dim(xs);
  std::size_t d = xs.front().size();
  double n = static_cast<double>(xs.size());
  Vec mean(d, 0.0), out(d, 0.0);
  for (const auto& x : xs)
    for (std::size_t k = 0; k < d; ++k) mean[k] += x[k];
  for (auto& v : mean) v /= n;
  for (const auto& x : xs)
    for (std::size_t k = 0; k < d; ++k) {
      double dev = x[k] - mean[k];
      out[k] += dev * dev;
    }
  for (auto& v : out) v = std::sqrt(v / n);
  return out;
}

}  // namespace robagg
