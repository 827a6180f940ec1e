#include "robagg/aggregators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

#include "robagg/kernels.hpp"

namespace robagg {

Rule parse_rule(const std::string& name) {
  if (name == "mean") return Rule::mean;
  if (name == "cwmed") return Rule::cwmed;
  if (name == "cwtm") return Rule::cwtm;
  if (name == "gm") return Rule::gm;
  if (name == "krum") return Rule::krum;
  throw std::invalid_argument("unknown aggregation rule: " + name);
}

const char* rule_name(Rule r) {
  switch (r) {
    case Rule::mean: return "mean";
    case Rule::cwmed: return "cwmed";
    case Rule::cwtm: return "cwtm";
    case Rule::gm: return "gm";
    case Rule::krum: return "krum";
  }
  throw std::logic_error("unreachable rule");
}

namespace {

void require_inputs(const std::vector<Vec>& xs) {
  if (xs.empty()) throw std::invalid_argument("no input vectors");
  check_same_dim(xs);
}

// cwtm and krum tolerate f Byzantine inputs only while 2f < n.
void require_capacity(const std::vector<Vec>& xs, int f) {
  if (f < 0) throw std::invalid_argument("f must be nonnegative");
  if (2 * f >= static_cast<int>(xs.size()))
    throw std::invalid_argument("robustness precondition violated");
}

}  // namespace

Vec aggregate(const AggregatorSpec& spec, const std::vector<Vec>& xs) {
  require_inputs(xs);
  require_capacity(xs, spec.f);
  switch (spec.rule) {
    case Rule::mean: return mean(xs);
    case Rule::cwmed: return cwmed(xs);
    case Rule::cwtm: return cwtm(xs, spec.f);
    case Rule::gm: return geometric_median(xs, spec.gm);
    case Rule::krum: return krum(xs, spec.f);
  }
  throw std::logic_error("unreachable rule");
}

Vec mean(const std::vector<Vec>& xs) {
  require_inputs(xs);
  Vec out(xs[0].size(), 0.0);
  for (const auto& x : xs) axpy(out, 1.0, x);
  for (auto& v : out) v /= xs.size();
  return out;
}

Vec cwmed(const std::vector<Vec>& xs) {
  require_inputs(xs);
  std::size_t n = xs.size();
  std::size_t d = xs[0].size();
  Vec out(d);
  std::vector<double> col(n);
  for (std::size_t k = 0; k < d; ++k) {
    for (std::size_t i = 0; i < n; ++i) col[i] = xs[i][k];
    std::sort(col.begin(), col.end());
    out[k] = n % 2 ? col[n / 2] : (col[n / 2 - 1] + col[n / 2]) / 2.0;
  }
  return out;
}

Vec cwtm(const std::vector<Vec>& xs, int f) {
  require_inputs(xs);
  require_capacity(xs, f);
  int n = static_cast<int>(xs.size());
  std::size_t d = xs[0].size();
  Vec out(d);
  std::vector<double> col(n);
  for (std::size_t k = 0; k < d; ++k) {
    for (int i = 0; i < n; ++i) col[i] = xs[i][k];
    std::stable_sort(col.begin(), col.end());
    double s = 0.0;
    for (int i = f; i < n - f; ++i) s += col[i];
    out[k] = s / (n - 2 * f);
  }
  return out;
}

Vec krum(const std::vector<Vec>& xs, int f) {
  require_inputs(xs);
  require_capacity(xs, f);
  int n = static_cast<int>(xs.size());
  auto dists = kernels::pairwise_sq_dists(xs);
  double best_score = 0.0;
  int best = -1;
  std::vector<std::pair<double, int>> order(n);
  std::vector<int> selected;
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) order[i] = {dists[j * n + i], i};
    std::sort(order.begin(), order.end());
    selected.clear();
    for (int k = 0; k < n - f; ++k) selected.push_back(order[k].second);
    // fixed summation order keeps scores reproducible
    std::sort(selected.begin(), selected.end());
    double score = 0.0;
    for (int i : selected) score += dists[j * n + i];
    if (best < 0 || score < best_score) {
      best_score = score;
      best = j;
    }
  }
  return xs[best];
}

Vec geometric_median(const std::vector<Vec>& xs, const GmParams& p) {
  require_inputs(xs);
  if (p.smoothing <= 0 || p.tolerance <= 0 || p.max_iters < 1)
    throw std::invalid_argument("invalid geometric median parameters");
  Vec y = mean(xs);
  std::size_t d = y.size();
  Vec next(d);
  for (int iter = 0; iter < p.max_iters; ++iter) {
    std::fill(next.begin(), next.end(), 0.0);
    double wsum = 0.0;
    for (const auto& x : xs) {
      double w = 1.0 / std::max(std::sqrt(sq_dist(y, x)), p.smoothing);
      wsum += w;
      for (std::size_t k = 0; k < d; ++k) next[k] += w * x[k];
    }
    for (auto& v : next) v /= wsum;
    for (double v : next)
      if (!std::isfinite(v))
        throw std::runtime_error("geometric median iteration diverged");
    double step = std::sqrt(sq_dist(next, y));
    y.swap(next);
    if (step < p.tolerance) break;
  }
  return y;
}

}  // namespace robagg
