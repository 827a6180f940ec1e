#include "robagg/robustness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "robagg/kernels.hpp"

namespace robagg {

namespace {

constexpr std::uint64_t kMaxSubsets = 1000000;

void require_budget(int n, int f) {
  if (f < 0) throw std::invalid_argument("f must be nonnegative");
  if (n <= 2 * f) throw std::invalid_argument("robustness precondition violated");
}

}  // namespace

KappaEstimate estimate_kappa(const AggFn& agg, const std::vector<Vec>& xs,
                             int f, double zero_var_tol) {
  int n = static_cast<int>(xs.size());
  require_budget(n, f);
  std::uint64_t subsets = kernels::combination_count(n, f);
  if (subsets > kMaxSubsets)
    throw std::invalid_argument(
        "subset enumeration needs " + std::to_string(subsets) +
        " subsets, limit is " + std::to_string(kMaxSubsets));

  Vec out = agg(xs);
  auto scan = kernels::kappa_subset_scan(xs, out, f, zero_var_tol);

  KappaEstimate est;
  est.trials = scan.evaluated;
  est.degenerate = scan.degenerate;
  if (!scan.best.valid) {
    est.kappa_hat = 0.0;
    return est;
  }
  est.kappa_hat = scan.best.value;
  std::vector<int> dropped;
  kernels::unrank_combination(scan.best.rank, n, f, dropped);
  std::vector<int> kept;
  std::size_t pos = 0;
  for (int i = 0; i < n; ++i) {
    if (pos < dropped.size() && dropped[pos] == i) {
      ++pos;
      continue;
    }
    kept.push_back(i + 1);
  }
  est.argmax_subset = IndexSet(std::move(kept));
  return est;
}

double theoretical_kappa(Rule rule, int n, int f) {
  require_budget(n, f);
  double r = static_cast<double>(f) / (n - 2 * f);
  switch (rule) {
    case Rule::cwtm: return 6.0 * r * (1.0 + r);
    case Rule::krum: return 6.0 * (1.0 + r);
    case Rule::gm:
    case Rule::cwmed: return 4.0 * (1.0 + r) * (1.0 + r);
    case Rule::mean:
      throw std::invalid_argument("no robustness guarantee");
  }
  throw std::logic_error("unreachable rule");
}

double nnm_boosted_kappa(double base_kappa, int n, int f) {
  require_budget(n, f);
  if (base_kappa < 0) throw std::invalid_argument("kappa must be nonnegative");
  return (8.0 * f / (n - f)) * (base_kappa + 1.0);
}

double universal_kappa_floor(int n, int f) {
  require_budget(n, f);
  return static_cast<double>(f) / (n - 2 * f);
}

double gar_ratio(int n, int f) {
  require_budget(n, f);
  if (f < 1) throw std::invalid_argument("gar ratio needs f >= 1");
  int h = n - f;
  if (h % 2 == 0) return 1.0;
  return static_cast<double>(h - 1) / (h + 1);
}

double lambda_from_kappa(double kappa) {
  if (kappa < 0) throw std::invalid_argument("kappa must be nonnegative");
  return std::sqrt(kappa / 2.0);
}

double aragg_c(double kappa, int n, int f) {
  if (kappa < 0) throw std::invalid_argument("kappa must be nonnegative");
  if (f < 1) throw std::invalid_argument("aragg constant needs f >= 1");
  require_budget(n, f);
  return kappa * n / (2.0 * f);
}

std::vector<Vec> lower_bound_instance(LowerBoundKind kind, int n, int f) {
  require_budget(n, f);
  std::vector<Vec> xs(n, Vec{0.0});
  if (kind == LowerBoundKind::universal) {
    for (int i = n - f; i < n; ++i) xs[i][0] = 1.0;
    return xs;
  }
  if (f < 1) throw std::invalid_argument("gar instance needs f >= 1");
  int negatives = (n - f) / 2;
  for (int i = 0; i < n; ++i) xs[i][0] = i < negatives ? -1.0 : 1.0;
  return xs;
}

double pipeline_kappa(const PreAggSpec& pre, Rule rule, int n, int f) {
  switch (pre.kind) {
    case PreAggKind::none:
      return theoretical_kappa(rule, n, f);
    case PreAggKind::nnm:
      return nnm_boosted_kappa(theoretical_kappa(rule, n, f), n, f);
    case PreAggKind::bucketing:
      throw std::invalid_argument("no worst-case coefficient for bucketing");
  }
  throw std::logic_error("unreachable pre-aggregation kind");
}

HeterogeneityDemo heterogeneity_lower_bound_demo(
    int n, int f, double G,
    const std::function<Vec(const QuadraticTask&, int, int)>& algorithm) {
  require_budget(n, f);
  if (f < 1) throw std::invalid_argument("demo needs f >= 1");
  if (!(G > 0)) throw std::invalid_argument("G must be positive");

  HeterogeneityDemo demo;
  double z_norm =
      std::sqrt(static_cast<double>(n - f) * (n - f) * G * G /
                (static_cast<double>(f) * (n - 2 * f)));
  demo.z = Vec{z_norm};

  // two candidate honest populations share the first n-2f workers; the
  // algorithm cannot tell which tail of f workers is lying
  std::vector<Vec> centers(n, Vec{0.0});
  for (int i = n - f; i < n; ++i) centers[i] = demo.z;
  QuadraticTask task(centers);

  demo.theta_hat = algorithm(task, n, f);
  IndexSet H1 = IndexSet::range(1, n - f);
  IndexSet H2 = IndexSet::range(f + 1, n);
  double e1 = sq_norm(task.honest_gradient(H1, demo.theta_hat));
  double e2 = sq_norm(task.honest_gradient(H2, demo.theta_hat));
  demo.eps_observed = std::max(e1, e2);
  demo.eps_floor = 0.25 * (static_cast<double>(f) / (n - 2 * f)) * G * G;
  if (demo.eps_observed < demo.eps_floor - 1e-9)
    throw std::logic_error("lower bound violated; construction is broken");
  return demo;
}

}  // namespace robagg
