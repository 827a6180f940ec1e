#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "robagg/aggregators.hpp"
#include "robagg/preagg.hpp"
#include "robagg/tasks.hpp"
#include "robagg/vec.hpp"

namespace robagg {

using AggFn = std::function<Vec(const std::vector<Vec>&)>;

struct KappaEstimate {
  double kappa_hat = 0.0;    // +inf when a degenerate subset carries signal
  IndexSet argmax_subset;    // empty when every subset was skipped
  std::uint64_t trials = 0;      // subsets enumerated
  std::uint64_t degenerate = 0;  // subsets with variance below tolerance
};

// Certifies agg on one instance: max over all C(n,f) subsets S of size n-f
// of ||agg(xs) - mean_S||^2 / variance_S. Subsets with variance below
// zero_var_tol are degenerate: +inf if the numerator still exceeds the
// tolerance, skipped otherwise. Refuses to enumerate more than 10^6 subsets.
KappaEstimate estimate_kappa(const AggFn& agg, const std::vector<Vec>& xs,
                             int f, double zero_var_tol = 1e-12);

// Worst-case robustness coefficient of a rule. mean has none and throws.
double theoretical_kappa(Rule rule, int n, int f);
// Coefficient after nearest-neighbor mixing: (8f/(n-f)) * (kappa + 1).
double nnm_boosted_kappa(double base_kappa, int n, int f);
// No rule can do better than f/(n-2f).
double universal_kappa_floor(int n, int f);
// Floor specific to rules that output one of their inputs (or a coordinate
// median): 1 when n-f is even, else 1 - 2/(n-f+1).
double gar_ratio(int n, int f);
// (f, lambda)-resilient averaging constant lambda = sqrt(kappa/2).
double lambda_from_kappa(double kappa);
// Agnostic robust aggregation constant c = kappa * n / (2f).
double aragg_c(double kappa, int n, int f);

enum class LowerBoundKind { universal, gar };

// Scalar adversarial instances (d = 1) with the first n-f entries honest.
// universal: n-f zeros then f ones. gar: floor((n-f)/2) entries at -1, the
// remaining honest at +1, and f attacker copies of +1.
std::vector<Vec> lower_bound_instance(LowerBoundKind kind, int n, int f);

// Certified coefficient of a composed pipeline: theoretical_kappa for a bare
// rule, nnm_boosted_kappa on top for nnm. Bucketing and mean carry no
// worst-case constant and throw.
double pipeline_kappa(const PreAggSpec& pre, Rule rule, int n, int f);

struct HeterogeneityDemo {
  double eps_observed = 0.0;
  double eps_floor = 0.0;
  Vec z;
  Vec theta_hat;
};

// Two indistinguishable worker populations force a gradient-norm floor of
// (1/4) (f/(n-2f)) G^2 on any algorithm: workers 1..n-f hold 0.5*||theta||^2
// and the rest 0.5*||theta - z||^2 with ||z||^2 = (n-f)^2 G^2 / (f(n-2f)).
// algorithm maps the task to its model estimate; the demo evaluates the
// worse of the two candidate honest sets at that estimate.
HeterogeneityDemo heterogeneity_lower_bound_demo(
    int n, int f, double G,
    const std::function<Vec(const QuadraticTask&, int, int)>& algorithm);

}  // namespace robagg
