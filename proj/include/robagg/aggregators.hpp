#pragma once

#include <string>
#include <vector>

#include "robagg/vec.hpp"

namespace robagg {

enum class Rule { mean, cwmed, cwtm, gm, krum };

Rule parse_rule(const std::string& name);
const char* rule_name(Rule r);

struct GmParams {
  double smoothing = 1e-8;
  double tolerance = 1e-10;
  int max_iters = 1000;
};

struct AggregatorSpec {
  Rule rule = Rule::mean;
  int f = 0;
  GmParams gm;
};

// Dispatches on spec.rule after checking 0 <= f < n/2 against the input count.
Vec aggregate(const AggregatorSpec& spec, const std::vector<Vec>& xs);

Vec mean(const std::vector<Vec>& xs);
// Coordinate-wise median; even counts take the midpoint of the two middles.
Vec cwmed(const std::vector<Vec>& xs);
// Coordinate-wise trimmed mean: drop the f smallest and f largest per
// coordinate, average the remaining n-2f.
Vec cwtm(const std::vector<Vec>& xs, int f);
// Returns the input minimizing the sum of squared distances to its n-f
// closest inputs (itself included). All ties break toward the lower index.
Vec krum(const std::vector<Vec>& xs, int f);
// Smoothed Weiszfeld iteration from the coordinate-wise mean:
// w_i = 1 / max(||y - x_i||, smoothing), stop when the iterate moves less
// than tolerance or after max_iters rounds.
Vec geometric_median(const std::vector<Vec>& xs, const GmParams& p = {});

}  // namespace robagg
