#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "robagg/aggregators.hpp"
#include "robagg/rng.hpp"
#include "support.hpp"

using namespace robagg;
using namespace testsupport;

namespace {

// Sort-and-trim oracle for one coordinate.
double trimmed_mean_oracle(std::vector<double> v, int f) {
  std::sort(v.begin(), v.end());
  double s = 0.0;
  int kept = 0;
  for (int i = f; i < static_cast<int>(v.size()) - f; ++i) {
    s += v[i];
    ++kept;
  }
  return s / kept;
}

double median_oracle(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

// Exhaustive Krum score: for every candidate j sum the n-f smallest squared
// distances (self included), then take the lowest-index minimizer.
Vec krum_oracle(const std::vector<Vec>& xs, int f) {
  int n = static_cast<int>(xs.size());
  std::vector<double> scores(n);
  for (int j = 0; j < n; ++j) {
    std::vector<std::pair<double, int>> ds;
    for (int i = 0; i < n; ++i) ds.emplace_back(sq_dist(xs[j], xs[i]), i);
    std::sort(ds.begin(), ds.end());
    std::vector<int> sel;
    for (int k = 0; k < n - f; ++k) sel.push_back(ds[k].second);
    std::sort(sel.begin(), sel.end());
    double s = 0.0;
    for (int i : sel) s += sq_dist(xs[j], xs[i]);
    scores[j] = s;
  }
  int best = 0;
  for (int j = 1; j < n; ++j)
    if (scores[j] < scores[best]) best = j;
  return xs[best];
}

double gm_objective(const Vec& y, const std::vector<Vec>& xs) {
  double s = 0.0;
  for (const auto& x : xs) s += std::sqrt(sq_dist(y, x));
  return s;
}

}  // namespace

TEST_CASE("aggregate dispatches by name and validates f") {
  AggregatorSpec spec;
  spec.rule = Rule::mean;
  CHECK(aggregate(spec, {{0}, {2}}) == Vec{1});

  spec.rule = Rule::cwmed;
  CHECK(aggregate(spec, {{1}, {2}, {100}}) == Vec{2});

  spec.rule = Rule::krum;
  spec.f = 1;
  CHECK(aggregate(spec, {{0}, {0}, {1}, {10}}) == Vec{0});

  spec.f = 2;  // n = 4, f must stay below n/2
  CHECK_THROWS_WITH_AS(aggregate(spec, {{0}, {0}, {1}, {10}}),
                       "robustness precondition violated",
                       std::invalid_argument);
  CHECK_THROWS_AS(parse_rule("median"), std::invalid_argument);
  CHECK(parse_rule("gm") == Rule::gm);
  CHECK(rule_name(Rule::cwtm) == std::string("cwtm"));
}

TEST_CASE("cwtm drops f tails per coordinate") {
  CHECK(cwtm({{0}, {1}, {2}, {10}}, 1) == Vec{1.5});
  // f=0 is the plain coordinate mean
  CHECK(cwtm({{1, 5}, {3, 7}}, 0) == Vec{2, 6});
  CHECK(cwtm({{0, 10}, {1, 2}, {2, 1}, {10, 0}}, 1) == Vec{1.5, 1.5});
  CHECK_THROWS_AS(cwtm({{0}, {1}}, 1), std::invalid_argument);

  RngStream rng(31, 0);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + static_cast<int>(rng.bounded(8));
    int f = static_cast<int>(rng.bounded(static_cast<std::uint64_t>((n - 1) / 2 + 1)));
    auto xs = gaussian_instance(n, 3, rng);
    auto got = cwtm(xs, f);
    for (int k = 0; k < 3; ++k) {
      std::vector<double> col;
      for (const auto& x : xs) col.push_back(x[k]);
      CHECK(close(got[k], trimmed_mean_oracle(col, f), 1e-12));
    }
  }
}

TEST_CASE("cwmed per-coordinate median with midpoint at even counts") {
  CHECK(cwmed({{1}, {2}, {3}}) == Vec{2});
  CHECK(cwmed({{1}, {2}, {3}, {100}}) == Vec{2.5});
  CHECK(cwmed({{1, 9}, {2, 8}, {3, 7}}) == Vec{2, 8});
  CHECK_THROWS_AS(cwmed({}), std::invalid_argument);

  RngStream rng(32, 0);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 1 + static_cast<int>(rng.bounded(9));
    auto xs = gaussian_instance(n, 2, rng);
    auto got = cwmed(xs);
    for (int k = 0; k < 2; ++k) {
      std::vector<double> col;
      for (const auto& x : xs) col.push_back(x[k]);
      CHECK(got[k] == median_oracle(col));
    }
  }
}

TEST_CASE("krum selects per the exhaustive score oracle") {
  std::vector<Vec> same(4, Vec{3, 3});
  CHECK(krum(same, 1) == Vec{3, 3});
  // scores (1,1,2,181): index 1 wins
  CHECK(krum({{0}, {0}, {1}, {10}}, 1) == Vec{0});
  // scores (25,0,0): index 2 wins over index 3
  CHECK(krum({{5}, {0}, {0}}, 1) == Vec{0});
  CHECK_THROWS_AS(krum({{0}, {1}, {2}, {3}}, 2), std::invalid_argument);

  RngStream rng(33, 0);
  for (int trial = 0; trial < 60; ++trial) {
    int n = 3 + static_cast<int>(rng.bounded(8));
    int f = static_cast<int>(rng.bounded(static_cast<std::uint64_t>((n - 1) / 2 + 1)));
    auto xs = gaussian_instance(n, 3, rng);
    CHECK(krum(xs, f) == krum_oracle(xs, f));
  }
}

TEST_CASE("geometric median fixed points and 1-D agreement") {
  std::vector<Vec> same(5, Vec{4, -1});
  CHECK(max_abs_diff(geometric_median(same), Vec{4, -1}) < 1e-9);

  CHECK(std::fabs(geometric_median({{0}, {0}, {1}})[0]) < 1e-6);

  auto center = geometric_median({{1, 0}, {-1, 0}, {0, 1}, {0, -1}});
  CHECK(max_abs_diff(center, Vec{0, 0}) < 1e-8);

  RngStream rng(34, 0);
  for (int trial = 0; trial < 40; ++trial) {
    int n = 3 + 2 * static_cast<int>(rng.bounded(4));  // odd
    auto xs = gaussian_instance(n, 1, rng);
    std::vector<double> col;
    for (const auto& x : xs) col.push_back(x[0]);
    CHECK(close(geometric_median(xs)[0], median_oracle(col), 1e-6));
  }
  for (int trial = 0; trial < 40; ++trial) {
    int n = 4 + 2 * static_cast<int>(rng.bounded(3));  // even
    auto xs = gaussian_instance(n, 1, rng);
    std::vector<double> col;
    for (const auto& x : xs) col.push_back(x[0]);
    std::sort(col.begin(), col.end());
    double g = geometric_median(xs)[0];
    CHECK(g >= col[n / 2 - 1] - 1e-8);
    CHECK(g <= col[n / 2] + 1e-8);
  }
}

TEST_CASE("geometric median is near-optimal for the distance-sum objective") {
  RngStream rng(35, 0);
  for (int trial = 0; trial < 20; ++trial) {
    int n = 3 + static_cast<int>(rng.bounded(6));
    auto xs = gaussian_instance(n, 3, rng);
    Vec y = geometric_median(xs);
    double obj = gm_objective(y, xs);
    for (const auto& x : xs) CHECK(obj <= gm_objective(x, xs) + 1e-7);
    for (int probe = 0; probe < 20; ++probe) {
      Vec p = y;
      for (auto& v : p) v += 1e-3 * rng.normal();
      CHECK(obj <= gm_objective(p, xs) + 1e-7);
    }
  }
}

TEST_CASE("permutation invariance and translation equivariance") {
  RngStream rng(36, 0);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 4 + static_cast<int>(rng.bounded(5));
    int f = 1 + static_cast<int>(rng.bounded(static_cast<std::uint64_t>((n - 1) / 2)));
    auto xs = gaussian_instance(n, 3, rng);  // ties have measure zero
    auto perm = rng.permutation(n);
    std::vector<Vec> permuted(n);
    for (int i = 0; i < n; ++i) permuted[i] = xs[perm[i]];
    Vec c(3);
    for (auto& v : c) v = rng.normal();
    std::vector<Vec> shifted(n);
    for (int i = 0; i < n; ++i) shifted[i] = add(xs[i], c);

    auto check_rule = [&](auto&& fn) {
      Vec base = fn(xs);
      CHECK(max_abs_diff(fn(permuted), base) < 1e-9);
      CHECK(max_abs_diff(fn(shifted), add(base, c)) < 1e-9);
    };
    check_rule([&](const std::vector<Vec>& v) { return mean(v); });
    check_rule([&](const std::vector<Vec>& v) { return cwmed(v); });
    check_rule([&](const std::vector<Vec>& v) { return cwtm(v, f); });
    check_rule([&](const std::vector<Vec>& v) { return krum(v, f); });
    check_rule([&](const std::vector<Vec>& v) { return geometric_median(v); });
  }
}

TEST_CASE("coordinate-wise rules decompose exactly and stay in range") {
  RngStream rng(37, 0);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 3 + static_cast<int>(rng.bounded(6));
    int f = static_cast<int>(rng.bounded(static_cast<std::uint64_t>((n - 1) / 2 + 1)));
    int d = 4;
    auto xs = gaussian_instance(n, d, rng);
    auto med = cwmed(xs);
    auto trim = cwtm(xs, f);
    for (int k = 0; k < d; ++k) {
      std::vector<Vec> col(n, Vec(1));
      double lo = xs[0][k], hi = xs[0][k];
      for (int i = 0; i < n; ++i) {
        col[i][0] = xs[i][k];
        lo = std::min(lo, xs[i][k]);
        hi = std::max(hi, xs[i][k]);
      }
      CHECK(cwmed(col)[0] == med[k]);
      CHECK(cwtm(col, f)[0] == trim[k]);
      CHECK(med[k] >= lo);
      CHECK(med[k] <= hi);
      CHECK(trim[k] >= lo);
      CHECK(trim[k] <= hi);
    }
  }
}

TEST_CASE("single input degenerate cases") {
  std::vector<Vec> one = {{7, -2}};
  CHECK(mean(one) == one[0]);
  CHECK(cwmed(one) == one[0]);
  CHECK(cwtm(one, 0) == one[0]);
  CHECK(krum(one, 0) == one[0]);
  CHECK(max_abs_diff(geometric_median(one), one[0]) == 0.0);
}
