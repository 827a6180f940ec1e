#include "robagg/preagg.hpp"

#include <stdexcept>

#include "robagg/kernels.hpp"

namespace robagg {

PreAggKind parse_preagg(const std::string& name) {
  if (name == "none") return PreAggKind::none;
  if (name == "nnm") return PreAggKind::nnm;
  if (name == "bucketing") return PreAggKind::bucketing;
  throw std::invalid_argument("unknown pre-aggregation: " + name);
}

const char* preagg_name(PreAggKind k) {
  switch (k) {
    case PreAggKind::none: return "none";
    case PreAggKind::nnm: return "nnm";
    case PreAggKind::bucketing: return "bucketing";
  }
  throw std::logic_error("unreachable pre-aggregation kind");
}

std::vector<Vec> nnm(const std::vector<Vec>& xs, int f) {
  if (xs.empty()) throw std::invalid_argument("no input vectors");
  check_same_dim(xs);
  int n = static_cast<int>(xs.size());
  if (f < 0 || 2 * f >= n)
    throw std::invalid_argument("robustness precondition violated");
  auto dists = kernels::pairwise_sq_dists(xs);
  return kernels::nearest_mean_mix(xs, f, dists);
}

std::vector<Vec> bucketing(const std::vector<Vec>& xs, int s,
                           const std::vector<int>& perm) {
  if (xs.empty()) throw std::invalid_argument("no input vectors");
  check_same_dim(xs);
  int n = static_cast<int>(xs.size());
  if (s < 1 || s > n) throw std::invalid_argument("bucket size out of range");
  if (static_cast<int>(perm.size()) != n)
    throw std::invalid_argument("permutation length mismatch");
  std::vector<char> seen(n, 0);
  for (int p : perm) {
    if (p < 0 || p >= n || seen[p])
      throw std::invalid_argument("not a permutation");
    seen[p] = 1;
  }
  int count = (n + s - 1) / s;
  std::vector<Vec> out(count);
  std::size_t d = xs[0].size();
  for (int b = 0; b < count; ++b) {
    int lo = b * s;
    int hi = std::min(n, lo + s);
    Vec y(d, 0.0);
    for (int k = lo; k < hi; ++k) axpy(y, 1.0, xs[perm[k]]);
    for (auto& v : y) v /= (hi - lo);
    out[b] = std::move(y);
  }
  return out;
}

std::vector<Vec> bucketing(const std::vector<Vec>& xs, int s, RngStream& rng) {
  auto perm = rng.permutation(static_cast<int>(xs.size()));
  return bucketing(xs, s, perm);
}

Vec Pipeline::operator()(const std::vector<Vec>& xs) const {
  switch (pre.kind) {
    case PreAggKind::none:
      return aggregate(base, xs);
    case PreAggKind::nnm:
      return aggregate(base, nnm(xs, pre.f));
    case PreAggKind::bucketing: {
      int n = static_cast<int>(xs.size());
      int s = pre.s;
      if (s <= 0) s = pre.f > 0 ? std::max(1, n / (2 * pre.f)) : 1;
      int reduced = (n + s - 1) / s;
      if (2 * base.f >= reduced)
        throw std::invalid_argument("bucket size too large for f");
      if (!rng)
        throw std::invalid_argument("bucketing pipeline needs an rng stream");
      return aggregate(base, bucketing(xs, s, *rng));
    }
  }
  throw std::logic_error("unreachable pre-aggregation kind");
}

std::string Pipeline::name() const {
  if (pre.kind == PreAggKind::none) return rule_name(base.rule);
  return std::string(preagg_name(pre.kind)) + "+" + rule_name(base.rule);
}

Pipeline parse_pipeline(const std::string& text, int f, int bucket_size,
                        const GmParams& gm) {
  if (f < 0) throw std::invalid_argument("f must be nonnegative");
  Pipeline p;
  p.base.f = f;
  p.base.gm = gm;
  auto plus = text.find('+');
  if (plus == std::string::npos) {
    p.base.rule = parse_rule(text);
    return p;
  }
  p.pre.kind = parse_preagg(text.substr(0, plus));
  p.pre.f = f;
  p.pre.s = bucket_size;
  p.base.rule = parse_rule(text.substr(plus + 1));
  return p;
}

}  // namespace robagg
