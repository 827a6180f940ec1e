#pragma once

#include <string>
#include <vector>

#include "robagg/aggregators.hpp"
#include "robagg/rng.hpp"
#include "robagg/vec.hpp"

namespace robagg {

enum class PreAggKind { none, nnm, bucketing };

PreAggKind parse_preagg(const std::string& name);
const char* preagg_name(PreAggKind k);

struct PreAggSpec {
  PreAggKind kind = PreAggKind::none;
  int f = 0;  // nnm
  int s = 1;  // bucketing
};

// Nearest-neighbor mixing: replaces each input by the mean of its n-f
// nearest inputs (itself included, ties toward the lower index). Output
// count equals input count.
std::vector<Vec> nnm(const std::vector<Vec>& xs, int f);

// Bucketing with an explicit permutation of 0..n-1: consecutive groups of s
// (the last bucket may be smaller) are averaged, yielding ceil(n/s) vectors.
std::vector<Vec> bucketing(const std::vector<Vec>& xs, int s,
                           const std::vector<int>& perm);
// Same, drawing the permutation from rng.
std::vector<Vec> bucketing(const std::vector<Vec>& xs, int s, RngStream& rng);

// A pre-aggregation step composed with a base rule. Written "nnm+krum",
// "bucketing+gm", or just "cwtm". Bucketing needs rng for its permutation.
struct Pipeline {
  PreAggSpec pre;
  AggregatorSpec base;
  RngStream* rng = nullptr;

  Vec operator()(const std::vector<Vec>& xs) const;
  std::string name() const;
};

// Parses "<pre>+<base>" or "<base>"; f seeds both the pre-step and the base
// rule. bucket_size <= 0 picks the largest admissible size floor(n/2f) at
// call time (s = 1 when f = 0).
Pipeline parse_pipeline(const std::string& text, int f, int bucket_size = 0,
                        const GmParams& gm = {});

}  // namespace robagg
