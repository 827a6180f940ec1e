#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

#include "robagg/aggregators.hpp"

namespace robagg {

// Exit codes shared by the subcommands: 0 success (kappa: PASS), 1 error,
// 2 failed check (train: descent bound violation; kappa: FAIL verdict).

int cmd_aggregate(const std::string& pipeline, const std::string& input_path,
                  int f, int bucket_size, std::uint64_t seed,
                  const GmParams& gm, std::ostream& out, std::ostream& err);

int cmd_kappa(const std::string& rule, int n, int f, int dim,
              std::uint64_t trials, std::uint64_t seed, std::ostream& out,
              std::ostream& err);

int cmd_train(const std::string& config_path, const std::string& out_csv,
              std::ostream& out, std::ostream& err);

}  // namespace robagg
