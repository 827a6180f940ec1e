#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "robagg/aggregators.hpp"
#include "robagg/cli.hpp"
#include "robagg/config.hpp"

int main(int argc, char** argv) {
  CLI::App app{
      "robagg: robust-aggregation toolkit. Certifies aggregation rules "
      "empirically and runs byzantine-resilient training experiments."};
  app.require_subcommand(1);

  std::string agg_pipeline;
  std::string agg_input;
  int agg_f = 0;
  int agg_bucket = 0;
  std::uint64_t agg_seed = 0;
  robagg::GmParams agg_gm;
  auto* agg = app.add_subcommand(
      "aggregate", "run a vector file through an aggregation pipeline");
  agg->add_option("pipeline", agg_pipeline,
                  "rule or pre+rule: mean, cwmed, cwtm, gm, krum, nnm+krum, "
                  "bucketing+gm, ...")
      ->required();
  agg->add_option("input", agg_input, "text file, one vector per line")
      ->required();
  agg->add_option("--f", agg_f, "declared fault budget")->capture_default_str();
  agg->add_option("--bucket-size", agg_bucket,
                  "bucketing group size, 0 = floor(n/2f)")
      ->capture_default_str();
  agg->add_option("--seed", agg_seed, "rng seed for bucketing permutations")
      ->capture_default_str();
  agg->add_option("--gm-smoothing", agg_gm.smoothing,
                  "geometric median smoothing")
      ->capture_default_str();
  agg->add_option("--gm-tolerance", agg_gm.tolerance,
                  "geometric median stop tolerance")
      ->capture_default_str();
  agg->add_option("--gm-max-iters", agg_gm.max_iters,
                  "geometric median iteration cap")
      ->capture_default_str();

  std::string kap_rule;
  int kap_n = 5;
  int kap_f = 1;
  int kap_dim = 3;
  std::uint64_t kap_trials = 100;
  std::uint64_t kap_seed = 0;
  auto* kap = app.add_subcommand(
      "kappa",
      "certify a rule's robustness coefficient on random and adversarial "
      "instances (exit 0 PASS, 2 FAIL)");
  kap->add_option("rule", kap_rule, "mean, cwmed, cwtm, gm, krum")->required();
  kap->add_option("--n", kap_n, "worker count")->capture_default_str();
  kap->add_option("--f", kap_f, "fault budget")->capture_default_str();
  kap->add_option("--dim", kap_dim, "vector dimension for random instances")
      ->capture_default_str();
  kap->add_option("--trials", kap_trials, "random instances (0 = only the "
                  "deterministic ones)")
      ->capture_default_str();
  kap->add_option("--seed", kap_seed, "rng seed")->capture_default_str();

  std::string train_config;
  std::string train_out = "trace.csv";
  auto* tr = app.add_subcommand(
      "train",
      "run a training experiment from a JSON config (exit 0 ok, 2 on a "
      "violated deterministic bound)");
  tr->add_option("config", train_config, "path to the JSON config")->required();
  tr->add_option("--out", train_out, "metrics csv path, '-' for stdout")
      ->capture_default_str();
  tr->footer(robagg::config_schema_help());

  CLI11_PARSE(app, argc, argv);

  if (agg->parsed())
    return robagg::cmd_aggregate(agg_pipeline, agg_input, agg_f, agg_bucket,
                                 agg_seed, agg_gm, std::cout, std::cerr);
  if (kap->parsed())
    return robagg::cmd_kappa(kap_rule, kap_n, kap_f, kap_dim, kap_trials,
                             kap_seed, std::cout, std::cerr);
  if (tr->parsed())
    return robagg::cmd_train(train_config, train_out, std::cout, std::cerr);
  return 0;
}
