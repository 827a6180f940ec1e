#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "robagg/tasks.hpp"
#include "robagg/training.hpp"

namespace robagg {

struct QuadraticSpec {
  int dim = 1;
  std::vector<Vec> centers;    // explicit; empty -> random
  double center_scale = 1.0;   // stddev of random centers
};

struct LogisticSpecSynthetic {
  int per_class = 50;
  int dim = 8;
  int num_classes = 4;
  double separation = 3.0;
};

struct LogisticSpec {
  double l2_reg = 1e-4;
  double dirichlet_alpha = 1.0;
  std::string idx_images;  // both set -> load IDX pair
  std::string idx_labels;
  std::optional<LogisticSpecSynthetic> synthetic;
};

struct TaskSpec {
  std::string kind = "quadratic";
  QuadraticSpec quadratic;
  LogisticSpec logistic;
  Vec theta0;  // empty -> zeros
};

struct ParsedConfig {
  std::string command = "train";
  RunConfig run;
  TaskSpec task;
};

// Strict JSON config: top-level keys are exactly the run fields plus
// "command"; anything unknown is rejected with its JSON pointer.
ParsedConfig parse_config_text(const std::string& json_text);
ParsedConfig load_config_file(const std::string& path);

struct BuiltTask {
  std::unique_ptr<Task> task;
  Vec theta0;
};

// Materializes the task (drawing any random pieces from the run seed's
// dedicated streams) and the initial model.
BuiltTask build_task(const TaskSpec& spec, const RunConfig& run);

// The documented schema, printed by --help.
std::string config_schema_help();

}  // namespace robagg
