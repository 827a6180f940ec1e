#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "robagg/cli.hpp"
#include "robagg/config.hpp"
#include "robagg/preagg.hpp"
#include "robagg/text.hpp"
#include "robagg/training.hpp"
#include "support.hpp"

using namespace robagg;
using namespace testsupport;

namespace {

struct TempPath {
  std::filesystem::path path;
  explicit TempPath(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {}
  ~TempPath() {
    std::error_code ec;
    std::filesystem::remove(path, ec);
  }
  void write(const std::string& text) const {
    std::ofstream out(path, std::ios::binary);
    out << text;
  }
  std::string read() const {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
};

std::string run_aggregate(const std::string& pipeline, const std::string& file,
                          int f, int* rc_out = nullptr) {
  std::ostringstream out, err;
  int rc = cmd_aggregate(pipeline, file, f, 0, 0, {}, out, err);
  if (rc_out) *rc_out = rc;
  return rc == 0 ? out.str() : err.str();
}

}  // namespace

TEST_CASE("config parsing fills defaults and maps every field") {
  auto pc = parse_config_text(R"({
    "n": 15, "f": 3, "T": 25, "seed": 7,
    "pipeline": "nnm+cwtm",
    "algorithm": "dshb",
    "attack": "foe*",
    "attack_grid": [0.0, 4.0, 9],
    "honest_set": [1, 2, 3, 4, 5, 6, 7, 8, 10, 11, 12, 13],
    "gamma": 0.5, "beta": 0.25,
    "batch_size": 3, "clip_norm": 2.0, "sigma": 0.75,
    "bucket_size": 2,
    "gm": {"smoothing": 1e-14, "tolerance": 1e-13, "max_iters": 5000},
    "task": {"kind": "quadratic", "dim": 4}
  })");
  CHECK(pc.command == "train");
  CHECK(pc.run.n == 15);
  CHECK(pc.run.f == 3);
  CHECK(pc.run.T == 25);
  CHECK(pc.run.seed == 7);
  CHECK(pc.run.pipeline == "nnm+cwtm");
  CHECK(pc.run.algo == Algo::dshb);
  CHECK(pc.run.attack.kind == AttackKind::foe);
  CHECK(pc.run.attack.optimize);
  CHECK(pc.run.attack.grid.lo == 0.0);
  CHECK(pc.run.attack.grid.hi == 4.0);
  CHECK(pc.run.attack.grid.points == 9);
  CHECK(pc.run.honest.idx.size() == 12);
  CHECK(pc.run.gamma == 0.5);
  CHECK(pc.run.beta == 0.25);
  CHECK(pc.run.batch == 3);
  CHECK(pc.run.clip == 2.0);
  CHECK(pc.run.sigma == 0.75);
  CHECK(pc.run.bucket_size == 2);
  CHECK(pc.run.gm.smoothing == 1e-14);
  CHECK(pc.run.gm.max_iters == 5000);
  CHECK(pc.task.kind == "quadratic");
  CHECK(pc.task.quadratic.dim == 4);

  auto minimal = parse_config_text(
      R"({"n": 3, "task": {"kind": "quadratic", "dim": 1}})");
  CHECK(minimal.command == "train");
  CHECK(minimal.run.f == 0);
  CHECK(minimal.run.T == 1);
  CHECK(minimal.run.pipeline == "mean");
  CHECK(minimal.run.algo == Algo::dgd);
  CHECK(minimal.run.attack.kind == AttackKind::none);
  CHECK_FALSE(minimal.run.gamma.has_value());
  CHECK_FALSE(minimal.run.beta.has_value());

  auto fixed = parse_config_text(R"({
    "n": 5, "f": 1, "attack": "alie", "attack_eta": 1.5, "mimic_warmup": 3,
    "task": {"kind": "quadratic"}
  })");
  CHECK(fixed.run.attack.kind == AttackKind::alie);
  CHECK_FALSE(fixed.run.attack.optimize);
  CHECK(fixed.run.attack.eta == 1.5);
  CHECK(fixed.run.attack.mimic_warmup == 3);
}

TEST_CASE("config parsing rejects unknown keys with their pointer") {
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"n": 3, "tsk": {}})"),
      doctest::Contains("/tsk"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text(
          R"({"n": 3, "task": {"kind": "quadratic", "dims": 2}})"),
      doctest::Contains("/task/dims"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text(
          R"({"n": 3, "gm": {"smooth": 1e-8}, "task": {"kind": "quadratic"}})"),
      doctest::Contains("/gm/smooth"), std::invalid_argument);
  // type errors carry the pointer too
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"n": "three", "task": {"kind": "quadratic"}})"),
      doctest::Contains("/n"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text(
          R"({"n": 3, "attack_grid": [0.0, 1.0], "task": {"kind": "quadratic"}})"),
      doctest::Contains("/attack_grid"), std::invalid_argument);
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"n": 3, "command": "fly",
                            "task": {"kind": "quadratic"}})"),
      doctest::Contains("/command"), std::invalid_argument);
  CHECK_THROWS_AS(parse_config_text("{ not json"), std::runtime_error);
  // n is the one field with no usable default
  CHECK_THROWS_WITH_AS(
      parse_config_text(R"({"task": {"kind": "quadratic"}})"),
      doctest::Contains("/n"), std::invalid_argument);
}

TEST_CASE("task building honors explicit centers and stays reproducible") {
  TaskSpec spec;
  spec.kind = "quadratic";
  spec.quadratic.centers = {{1, 0}, {0, 1}, {2, 2}};
  RunConfig run;
  run.n = 3;
  run.T = 1;
  auto built = build_task(spec, run);
  CHECK(built.task->workers() == 3);
  CHECK(built.task->dim() == 2);
  CHECK(built.theta0 == Vec{0, 0});
  CHECK(built.task->gradient(2, {0, 0}) == Vec{-2, -2});

  spec.quadratic.centers = {{1}, {0}};  // two rows for three workers
  CHECK_THROWS_WITH_AS(build_task(spec, run), doctest::Contains("centers"),
                       std::invalid_argument);

  TaskSpec rnd;
  rnd.kind = "quadratic";
  rnd.quadratic.dim = 3;
  rnd.quadratic.center_scale = 2.0;
  run.seed = 42;
  auto a = build_task(rnd, run);
  auto b = build_task(rnd, run);
  Vec probe{0.3, -0.7, 1.1};
  CHECK(a.task->gradient(1, probe) == b.task->gradient(1, probe));
  run.seed = 43;
  auto c = build_task(rnd, run);
  CHECK(a.task->gradient(1, probe) != c.task->gradient(1, probe));

  TaskSpec bad;
  bad.kind = "quadratic";
  bad.theta0 = {1.0};  // task dim will be 3
  bad.quadratic.dim = 3;
  CHECK_THROWS_WITH_AS(build_task(bad, run), doctest::Contains("theta0"),
                       std::invalid_argument);
}

TEST_CASE("task building covers synthetic logistic shards") {
  TaskSpec spec;
  spec.kind = "logistic";
  spec.logistic.synthetic = LogisticSpecSynthetic{20, 3, 3, 4.0};
  spec.logistic.dirichlet_alpha = 50.0;
  spec.logistic.l2_reg = 1e-3;
  RunConfig run;
  run.n = 4;
  run.seed = 5;
  auto built = build_task(spec, run);
  CHECK(built.task->workers() == 4);
  CHECK(built.task->dim() == 9);  // classes x features
  CHECK((int)built.theta0.size() == 9);
  CHECK_FALSE(built.task->exact_constants());

  spec.kind = "mystery";
  CHECK_THROWS_WITH_AS(build_task(spec, run), doctest::Contains("kind"),
                       std::invalid_argument);
}

TEST_CASE("aggregate command prints the pipeline output") {
  TempPath in("robagg_cli_vecs.txt");
  in.write("0\n2\n");
  int rc = -1;
  CHECK(run_aggregate("mean", in.path.string(), 0, &rc) == "1\n");
  CHECK(rc == 0);

  in.write("1 10\n3 20\n5 60\n");
  CHECK(run_aggregate("cwtm", in.path.string(), 0) == "3 30\n");

  // stateful pipeline agrees with a direct library call
  in.write("0\n0\n1\n10\n");
  auto xs = load_vectors_file(in.path.string());
  auto pipe = parse_pipeline("nnm+krum", 1);
  std::string expect = fmt_vector(pipe(xs)) + "\n";
  CHECK(run_aggregate("nnm+krum", in.path.string(), 1) == expect);

  in.write("1 2\n3\n");
  std::string msg = run_aggregate("mean", in.path.string(), 0, &rc);
  CHECK(rc == 1);
  CHECK(msg.find("line 2") != std::string::npos);

  CHECK(run_aggregate("mean", "/nonexistent/vectors.txt", 0, &rc) != "");
  CHECK(rc == 1);
}

TEST_CASE("kappa command certifies rules and flags the mean") {
  std::ostringstream out, err;
  int rc = cmd_kappa("cwmed", 5, 2, 2, 10, 99, out, err);
  CHECK(rc == 0);
  std::string text = out.str();
  CHECK(text.find("verdict=PASS") != std::string::npos);
  CHECK(text.find("theoretical") != std::string::npos);
  CHECK(text.find("36") != std::string::npos);   // 4*(1+2)^2
  CHECK(text.find("floor") != std::string::npos);
  CHECK(text.find("2") != std::string::npos);    // f/(n-2f)

  std::ostringstream out2, err2;
  rc = cmd_kappa("mean", 5, 1, 1, 5, 99, out2, err2);
  CHECK(rc == 2);
  CHECK(out2.str().find("verdict=FAIL") != std::string::npos);
  CHECK(out2.str().find("inf") != std::string::npos);

  std::ostringstream out3, err3;
  rc = cmd_kappa("cwmed", 30, 10, 1, 0, 1, out3, err3);
  CHECK(rc == 1);  // subset enumeration guard
  CHECK(err3.str().find("subsets") != std::string::npos);

  std::ostringstream out4, err4;
  rc = cmd_kappa("sum", 5, 1, 1, 0, 1, out4, err4);
  CHECK(rc == 1);

  // trials=0 still runs the deterministic instances
  std::ostringstream out5, err5;
  rc = cmd_kappa("krum", 5, 2, 3, 0, 1, out5, err5);
  CHECK(rc == 0);
  CHECK(out5.str().find("random instances: skipped") != std::string::npos);
}

TEST_CASE("train command writes the trace and reports the bound") {
  TempPath cfg("robagg_cli_train.json");
  TempPath csv("robagg_cli_trace.csv");
  cfg.write(R"({
    "command": "train", "n": 4, "f": 0, "T": 4, "seed": 9,
    "pipeline": "mean",
    "task": {"kind": "quadratic",
             "centers": [[1, 0], [0, 1], [1, 1], [0, 0]]}
  })");
  std::ostringstream out, err;
  int rc = cmd_train(cfg.path.string(), csv.path.string(), out, err);
  CHECK(rc == 0);
  std::string trace = csv.read();
  CHECK(trace.rfind("step,loss,grad_norm,agg_norm,kappa_hat,eta_star\n", 0) == 0);
  CHECK(std::count(trace.begin(), trace.end(), '\n') == 5);
  // faithful mean, no attack: the diagnostic stays at zero
  std::istringstream lines(trace);
  std::string line;
  std::getline(lines, line);  // header
  while (std::getline(lines, line)) {
    auto last_comma = line.find_last_of(',');
    auto prev_comma = line.find_last_of(',', last_comma - 1);
    CHECK(line.substr(prev_comma + 1, last_comma - prev_comma - 1) == "0");
  }

  std::ostringstream out_b, err_b;
  TempPath csv_b("robagg_cli_trace_b.csv");
  CHECK(cmd_train(cfg.path.string(), csv_b.path.string(), out_b, err_b) == 0);
  CHECK(csv_b.read() == trace);  // byte-identical reruns

  TempPath cfg2("robagg_cli_train2.json");
  cfg2.write(R"({
    "command": "train", "n": 15, "f": 3, "T": 25, "seed": 3,
    "pipeline": "nnm+cwtm", "attack": "sf", "algorithm": "dgd",
    "gamma": 1.0,
    "task": {"kind": "quadratic", "dim": 4, "center_scale": 1.0}
  })");
  std::ostringstream out2, err2;
  TempPath csv2("robagg_cli_trace2.csv");
  rc = cmd_train(cfg2.path.string(), csv2.path.string(), out2, err2);
  CHECK(rc == 0);
  CHECK(out2.str().find("lhs=") != std::string::npos);
  CHECK(out2.str().find("rhs=") != std::string::npos);

  TempPath bad("robagg_cli_bad.json");
  bad.write(R"({"n": 3, "tsk": {}})");
  std::ostringstream out3, err3;
  rc = cmd_train(bad.path.string(), csv.path.string(), out3, err3);
  CHECK(rc == 1);
  CHECK(err3.str().find("/tsk") != std::string::npos);
}

TEST_CASE("example configs parse, run, and rerun identically") {
  namespace fs = std::filesystem;
  fs::path dir(ROBAGG_CONFIG_DIR);
  REQUIRE(fs::exists(dir));
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.path().extension() != ".json") continue;
    ++seen;
    INFO("config ", entry.path().string());
    auto pc = load_config_file(entry.path().string());
    pc.run.validate();
    auto built = build_task(pc.task, pc.run);
    auto run_once = [&] {
      return pc.run.algo == Algo::dgd
                 ? run_dgd(pc.run, *built.task, built.theta0)
                 : run_dshb(pc.run, *built.task, built.theta0);
    };
    auto res = run_once();
    CHECK((long)res.trace.size() == pc.run.T);
    CHECK(trace_to_csv(res.trace) == trace_to_csv(run_once().trace));
  }
  CHECK(seen >= 3);
}

TEST_CASE("schema help names every top-level key") {
  std::string help = config_schema_help();
  for (const char* key :
       {"command", "n", "f", "honest_set", "algorithm", "pipeline",
        "bucket_size", "gm", "attack", "attack_eta", "attack_grid",
        "mimic_warmup", "T", "gamma", "beta", "batch_size", "clip_norm",
        "sigma", "seed", "task", "dirichlet_alpha"}) {
    INFO("key ", key);
    CHECK(help.find(key) != std::string::npos);
  }
}
