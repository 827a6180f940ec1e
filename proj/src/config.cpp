#include "robagg/config.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "robagg/attacks.hpp"

namespace robagg {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& ptr, const std::string& msg) {
  throw std::invalid_argument("config error at " + ptr + ": " + msg);
}

void expect_keys(const json& obj, const std::string& ptr,
                 std::initializer_list<const char*> allowed) {
  for (const auto& item : obj.items()) {
    bool known = false;
    for (const char* k : allowed)
      if (item.key() == k) {
        known = true;
        break;
      }
    if (!known) bad(ptr + "/" + item.key(), "unknown key");
  }
}

const json* find(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double as_double(const json& v, const std::string& ptr) {
  if (!v.is_number()) bad(ptr, "expected a number");
  return v.get<double>();
}

long as_long(const json& v, const std::string& ptr) {
  if (!v.is_number_integer()) bad(ptr, "expected an integer");
  return v.get<long>();
}

int as_int(const json& v, const std::string& ptr) {
  return static_cast<int>(as_long(v, ptr));
}

std::string as_string(const json& v, const std::string& ptr) {
  if (!v.is_string()) bad(ptr, "expected a string");
  return v.get<std::string>();
}

Vec as_vec(const json& v, const std::string& ptr) {
  if (!v.is_array()) bad(ptr, "expected an array of numbers");
  Vec out;
  out.reserve(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out.push_back(as_double(v[i], ptr + "/" + std::to_string(i)));
  return out;
}

TaskSpec parse_task(const json& t, const std::string& ptr) {
  if (!t.is_object()) bad(ptr, "expected an object");
  TaskSpec spec;
  if (const json* v = find(t, "kind")) spec.kind = as_string(*v, ptr + "/kind");

  if (spec.kind == "quadratic") {
    expect_keys(t, ptr, {"kind", "dim", "centers", "center_scale", "theta0"});
    if (const json* v = find(t, "centers")) {
      if (!v->is_array() || v->empty())
        bad(ptr + "/centers", "expected a non-empty array of vectors");
      for (std::size_t i = 0; i < v->size(); ++i)
        spec.quadratic.centers.push_back(
            as_vec((*v)[i], ptr + "/centers/" + std::to_string(i)));
    }
    if (const json* v = find(t, "dim")) {
      spec.quadratic.dim = as_int(*v, ptr + "/dim");
      if (!spec.quadratic.centers.empty() &&
          (int)spec.quadratic.centers[0].size() != spec.quadratic.dim)
        bad(ptr + "/dim", "does not match the explicit centers");
    }
    if (const json* v = find(t, "center_scale"))
      spec.quadratic.center_scale = as_double(*v, ptr + "/center_scale");
  } else if (spec.kind == "logistic") {
    expect_keys(t, ptr,
                {"kind", "l2_reg", "dirichlet_alpha", "idx_images",
                 "idx_labels", "synthetic", "theta0"});
    if (const json* v = find(t, "l2_reg"))
      spec.logistic.l2_reg = as_double(*v, ptr + "/l2_reg");
    if (const json* v = find(t, "dirichlet_alpha"))
      spec.logistic.dirichlet_alpha = as_double(*v, ptr + "/dirichlet_alpha");
    if (const json* v = find(t, "idx_images"))
      spec.logistic.idx_images = as_string(*v, ptr + "/idx_images");
    if (const json* v = find(t, "idx_labels"))
      spec.logistic.idx_labels = as_string(*v, ptr + "/idx_labels");
    if (const json* v = find(t, "synthetic")) {
      const std::string sp = ptr + "/synthetic";
      if (!v->is_object()) bad(sp, "expected an object");
      expect_keys(*v, sp, {"per_class", "dim", "num_classes", "separation"});
      LogisticSpecSynthetic s;
      if (const json* w = find(*v, "per_class"))
        s.per_class = as_int(*w, sp + "/per_class");
      if (const json* w = find(*v, "dim")) s.dim = as_int(*w, sp + "/dim");
      if (const json* w = find(*v, "num_classes"))
        s.num_classes = as_int(*w, sp + "/num_classes");
      if (const json* w = find(*v, "separation"))
        s.separation = as_double(*w, sp + "/separation");
      spec.logistic.synthetic = s;
    }
  } else {
    bad(ptr + "/kind", "expected \"quadratic\" or \"logistic\"");
  }
  if (const json* v = find(t, "theta0")) spec.theta0 = as_vec(*v, ptr + "/theta0");
  return spec;
}

}  // namespace

ParsedConfig parse_config_text(const std::string& json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("config parse error: ") + e.what());
  }
  if (!root.is_object())
    throw std::runtime_error("config root must be a JSON object");
  expect_keys(root, "",
              {"command", "n", "f", "honest_set", "algorithm", "pipeline",
               "bucket_size", "gm", "attack", "attack_eta", "attack_grid",
               "mimic_warmup", "T", "gamma", "beta", "batch_size", "clip_norm",
               "sigma", "seed", "task"});

  ParsedConfig pc;
  if (const json* v = find(root, "command")) {
    pc.command = as_string(*v, "/command");
    if (pc.command != "train") bad("/command", "only \"train\" is supported");
  }

  const json* nv = find(root, "n");
  if (!nv) bad("/n", "required");
  pc.run.n = as_int(*nv, "/n");
  if (const json* v = find(root, "f")) pc.run.f = as_int(*v, "/f");
  if (const json* v = find(root, "honest_set")) {
    if (!v->is_array()) bad("/honest_set", "expected an array of worker ids");
    std::vector<int> ids;
    for (std::size_t i = 0; i < v->size(); ++i)
      ids.push_back(as_int((*v)[i], "/honest_set/" + std::to_string(i)));
    pc.run.honest = IndexSet(ids);
  }
  if (const json* v = find(root, "algorithm")) {
    try {
      pc.run.algo = parse_algo(as_string(*v, "/algorithm"));
    } catch (const std::invalid_argument& e) {
      bad("/algorithm", e.what());
    }
  }
  if (const json* v = find(root, "pipeline"))
    pc.run.pipeline = as_string(*v, "/pipeline");
  if (const json* v = find(root, "bucket_size"))
    pc.run.bucket_size = as_int(*v, "/bucket_size");
  if (const json* v = find(root, "gm")) {
    if (!v->is_object()) bad("/gm", "expected an object");
    expect_keys(*v, "/gm", {"smoothing", "tolerance", "max_iters"});
    if (const json* w = find(*v, "smoothing"))
      pc.run.gm.smoothing = as_double(*w, "/gm/smoothing");
    if (const json* w = find(*v, "tolerance"))
      pc.run.gm.tolerance = as_double(*w, "/gm/tolerance");
    if (const json* w = find(*v, "max_iters"))
      pc.run.gm.max_iters = as_int(*w, "/gm/max_iters");
  }
  if (const json* v = find(root, "attack")) {
    try {
      pc.run.attack = parse_attack_spec(as_string(*v, "/attack"));
    } catch (const std::invalid_argument& e) {
      bad("/attack", e.what());
    }
  }
  if (const json* v = find(root, "attack_eta"))
    pc.run.attack.eta = as_double(*v, "/attack_eta");
  if (const json* v = find(root, "attack_grid")) {
    if (!v->is_array() || v->size() != 3)
      bad("/attack_grid", "expected [lo, hi, points]");
    pc.run.attack.grid.lo = as_double((*v)[0], "/attack_grid/0");
    pc.run.attack.grid.hi = as_double((*v)[1], "/attack_grid/1");
    pc.run.attack.grid.points = as_int((*v)[2], "/attack_grid/2");
  }
  if (const json* v = find(root, "mimic_warmup"))
    pc.run.attack.mimic_warmup = as_long(*v, "/mimic_warmup");
  if (const json* v = find(root, "T")) pc.run.T = as_long(*v, "/T");
  if (const json* v = find(root, "gamma"))
    pc.run.gamma = as_double(*v, "/gamma");
  if (const json* v = find(root, "beta")) pc.run.beta = as_double(*v, "/beta");
  if (const json* v = find(root, "batch_size"))
    pc.run.batch = as_long(*v, "/batch_size");
  if (const json* v = find(root, "clip_norm"))
    pc.run.clip = as_double(*v, "/clip_norm");
  if (const json* v = find(root, "sigma"))
    pc.run.sigma = as_double(*v, "/sigma");
  if (const json* v = find(root, "seed")) {
    if (!v->is_number_integer() || (v->is_number_integer() && !v->is_number_unsigned() && v->get<long long>() < 0))
      bad("/seed", "expected a non-negative integer");
    pc.run.seed = v->get<std::uint64_t>();
  }

  const json* tv = find(root, "task");
  if (!tv) bad("/task", "required");
  pc.task = parse_task(*tv, "/task");
  return pc;
}

ParsedConfig load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

BuiltTask build_task(const TaskSpec& spec, const RunConfig& run) {
  // task setup draws from its own stream so adding workers or steps never
  // shifts the data
  RngStream setup(run.seed, (std::uint64_t)run.n + 2);
  BuiltTask out;

  if (spec.kind == "quadratic") {
    std::vector<Vec> centers = spec.quadratic.centers;
    if (centers.empty()) {
      if (spec.quadratic.dim < 1)
        throw std::invalid_argument("task dim must be positive");
      centers.assign(run.n, Vec(spec.quadratic.dim));
      for (auto& c : centers)
        for (auto& v : c) v = spec.quadratic.center_scale * setup.normal();
    } else if ((int)centers.size() != run.n) {
      throw std::invalid_argument(
          "task centers must provide one row per worker (" +
          std::to_string(centers.size()) + " rows for n=" +
          std::to_string(run.n) + ")");
    }
    out.task = std::make_unique<QuadraticTask>(std::move(centers));
  } else if (spec.kind == "logistic") {
    const auto& ls = spec.logistic;
    LogisticData data;
    if (!ls.idx_images.empty() || !ls.idx_labels.empty()) {
      if (ls.idx_images.empty() || ls.idx_labels.empty())
        throw std::invalid_argument(
            "logistic task needs both idx_images and idx_labels");
      data = load_idx(ls.idx_images, ls.idx_labels);
    } else if (ls.synthetic) {
      const auto& s = *ls.synthetic;
      data = synthetic_blobs(s.per_class, s.dim, s.num_classes, s.separation,
                             setup);
    } else {
      throw std::invalid_argument(
          "logistic task needs synthetic parameters or idx paths");
    }
    auto part = dirichlet_partition(data.y, run.n, ls.dirichlet_alpha,
                                    data.num_classes, setup);
    auto shared = std::make_shared<LogisticData>(std::move(data));
    out.task = std::make_unique<LogisticTask>(shared, std::move(part.shards),
                                              ls.l2_reg);
  } else {
    throw std::invalid_argument("unknown task kind: " + spec.kind);
  }

  if (spec.theta0.empty()) {
    out.theta0 = Vec(out.task->dim(), 0.0);
  } else {
    if ((int)spec.theta0.size() != out.task->dim())
      throw std::invalid_argument(
          "theta0 has " + std::to_string(spec.theta0.size()) +
          " coordinates, the task model has " +
          std::to_string(out.task->dim()));
    out.theta0 = spec.theta0;
  }
  return out;
}

std::string config_schema_help() {
  return R"(config file schema (strict JSON, unknown keys rejected):
  command       "train" (default "train")
  n             worker count (required)
  f             declared fault budget, 0 <= f < n/2 (default 0)
  honest_set    array of 1-based worker ids, size n-f (default: first n-f)
  algorithm     "dgd" or "dshb" (default "dgd")
  pipeline      "<rule>" or "<pre>+<rule>", e.g. "cwtm", "nnm+krum",
                "bucketing+gm" (default "mean")
  bucket_size   bucketing group size; 0 picks floor(n/2f) (default 0)
  gm            {"smoothing", "tolerance", "max_iters"} for the geometric
                median solver (defaults 1e-8, 1e-10, 1000)
  attack        "none", "sf", "lf", "mimic", "foe", "alie"; trailing '*'
                (foe*/alie*) searches eta each step (default "none")
  attack_eta    fixed eta for foe/alie (default 0)
  attack_grid   [lo, hi, points] for the eta search (defaults: foe [0,10,201],
                alie [-5,5,201])
  mimic_warmup  rounds the mimic direction keeps updating; -1 = always
  T             number of steps (default 1)
  gamma         step size; omit for the auto schedule (dgd: 1/L)
  beta          momentum; omit for sqrt(1-24*gamma*L) (dshb)
  batch_size    minibatch per worker, 0 = full batch (default 0)
  clip_norm     gradient clip threshold, 0 = off (default 0)
  sigma         injected gradient noise scale (dshb, default 0)
  seed          base rng seed (default 0)
  task          {"kind": "quadratic", "dim", "centers", "center_scale",
                 "theta0"} or
                {"kind": "logistic", "l2_reg", "dirichlet_alpha",
                 "synthetic": {"per_class", "dim", "num_classes",
                 "separation"}, "idx_images", "idx_labels", "theta0"}
)";
}

}  // namespace robagg
