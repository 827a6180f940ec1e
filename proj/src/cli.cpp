#include "robagg/cli.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "robagg/config.hpp"
#include "robagg/preagg.hpp"
#include "robagg/rng.hpp"
#include "robagg/robustness.hpp"
#include "robagg/text.hpp"
#include "robagg/training.hpp"

namespace robagg {

int cmd_aggregate(const std::string& pipeline, const std::string& input_path,
                  int f, int bucket_size, std::uint64_t seed,
                  const GmParams& gm, std::ostream& out, std::ostream& err) {
  try {
    auto xs = load_vectors_file(input_path);
    Pipeline pipe = parse_pipeline(pipeline, f, bucket_size, gm);
    RngStream rng(seed, xs.size() + 1);  // the pipeline stream slot
    pipe.rng = &rng;
    out << fmt_vector(pipe(xs)) << "\n";
    return 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_kappa(const std::string& rule, int n, int f, int dim,
              std::uint64_t trials, std::uint64_t seed, std::ostream& out,
              std::ostream& err) {
  try {
    AggregatorSpec spec;
    spec.rule = parse_rule(rule);
    spec.f = f;
    AggFn agg = [&spec](const std::vector<Vec>& xs) {
      return aggregate(spec, xs);
    };

    out << "kappa certification: rule=" << rule_name(spec.rule) << " n=" << n
        << " f=" << f << " dim=" << dim << " trials=" << trials
        << " seed=" << seed << "\n";
    out << "  universal floor f/(n-2f): "
        << fmt_double(universal_kappa_floor(n, f)) << "\n";

    const bool has_theory = spec.rule != Rule::mean;
    double theory = 0.0;
    if (has_theory) {
      theory = theoretical_kappa(spec.rule, n, f);
      out << "  theoretical kappa: " << fmt_double(theory) << "\n";
    } else {
      out << "  theoretical kappa: none (no robustness guarantee)\n";
    }

    double worst = 0.0;
    if (trials == 0) {
      out << "  random instances: skipped\n";
    } else {
      RngStream rng(seed, 0);
      double rmax = 0.0;
      for (std::uint64_t t = 0; t < trials; ++t) {
        std::vector<Vec> xs(n, Vec(dim));
        for (auto& x : xs)
          for (auto& v : x) v = rng.normal();
        rmax = std::max(rmax, estimate_kappa(agg, xs, f).kappa_hat);
      }
      worst = std::max(worst, rmax);
      out << "  random instances: kappa_hat_max=" << fmt_double(rmax) << "\n";
    }

    auto certify = [&](const char* label, const std::vector<Vec>& xs) {
      double k = estimate_kappa(agg, xs, f).kappa_hat;
      worst = std::max(worst, k);
      out << "  " << label << ": kappa_hat=" << fmt_double(k) << "\n";
    };
    certify("universal instance",
            lower_bound_instance(LowerBoundKind::universal, n, f));
    certify("gar instance", lower_bound_instance(LowerBoundKind::gar, n, f));
    std::vector<Vec> outlier(n, Vec{0.0});
    outlier.back() = Vec{1e6};
    certify("outlier instance", outlier);

    // mean carries no guarantee, so anything measurably above zero fails it
    const bool pass = worst <= (has_theory ? theory : 0.0) + 1e-6;
    out << "kappa rule=" << rule_name(spec.rule) << " n=" << n << " f=" << f
        << " kappa_hat_max=" << fmt_double(worst) << " theoretical="
        << (has_theory ? fmt_double(theory) : std::string("none"))
        << " verdict=" << (pass ? "PASS" : "FAIL") << "\n";
    return pass ? 0 : 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

int cmd_train(const std::string& config_path, const std::string& out_csv,
              std::ostream& out, std::ostream& err) {
  try {
    ParsedConfig pc = load_config_file(config_path);
    pc.run.validate();
    BuiltTask built = build_task(pc.task, pc.run);
    RunResult res = pc.run.algo == Algo::dgd
                        ? run_dgd(pc.run, *built.task, built.theta0)
                        : run_dshb(pc.run, *built.task, built.theta0);

    out << "run: algo=" << (pc.run.algo == Algo::dgd ? "dgd" : "dshb")
        << " pipeline=" << pc.run.pipeline << " T=" << pc.run.T
        << " gamma=" << fmt_double(res.gamma_used)
        << " beta=" << fmt_double(res.beta_used) << "\n";
    if (pc.run.algo == Algo::dgd)
      out << "selected model: step tau=" << res.tau << "\n";
    bool violated = false;
    if (res.bound_checked) {
      out << "bound: kappa=" << fmt_double(res.kappa)
          << " lhs=" << fmt_double(res.bound_lhs)
          << " rhs=" << fmt_double(res.bound_rhs) << "\n";
      // the dgd bound is deterministic; dshb's holds only in expectation
      violated = pc.run.algo == Algo::dgd && res.bound_lhs > res.bound_rhs + 1e-9;
      if (violated) out << "bound violated\n";
    }

    std::string csv = trace_to_csv(res.trace);
    if (out_csv.empty() || out_csv == "-") {
      out << csv;
    } else {
      std::ofstream file(out_csv, std::ios::binary);
      if (!file) throw std::runtime_error("cannot write csv: " + out_csv);
      file << csv;
      out << "trace written to " << out_csv << "\n";
    }
    return violated ? 2 : 0;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace robagg
