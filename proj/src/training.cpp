#include "robagg/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include "robagg/robustness.hpp"

namespace robagg {

Algo parse_algo(const std::string& name) {
  if (name == "dgd") return Algo::dgd;
  if (name == "dshb") return Algo::dshb;
  throw std::invalid_argument("unknown algorithm: " + name);
}

IndexSet RunConfig::honest_or_default() const {
  if (!honest.idx.empty()) return honest;
  return IndexSet::range(1, n - f);
}

void RunConfig::validate() const {
  if (n < 1) throw std::invalid_argument("need at least one worker");
  if (f < 0 || 2 * f >= n)
    throw std::invalid_argument("robustness precondition violated: need 0 <= f < n/2");
  if (T < 1) throw std::invalid_argument("step count must be positive");
  if (gamma && (!std::isfinite(*gamma) || *gamma < 0.0))
    throw std::invalid_argument("step size out of range");
  if (beta && (!(*beta >= 0.0) || *beta >= 1.0))
    throw std::invalid_argument("momentum parameter out of range");
  if (batch < 0) throw std::invalid_argument("batch size out of range");
  if (clip < 0.0 || !std::isfinite(clip))
    throw std::invalid_argument("clip threshold out of range");
  if (sigma < 0.0 || !std::isfinite(sigma))
    throw std::invalid_argument("noise scale out of range");
  if (!honest.idx.empty()) {
    honest.validate(n);
    if ((int)honest.idx.size() != n - f)
      throw std::invalid_argument("honest set must have exactly n - f workers");
  }
}

Vec momentum_update(const Vec& m_prev, const Vec& g, double beta) {
  if (!(beta >= 0.0) || beta >= 1.0)
    throw std::invalid_argument("momentum parameter out of range");
  if (m_prev.size() != g.size())
    throw std::invalid_argument("dimension mismatch in momentum update");
  Vec out(g.size());
  for (std::size_t k = 0; k < g.size(); ++k)
    out[k] = beta * m_prev[k] + (1.0 - beta) * g[k];
  return out;
}

Vec clip_vec(const Vec& g, double c) {
  if (c <= 0.0) return g;
  double nn = norm(g);
  if (nn <= c) return g;
  return scale(g, c / nn);
}

double kappa_hat_step(const Vec& R, const std::vector<Vec>& honest_vecs) {
  if (honest_vecs.empty())
    throw std::invalid_argument("no honest vectors");
  Vec mbar(honest_vecs[0].size(), 0.0);
  for (const auto& v : honest_vecs) axpy(mbar, 1.0, v);
  for (double& x : mbar) x /= (double)honest_vecs.size();
  double var = 0.0;
  for (const auto& v : honest_vecs) var += sq_dist(v, mbar);
  var /= (double)honest_vecs.size();
  double num = sq_dist(R, mbar);
  if (var < 1e-12)
    return num < 1e-12 ? 0.0 : std::numeric_limits<double>::infinity();
  return num / var;
}

double dgd_bound_rhs(double kappa, double G_sq, double L, double delta0,
                     long T) {
  return 4.0 * kappa * G_sq + 4.0 * L * delta0 / (double)T;
}

DshbSchedule dshb_bound_constants(double L, double delta0, double sigma,
                                  double G_sq, int n, int f, double kappa,
                                  long T) {
  DshbSchedule s;
  s.a1 = 36.0;
  s.a2 = 6.0 * std::sqrt(delta0);
  s.a3 = 1728.0 * L;
  s.a4 = 288.0 * L;
  s.a5 = 6.0 * L * s.a2 * s.a2;
  s.a_kappa = std::sqrt(s.a3 * kappa + s.a4 / (n - f));
  if (sigma > 0.0)
    s.gamma = std::min(1.0 / (24 * L),
                       s.a2 / (2 * s.a_kappa * sigma * std::sqrt((double)T)));
  else
    s.gamma = 1.0 / (24 * L);
  s.beta = std::sqrt(std::max(0.0, 1.0 - 24.0 * s.gamma * L));
  s.rhs = s.a1 * kappa * G_sq + s.a2 * s.a_kappa * sigma / std::sqrt((double)T) +
          s.a5 / T +
          s.a2 * s.a4 * sigma / (n * s.a_kappa * std::pow((double)T, 1.5));
  return s;
}

std::string trace_to_csv(const std::vector<MetricRow>& trace) {
  std::string out = "step,loss,grad_norm,agg_norm,kappa_hat,eta_star\n";
  char buf[256];
  for (const auto& r : trace) {
    std::snprintf(buf, sizeof(buf), "%ld,%.17g,%.17g,%.17g,%.17g,", r.step,
                  r.loss, r.grad_norm, r.agg_norm, r.kappa_hat);
    out += buf;
    if (r.has_eta) {
      std::snprintf(buf, sizeof(buf), "%.17g", r.eta_star);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

namespace {

bool all_finite(const Vec& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

// Everything a run keeps besides the model: worker identities, the server
// pipeline, one rng stream per role. Stream 0 belongs to the server, 1..n
// to the workers, n+1 to the pipeline (bucketing permutations).
struct RunState {
  IndexSet H;
  std::vector<int> honest_slots;  // 0-based, ascending
  std::vector<int> byz_slots;     // 0-based, ascending
  Pipeline pipe;
  RngStream server_rng;
  RngStream pipe_rng;
  std::vector<RngStream> worker_rng;  // slot i uses stream i+1
  std::unique_ptr<Task> flipped;      // only for the label-flip attack

  RunState(const RunConfig& cfg, const Task& task)
      : server_rng(cfg.seed, 0), pipe_rng(cfg.seed, (std::uint64_t)cfg.n + 1) {
    H = cfg.honest_or_default();
    std::vector<char> is_honest(cfg.n, 0);
    for (int w : H.idx) is_honest[w - 1] = 1;
    for (int i = 0; i < cfg.n; ++i)
      (is_honest[i] ? honest_slots : byz_slots).push_back(i);
    pipe = parse_pipeline(cfg.pipeline, cfg.f, cfg.bucket_size, cfg.gm);
    pipe.rng = &pipe_rng;
    worker_rng.reserve(cfg.n);
    for (int i = 0; i < cfg.n; ++i)
      worker_rng.emplace_back(cfg.seed, (std::uint64_t)i + 1);
    if (cfg.attack.kind == AttackKind::lf && !byz_slots.empty())
      flipped = task.label_flipped();
  }
};

void check_shapes(const RunConfig& cfg, const Task& task, const Vec& theta0) {
  cfg.validate();
  if (task.workers() != cfg.n)
    throw std::invalid_argument("task provides " +
                                std::to_string(task.workers()) +
                                " workers but the run expects " +
                                std::to_string(cfg.n));
  if ((int)theta0.size() != task.dim())
    throw std::invalid_argument("initial model dimension mismatch");
}

// Fills the Byzantine slots of sent. hv holds the honest submissions in
// ascending honest order; for none/lf the slots already carry the vectors
// those workers produced on their own (possibly corrupted) shards.
void fill_byzantine(const RunConfig& cfg, RunState& st,
                    const std::vector<Vec>& hv, std::vector<Vec>& sent,
                    MimicState& mimic, MetricRow& row) {
  if (st.byz_slots.empty()) return;
  switch (cfg.attack.kind) {
    case AttackKind::none:
    case AttackKind::lf:
      return;  // produced in the worker loop
    case AttackKind::mimic: {
      int pick = mimic_select(hv, mimic, cfg.attack.mimic_warmup);
      for (int b : st.byz_slots) sent[b] = hv[pick];
      return;
    }
    case AttackKind::sf:
    case AttackKind::foe:
    case AttackKind::alie: {
      Vec sbar = honest_reference(hv);
      if (cfg.attack.optimize) {
        auto res = optimize_eta(cfg.attack.kind, cfg.attack.grid, hv,
                                [&](const Vec& cand) {
                                  std::vector<Vec> trial = sent;
                                  for (int b : st.byz_slots) trial[b] = cand;
                                  return st.pipe(trial);
                                });
        for (int b : st.byz_slots) sent[b] = res.byz;
        row.has_eta = true;
        row.eta_star = res.eta;
      } else {
        Vec v = attack_vector(cfg.attack.kind, sbar, hv, cfg.attack.eta);
        for (int b : st.byz_slots) sent[b] = v;
      }
      return;
    }
  }
}

// The certified coefficient and convergence bound, when the task carries exact
// constants and the pipeline has a worst-case guarantee. Quiet no-op
// otherwise; nothing here asserts.
void fill_bound(const RunConfig& cfg, const Task& task, const RunState& st,
                const Vec& theta0, RunResult& res) {
  const auto* quad = dynamic_cast<const QuadraticTask*>(&task);
  if (!quad || !task.exact_constants()) return;
  double kappa;
  try {
    kappa = pipeline_kappa(st.pipe.pre, st.pipe.base.rule, cfg.n, cfg.f);
  } catch (const std::invalid_argument&) {
    return;
  }
  double L = task.smoothness();
  double G_sq = quad->heterogeneity_G_sq(st.H);
  double delta0 = task.honest_loss(st.H, theta0) - quad->optimal_honest_loss(st.H);
  res.kappa = kappa;
  res.bound_lhs = sq_norm(task.honest_gradient(st.H, res.theta_hat));
  if (cfg.algo == Algo::dgd)
    res.bound_rhs = dgd_bound_rhs(kappa, G_sq, L, delta0, cfg.T);
  else
    res.bound_rhs = dshb_bound_constants(L, delta0, cfg.sigma, G_sq, cfg.n,
                                         cfg.f, kappa, cfg.T)
                        .rhs;
  res.bound_checked = true;
}

}  // namespace

RunResult run_dgd(const RunConfig& cfg, const Task& task, const Vec& theta0,
                  const StepObserver& observe) {
  check_shapes(cfg, task, theta0);
  RunState st(cfg, task);
  double gamma = cfg.gamma ? *cfg.gamma : 1.0 / task.smoothness();

  RunResult res;
  res.gamma_used = gamma;
  res.beta_used = 0.0;
  res.trace.reserve(cfg.T);

  Vec theta = theta0;
  MimicState mimic;
  double best_agg = std::numeric_limits<double>::infinity();
  std::vector<Vec> sent(cfg.n);

  for (long t = 1; t <= cfg.T; ++t) {
    std::vector<Vec> hv;
    hv.reserve(st.honest_slots.size());
    for (int i : st.honest_slots) {
      sent[i] = clip_vec(task.gradient(i, theta), cfg.clip);
      hv.push_back(sent[i]);
    }
    if (st.flipped)
      for (int b : st.byz_slots)
        sent[b] = clip_vec(st.flipped->gradient(b, theta), cfg.clip);
    else if (cfg.attack.kind == AttackKind::none)
      for (int b : st.byz_slots)
        sent[b] = clip_vec(task.gradient(b, theta), cfg.clip);

    MetricRow row;
    row.step = t;
    fill_byzantine(cfg, st, hv, sent, mimic, row);

    Vec R = st.pipe(sent);
    if (!all_finite(R))
      throw std::runtime_error("non-finite state at step " + std::to_string(t));

    row.loss = task.honest_loss(st.H, theta);
    row.grad_norm = norm(task.honest_gradient(st.H, theta));
    row.agg_norm = norm(R);
    row.kappa_hat = kappa_hat_step(R, hv);
    res.trace.push_back(row);
    if (observe) observe(t, theta, sent, R);

    // output model: the iterate whose aggregate was smallest, earliest wins
    if (row.agg_norm < best_agg) {
      best_agg = row.agg_norm;
      res.tau = t;
      res.theta_hat = theta;
    }

    axpy(theta, -gamma, R);
    if (!all_finite(theta))
      throw std::runtime_error("non-finite state at step " + std::to_string(t));
  }

  fill_bound(cfg, task, st, theta0, res);
  return res;
}

RunResult run_dshb(const RunConfig& cfg, const Task& task, const Vec& theta0,
                   const StepObserver& observe) {
  check_shapes(cfg, task, theta0);
  RunState st(cfg, task);

  double L = task.smoothness();
  double gamma;
  if (cfg.gamma) {
    gamma = *cfg.gamma;
  } else {
    if (!task.exact_constants())
      throw std::invalid_argument(
          "auto schedule needs exact task constants (smoothness and optimal "
          "loss); set gamma explicitly");
    if (cfg.sigma > 0.0) {
      double kappa;
      try {
        kappa = pipeline_kappa(st.pipe.pre, st.pipe.base.rule, cfg.n, cfg.f);
      } catch (const std::invalid_argument&) {
        throw std::invalid_argument(
            "auto schedule needs a certified pipeline coefficient; set gamma "
            "explicitly");
      }
      const auto* quad = dynamic_cast<const QuadraticTask*>(&task);
      double delta0 =
          task.honest_loss(st.H, theta0) - quad->optimal_honest_loss(st.H);
      gamma = dshb_bound_constants(L, delta0, cfg.sigma,
                                   quad->heterogeneity_G_sq(st.H), cfg.n,
                                   cfg.f, kappa, cfg.T)
                  .gamma;
    } else {
      gamma = 1.0 / (24 * L);
    }
  }
  double beta =
      cfg.beta ? *cfg.beta : std::sqrt(std::max(0.0, 1.0 - 24.0 * gamma * L));

  RunResult res;
  res.gamma_used = gamma;
  res.beta_used = beta;
  res.trace.reserve(cfg.T);

  // the returned model is a uniform draw from the trajectory, fixed up front
  long hat_index = (long)st.server_rng.bounded((std::uint64_t)cfg.T);

  Vec theta = theta0;
  MimicState mimic;
  std::vector<Vec> sent(cfg.n);
  std::vector<Vec> m(cfg.n, Vec(task.dim(), 0.0));
  int d = task.dim();
  double noise_scale = cfg.sigma > 0.0 ? cfg.sigma / std::sqrt((double)d) : 0.0;

  auto worker_message = [&](const Task& view, int slot, const Vec& at) {
    Vec g = cfg.batch > 0
                ? view.stochastic_gradient(slot, at, cfg.batch,
                                           st.worker_rng[slot])
                : view.gradient(slot, at);
    if (noise_scale > 0.0)
      for (int k = 0; k < d; ++k)
        g[k] += noise_scale * st.worker_rng[slot].normal();
    g = clip_vec(g, cfg.clip);
    m[slot] = momentum_update(m[slot], g, beta);
    return m[slot];
  };

  for (long t = 1; t <= cfg.T; ++t) {
    std::vector<Vec> hv;
    hv.reserve(st.honest_slots.size());
    for (int i : st.honest_slots) {
      sent[i] = worker_message(task, i, theta);
      hv.push_back(sent[i]);
    }
    if (st.flipped)
      for (int b : st.byz_slots) sent[b] = worker_message(*st.flipped, b, theta);
    else if (cfg.attack.kind == AttackKind::none)
      for (int b : st.byz_slots) sent[b] = worker_message(task, b, theta);

    MetricRow row;
    row.step = t;
    fill_byzantine(cfg, st, hv, sent, mimic, row);

    Vec R = st.pipe(sent);
    if (!all_finite(R))
      throw std::runtime_error("non-finite state at step " + std::to_string(t));

    row.loss = task.honest_loss(st.H, theta);
    row.grad_norm = norm(task.honest_gradient(st.H, theta));
    row.agg_norm = norm(R);
    row.kappa_hat = kappa_hat_step(R, hv);
    res.trace.push_back(row);
    if (observe) observe(t, theta, sent, R);

    if (t - 1 == hat_index) res.theta_hat = theta;

    axpy(theta, -gamma, R);
    if (!all_finite(theta))
      throw std::runtime_error("non-finite state at step " + std::to_string(t));
  }

  fill_bound(cfg, task, st, theta0, res);
  return res;
}

}  // namespace robagg
