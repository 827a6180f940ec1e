#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "robagg/attacks.hpp"
#include "robagg/preagg.hpp"
#include "robagg/tasks.hpp"
#include "robagg/vec.hpp"

namespace robagg {

enum class Algo { dgd, dshb };

Algo parse_algo(const std::string& name);

struct RunConfig {
  int n = 0;
  int f = 0;
  IndexSet honest;  // empty -> first n-f workers
  Algo algo = Algo::dgd;
  std::string pipeline = "mean";
  int bucket_size = 0;  // 0 -> floor(n/2f) at call time
  GmParams gm;
  AttackSpec attack;
  long T = 1;
  std::optional<double> gamma;  // empty -> auto schedule
  std::optional<double> beta;   // empty -> auto (dshb)
  long batch = 0;               // 0 -> full batch
  double clip = 0.0;            // 0 -> off
  double sigma = 0.0;           // injected gradient noise scale (dshb)
  std::uint64_t seed = 0;

  IndexSet honest_or_default() const;
  void validate() const;
};

struct MetricRow {
  long step = 0;
  double loss = 0.0;
  double grad_norm = 0.0;
  double agg_norm = 0.0;
  double kappa_hat = 0.0;
  bool has_eta = false;
  double eta_star = 0.0;
};

struct RunResult {
  Vec theta_hat;
  std::vector<MetricRow> trace;
  double gamma_used = 0.0;
  double beta_used = 0.0;
  long tau = 0;  // dgd: 1-based step whose update preceded theta_hat
  // Certified pipeline coefficient and the convergence bound at the end of the
  // run; only filled when the task has exact constants and the pipeline has
  // a certified kappa.
  bool bound_checked = false;
  double kappa = 0.0;
  double bound_lhs = 0.0;
  double bound_rhs = 0.0;
};

Vec momentum_update(const Vec& m_prev, const Vec& g, double beta);
// Scales g to norm c when ||g|| > c; identity otherwise (and for c <= 0).
Vec clip_vec(const Vec& g, double c);

// Per-step robustness diagnostic ||R - mean_H||^2 / variance_H over the
// honest vectors. Degenerate denominator (< 1e-12): 0 when the numerator is
// also below tolerance, +inf otherwise.
double kappa_hat_step(const Vec& R, const std::vector<Vec>& honest_vecs);

// 4 kappa G^2 + 4 L (L_H(theta0) - L*) / T.
double dgd_bound_rhs(double kappa, double G_sq, double L, double delta0,
                     long T);

struct DshbSchedule {
  double a1 = 0, a2 = 0, a3 = 0, a4 = 0, a5 = 0;
  double a_kappa = 0;
  double gamma = 0;
  double beta = 0;
  double rhs = 0;
};

// Closed-form schedule and bound: a1=36, a2=6*sqrt(delta0), a3=1728L,
// a4=288L, a5=6L*a2^2, a_kappa^2=a3*kappa+a4/(n-f),
// gamma=min(1/(24L), a2/(2*a_kappa*sigma*sqrt(T))), beta=sqrt(1-24*gamma*L),
// rhs=a1*kappa*G^2 + a2*a_kappa*sigma/sqrt(T) + a5/T
//     + a2*a4*sigma/(n*a_kappa*T^{3/2}).
DshbSchedule dshb_bound_constants(double L, double delta0, double sigma,
                                  double G_sq, int n, int f, double kappa,
                                  long T);

// Optional per-step tap for tests and diagnostics: the model the step saw,
// the n vectors the server received, and the aggregate it produced.
using StepObserver = std::function<void(
    long step, const Vec& theta_prev, const std::vector<Vec>& sent,
    const Vec& R)>;

// Distributed gradient descent with robust aggregation: full gradients,
// theta_hat is the iterate whose aggregate had the smallest norm.
RunResult run_dgd(const RunConfig& cfg, const Task& task, const Vec& theta0,
                  const StepObserver& observe = {});
// Distributed stochastic heavy ball: per-worker momentum, aggregated each
// step; theta_hat drawn uniformly from the trajectory.
RunResult run_dshb(const RunConfig& cfg, const Task& task, const Vec& theta0,
                   const StepObserver& observe = {});

// CSV trace, header "step,loss,grad_norm,agg_norm,kappa_hat,eta_star",
// floats at 17 significant digits, eta_star blank when not searched.
std::string trace_to_csv(const std::vector<MetricRow>& trace);

}  // namespace robagg
