#include "robagg/attacks.hpp"

#include <cmath>
#include <stdexcept>

#include "robagg/aggregators.hpp"

namespace robagg {

AttackKind parse_attack(const std::string& name) {
  if (name == "none") return AttackKind::none;
  if (name == "sf") return AttackKind::sf;
  if (name == "lf") return AttackKind::lf;
  if (name == "mimic") return AttackKind::mimic;
  if (name == "foe") return AttackKind::foe;
  if (name == "alie") return AttackKind::alie;
  throw std::invalid_argument("unknown attack: " + name);
}

const char* attack_name(AttackKind k) {
  switch (k) {
    case AttackKind::none: return "none";
    case AttackKind::sf: return "sf";
    case AttackKind::lf: return "lf";
    case AttackKind::mimic: return "mimic";
    case AttackKind::foe: return "foe";
    case AttackKind::alie: return "alie";
  }
  throw std::logic_error("unreachable attack kind");
}

double EtaGrid::at(int i) const {
  if (i < 0 || i >= points) throw std::out_of_range("grid index");
  if (i == 0) return lo;
  if (i == points - 1) return hi;
  return lo + (hi - lo) * i / (points - 1);
}

EtaGrid EtaGrid::defaults_for(AttackKind k) {
  switch (k) {
    case AttackKind::foe: return {0.0, 10.0, 201};
    case AttackKind::alie: return {-5.0, 5.0, 201};
    default: return {0.0, 0.0, 1};
  }
}

AttackSpec parse_attack_spec(const std::string& name) {
  AttackSpec spec;
  std::string base = name;
  if (!base.empty() && base.back() == '*') {
    base.pop_back();
    spec.optimize = true;
  }
  spec.kind = parse_attack(base);
  if (spec.optimize && spec.kind != AttackKind::foe &&
      spec.kind != AttackKind::alie)
    throw std::invalid_argument("only foe and alie support an eta search");
  spec.grid = EtaGrid::defaults_for(spec.kind);
  return spec;
}

Vec honest_reference(const std::vector<Vec>& honest) {
  if (honest.empty()) throw std::invalid_argument("no honest vectors");
  return mean(honest);
}

Vec attack_vector(AttackKind kind, const Vec& sbar,
                  const std::vector<Vec>& honest, double eta) {
  switch (kind) {
    case AttackKind::foe:
      return scale(sbar, 1.0 - eta);
    case AttackKind::sf:
      return scale(sbar, -1.0);
    case AttackKind::alie: {
      Vec out = sbar;
      axpy(out, eta, coordinate_std(honest));
      return out;
    }
    default:
      throw std::invalid_argument("not a vector-formula attack");
  }
}

EtaSearchResult optimize_eta(
    AttackKind kind, const EtaGrid& grid, const std::vector<Vec>& honest,
    const std::function<Vec(const Vec&)>& aggregate_with_byz) {
  if (kind != AttackKind::foe && kind != AttackKind::alie)
    throw std::invalid_argument("eta search applies to foe and alie only");
  if (grid.points < 1) throw std::invalid_argument("empty eta grid");
  Vec sbar = honest_reference(honest);

  // evaluated sequentially in grid order: the server callback may be
  // stateful (bucketing pipelines draw permutations), so concurrent calls
  // would scramble its stream
  EtaSearchResult best;
  best.score = -1.0;
  for (int i = 0; i < grid.points; ++i) {
    double eta = grid.at(i);
    Vec byz = attack_vector(kind, sbar, honest, eta);
    double score = norm(sub(aggregate_with_byz(byz), sbar));
    if (score > best.score) {
      best.eta = eta;
      best.byz = std::move(byz);
      best.score = score;
    }
  }
  return best;
}

int label_flip(int label, int num_classes) {
  if (num_classes < 1) throw std::invalid_argument("need at least one class");
  if (label < 0 || label >= num_classes)
    throw std::invalid_argument("label out of range");
  return (num_classes - 1) - label;
}

int mimic_select(const std::vector<Vec>& honest, MimicState& state,
                 long warmup) {
  if (honest.empty()) throw std::invalid_argument("no honest vectors");
  Vec mbar = honest_reference(honest);
  int n = static_cast<int>(honest.size());
  std::vector<Vec> devs(n);
  for (int i = 0; i < n; ++i) devs[i] = sub(honest[i], mbar);

  if (!state.initialized) {
    int seed = 0;
    double best = sq_norm(devs[0]);
    for (int i = 1; i < n; ++i) {
      double s = sq_norm(devs[i]);
      if (s > best) {
        best = s;
        seed = i;
      }
    }
    state.z = devs[seed];
    double nz = norm(state.z);
    if (nz > 0)
      for (auto& v : state.z) v /= nz;
    state.initialized = true;
    state.rounds = 1;
  } else {
    if (warmup < 0 || state.rounds < warmup) {
      Vec w(state.z.size(), 0.0);
      for (int i = 0; i < n; ++i) axpy(w, dot(devs[i], state.z), devs[i]);
      double nw = norm(w);
      if (nw > 0) {
        for (auto& v : w) v /= nw;
        state.z = std::move(w);
      }
    }
    state.rounds += 1;
  }

  int pick = 0;
  double best = dot(devs[0], state.z);
  for (int i = 1; i < n; ++i) {
    double s = dot(devs[i], state.z);
    if (s > best) {
      best = s;
      pick = i;
    }
  }
  return pick;
}

}  // namespace robagg
