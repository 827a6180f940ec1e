#pragma once

#include <functional>
#include <string>
#include <vector>

#include "robagg/vec.hpp"

namespace robagg {

enum class AttackKind { none, sf, lf, mimic, foe, alie };

AttackKind parse_attack(const std::string& name);
const char* attack_name(AttackKind k);

struct EtaGrid {
  double lo = 0.0;
  double hi = 0.0;
  int points = 1;  // linear, endpoints included

  double at(int i) const;
  static EtaGrid defaults_for(AttackKind k);  // alie [-5,5], foe [0,10], 201
};

struct AttackSpec {
  AttackKind kind = AttackKind::none;
  bool optimize = false;  // foe*/alie*: greedy eta search each step
  double eta = 0.0;       // fixed eta when not optimizing (foe/alie)
  EtaGrid grid = {};      // search grid when optimizing
  long mimic_warmup = -1;  // rounds the mimic direction keeps updating; -1 = always
};

AttackSpec parse_attack_spec(const std::string& name);  // "foe*" sets optimize

// Mean of the honest vectors (the attacker is omniscient).
Vec honest_reference(const std::vector<Vec>& honest);

// Vector-formula attacks: the Byzantine submission given the honest mean.
//   foe:  (1 - eta) * sbar
//   alie: sbar + eta * coordinate_std(honest)
//   sf:   -sbar (foe at eta = 2)
// Other kinds throw "not a vector-formula attack".
Vec attack_vector(AttackKind kind, const Vec& sbar,
                  const std::vector<Vec>& honest, double eta);

struct EtaSearchResult {
  double eta = 0.0;
  Vec byz;
  double score = 0.0;  // ||aggregate - sbar|| at eta
};

// Exhaustive linear-grid search for the eta maximizing the displacement of
// the aggregate from the honest mean. aggregate_with_byz must map a
// candidate Byzantine vector to the server output; it is called exactly
// grid.points times. Ties keep the first grid point.
EtaSearchResult optimize_eta(
    AttackKind kind, const EtaGrid& grid, const std::vector<Vec>& honest,
    const std::function<Vec(const Vec&)>& aggregate_with_byz);

// Label corruption l -> (C-1) - l.
int label_flip(int label, int num_classes);

// Mimic keeps a direction estimate z (power-iteration style over the honest
// deviations, seeded by the largest first-round deviation) and picks the
// honest vector with the largest projection on z. Returns a position into
// the honest list; ties take the lowest.
struct MimicState {
  Vec z;
  bool initialized = false;
  long rounds = 0;
};

int mimic_select(const std::vector<Vec>& honest, MimicState& state,
                 long warmup = -1);

}  // namespace robagg
