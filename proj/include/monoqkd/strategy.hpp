#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "monoqkd/grid.hpp"
#include "monoqkd/rng.hpp"

namespace monoqkd {

// Dense +-1 table over the full angle grid, rows indexed by Alice's total
// angle a, columns by Bob's total angle b.
using SignTable = std::array<std::array<std::int8_t, kGridSize>, kGridSize>;

enum class Party : std::uint8_t { alice = 0, bob = 1 };

inline const char* party_name(Party p) {
  return p == Party::alice ? "Alice" : "Bob";
}

enum class LocalityClass { local, nonlocal };

// One deterministic hidden-variable strategy: the outcome functions
// W_A(a, b) and W_B(a, b) for a single lambda.
struct HVStrategy {
  std::string lambda_id;
  SignTable wa;
  SignTable wb;

  Outcome outcome_a(int a_k, int b_k) const {
    return outcome_from_sign(wa[a_k][b_k]);
  }
  Outcome outcome_b(int a_k, int b_k) const {
    return outcome_from_sign(wb[a_k][b_k]);
  }
};

struct ConstraintViolation {
  std::string identity;
  int a_k;
  int b_k;
};

// Verifies the perfect-(anti)correlation identities a constraint-passing
// strategy must satisfy at every grid point:
//   same-basis:    wa(a,a) * wb(a,a) = -1
//   quarter-turn:  wa(a,a+pi/2) * wb(a,a+pi/2) = +1 (both orders)
//   product flip in b:  wa(a,b) wb(a,b) = -wa(a,b+pi/2) wb(a,b+pi/2)
//   product flip in a:  wa(a,b) wb(a,b) = -wa(a+pi/2,b) wb(a+pi/2,b)
//   per-party form in b: wa(a,b) wa(a,b+pi/2) = -wb(a,b) wb(a,b+pi/2)
//   per-party form in a: wa(a,b) wa(a+pi/2,b) = -wb(a,b) wb(a+pi/2,b)
// Returns an empty vector on pass; violations name the identity and point.
std::vector<ConstraintViolation> check_constraints(const HVStrategy& s);

// Local iff wa is constant in b and wb is constant in a, over the full grid.
LocalityClass classify(const HVStrategy& s);

// Builds a local strategy from a sign assignment t on the four free angles
// {0, pi/8, pi/4, 3pi/8}; t extends to the grid by t(a + pi/2) = -t(a), and
// wa(a,b) = t(a), wb(a,b) = -t(b). Exactly 16 such strategies exist.
HVStrategy build_local(const std::array<int, 4>& t);

std::vector<HVStrategy> enumerate_local_strategies();

// Builds a maximally non-local (PR-box) strategy. The designated party's
// outcome tracks sign(-cos 2(a-b)); at the cosine zeros the sign alternates
// with eps so the designated outcome flips whenever the other party's angle
// shifts by pi/2 at every grid point. s gives the local side's own-angle
// outcome function on the grid and must be quarter-period invariant,
// s(k + pi/2) = s(k): otherwise the designated side's outcome would be
// pi/2-periodic in the hidden angle and Eve could decode it despite the
// non-locality. Throws std::invalid_argument on bad signs or a
// non-invariant s.
HVStrategy build_pr_nonlocal(int eps, const std::array<int, kGridSize>& s,
                             Party nonlocal_side);

struct ChshSetting {
  GridAngle a1, a2, b1, b2;
  std::array<int, 4> signs;  // applied to E(a1,b1), E(a1,b2), E(a2,b1), E(a2,b2)

  // a1=0, a2=pi/4, b1=pi/8, b2=3pi/8, signs (+1,-1,+1,+1);
  // singlet value -2*sqrt(2).
  static ChshSetting canonical();
};

// Per-lambda deterministic CHSH value; in {-4,-2,0,+2,+4}.
double chsh_value(const HVStrategy& s, const ChshSetting& setting);

// Singlet CHSH value for a setting (weighted sum of correlations).
double singlet_chsh(const ChshSetting& setting);

struct HVEnsemble {
  struct Entry {
    HVStrategy strategy;
    double weight = 0.0;
  };
  std::vector<Entry> entries;
};

// Weight and constraint validation; each problem as a human-readable line.
std::vector<std::string> validate_ensemble(const HVEnsemble& e,
                                           double tol = 1e-12);

double ensemble_chsh(const HVEnsemble& e, const ChshSetting& setting);

double nonlocal_weight(const HVEnsemble& e);

// Weighted strategy draw.
std::size_t draw_strategy_index(const HVEnsemble& e, RandomStream& rng);

// The critical mixture: PR-box strategies (non-local side A and B, balanced)
// with total weight sqrt(2)-1, plus the 8 local strategies of canonical CHSH
// value -2 sharing weight 2-sqrt(2). Ensemble CHSH is -2*sqrt(2).
HVEnsemble critical_ensemble();

// Equal mixture of the 8 local strategies with canonical CHSH value -2;
// ensemble CHSH is -2, so parameter estimation aborts on it.
HVEnsemble local_only_ensemble();

// Minimal non-local weight needed to reach |CHSH| = target when local
// strategies contribute at most 2 and non-local at most 4:
// (target - 2) / 2. Throws std::domain_error outside [2, 4].
double min_nonlocal_fraction(double target_chsh_abs);

}  // namespace monoqkd
