#pragma once

#include <utility>

#include "monoqkd/grid.hpp"
#include "monoqkd/rng.hpp"

namespace monoqkd {

// Joint outcome distribution of one measured singlet pair,
// indexed by [to_bit(o_a)][to_bit(o_b)].
struct JointDistribution {
  double p[2][2] = {{0.0, 0.0}, {0.0, 0.0}};

  double prob(Outcome a, Outcome b) const { return p[to_bit(a)][to_bit(b)]; }
  double& prob(Outcome a, Outcome b) { return p[to_bit(a)][to_bit(b)]; }

  // sum over o_a * o_b * p
  double expectation() const;
  double marginal_a(Outcome a) const;
  double marginal_b(Outcome b) const;

  // Nonnegative, normalized, and both marginals 1/2 (no-signalling).
  bool valid(double tol = 1e-12) const;
};

// Singlet correlation E(a, b) = -cos 2(a - b), evaluated exactly on the grid
// (the only values that occur are 0, +-sqrt(2)/2, +-1).
double correlation(GridAngle a, GridAngle b);

// Born-rule joint distribution: p(o_a, o_b) = (1 - o_a*o_b*cos 2(a-b)) / 4.
JointDistribution singlet_distribution(GridAngle a, GridAngle b);

std::pair<Outcome, Outcome> sample_joint(const JointDistribution& dist,
                                         RandomStream& rng);

}  // namespace monoqkd
