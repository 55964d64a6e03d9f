#include "monoqkd/quantum.hpp"

#include <cmath>

namespace monoqkd {

std::optional<GridAngle> grid_angle_from_radians(double value, double tol) {
  double scaled = value / kGridStep;
  double rounded = std::round(scaled);
  if (std::abs(scaled - rounded) > tol * 8.0 / std::numbers::pi) {
    return std::nullopt;
  }
  int k = static_cast<int>(rounded);
  if (k < 0 || k >= kGridSize) return std::nullopt;
  return GridAngle{k};
}

namespace {

// cos(d * pi/4) for d mod 8; +-1 and 0 entries are exact.
constexpr double kHalfSqrt2 = std::numbers::sqrt2 / 2.0;
constexpr double kCosQuarter[8] = {1.0,  kHalfSqrt2,  0.0, -kHalfSqrt2,
                                   -1.0, -kHalfSqrt2, 0.0, kHalfSqrt2};

double cos_two_delta(GridAngle a, GridAngle b) {
  int d = ((a.k - b.k) % 8 + 8) % 8;
  return kCosQuarter[d];
}

}  // namespace

double correlation(GridAngle a, GridAngle b) { return -cos_two_delta(a, b); }

JointDistribution singlet_distribution(GridAngle a, GridAngle b) {
  double c = cos_two_delta(a, b);
  JointDistribution dist;
  for (Outcome oa : {Outcome::plus, Outcome::minus}) {
    for (Outcome ob : {Outcome::plus, Outcome::minus}) {
      dist.prob(oa, ob) = (1.0 - sign_of(oa) * sign_of(ob) * c) / 4.0;
    }
  }
  return dist;
}

double JointDistribution::expectation() const {
  double e = 0.0;
  for (Outcome oa : {Outcome::plus, Outcome::minus}) {
    for (Outcome ob : {Outcome::plus, Outcome::minus}) {
      e += sign_of(oa) * sign_of(ob) * prob(oa, ob);
    }
  }
  return e;
}

double JointDistribution::marginal_a(Outcome a) const {
  return prob(a, Outcome::plus) + prob(a, Outcome::minus);
}

double JointDistribution::marginal_b(Outcome b) const {
  return prob(Outcome::plus, b) + prob(Outcome::minus, b);
}

bool JointDistribution::valid(double tol) const {
  double sum = 0.0;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      if (p[i][j] < 0.0) return false;
      sum += p[i][j];
    }
  }
  if (std::abs(sum - 1.0) > tol) return false;
  for (Outcome o : {Outcome::plus, Outcome::minus}) {
    if (std::abs(marginal_a(o) - 0.5) > tol) return false;
    if (std::abs(marginal_b(o) - 0.5) > tol) return false;
  }
  return true;
}

std::pair<Outcome, Outcome> sample_joint(const JointDistribution& dist,
                                         RandomStream& rng) {
  double u = rng.next_unit();
  double acc = 0.0;
  constexpr Outcome outcomes[2] = {Outcome::plus, Outcome::minus};
  for (Outcome oa : outcomes) {
    for (Outcome ob : outcomes) {
      acc += dist.prob(oa, ob);
      if (u < acc) return {oa, ob};
    }
  }
  return {Outcome::minus, Outcome::minus};
}

}  // namespace monoqkd
