#pragma once

#include <cstdint>
#include <numbers>
#include <optional>
#include <stdexcept>

namespace monoqkd {

// All protocol angles live on the grid G = {k*pi/8 : k = 0..8}. Angles are
// stored as the integer grid index k; radians appear only at trig evaluation,
// so "same basis" comparisons are exact integer equality.
inline constexpr int kGridSize = 9;
inline constexpr double kGridStep = std::numbers::pi / 8.0;

struct GridAngle {
  int k = 0;  // angle = k*pi/8, 0 <= k <= 8

  constexpr GridAngle() = default;
  constexpr explicit GridAngle(int index) : k(index) {
    if (index < 0 || index >= kGridSize) {
      throw std::out_of_range("GridAngle index outside 0..8");
    }
  }

  double radians() const { return k * kGridStep; }

  friend constexpr bool operator==(GridAngle, GridAngle) = default;
};

// Maps a radian value back onto the grid, if it lies on it.
std::optional<GridAngle> grid_angle_from_radians(double value,
                                                 double tol = 1e-12);

enum class Outcome : std::int8_t { plus = +1, minus = -1 };

constexpr int sign_of(Outcome o) { return static_cast<int>(o); }

constexpr Outcome outcome_from_sign(int s) {
  if (s != +1 && s != -1) throw std::invalid_argument("outcome sign not +-1");
  return static_cast<Outcome>(s);
}

constexpr Outcome opposite(Outcome o) {
  return o == Outcome::plus ? Outcome::minus : Outcome::plus;
}

// Fixed bit convention: +1 -> 0, -1 -> 1. Encoding and decoding share it.
constexpr int to_bit(Outcome o) { return o == Outcome::plus ? 0 : 1; }

// One party's measurement choice: phi in {0, pi/8, pi/4, 3pi/8, pi/2}
// (indices 0..4) and c in {0, pi/2} (index 0 or 4). The measured angle is
// phi + c.
struct MeasurementBasis {
  int phi_k = 0;  // 0..4
  int c_k = 0;    // 0 or 4

  int total_k() const { return phi_k + c_k; }
  GridAngle total() const { return GridAngle{phi_k + c_k}; }
  bool valid() const {
    return phi_k >= 0 && phi_k <= 4 && (c_k == 0 || c_k == 4);
  }
};

}  // namespace monoqkd
