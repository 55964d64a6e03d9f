#include "monoqkd/strategy.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "monoqkd/quantum.hpp"

namespace monoqkd {

namespace {

int product(const HVStrategy& s, int a, int b) {
  return s.wa[a][b] * s.wb[a][b];
}

void require_sign(int v, const char* what) {
  if (v != +1 && v != -1) {
    throw std::invalid_argument(std::string(what) + " must be +1 or -1");
  }
}

// sign(-cos 2x) on the grid, x = d*pi/8; at the cosine zeros (d = 2, 6 mod 8)
// the tie-break alternates with eps so the value always flips under d -> d+4.
int pr_sigma(int d, int eps) {
  int m = ((d % 8) + 8) % 8;
  switch (m) {
    case 0:
    case 1:
    case 7:
      return -1;
    case 3:
    case 4:
    case 5:
      return +1;
    case 2:
      return eps;
    default:  // 6
      return -eps;
  }
}

}  // namespace

std::vector<ConstraintViolation> check_constraints(const HVStrategy& s) {
  std::vector<ConstraintViolation> out;
  for (int a = 0; a < kGridSize; ++a) {
    if (product(s, a, a) != -1) {
      out.push_back({"same-basis anti-correlation", a, a});
    }
    if (a + 4 < kGridSize) {
      if (product(s, a, a + 4) != +1) {
        out.push_back({"quarter-turn correlation", a, a + 4});
      }
      if (product(s, a + 4, a) != +1) {
        out.push_back({"quarter-turn correlation", a + 4, a});
      }
    }
  }
  for (int a = 0; a < kGridSize; ++a) {
    for (int b = 0; b + 4 < kGridSize; ++b) {
      if (product(s, a, b) != -product(s, a, b + 4)) {
        out.push_back({"product flip in b", a, b});
      }
      if (s.wa[a][b] * s.wa[a][b + 4] != -s.wb[a][b] * s.wb[a][b + 4]) {
        out.push_back({"per-party flip in b", a, b});
      }
    }
  }
  for (int b = 0; b < kGridSize; ++b) {
    for (int a = 0; a + 4 < kGridSize; ++a) {
      if (product(s, a, b) != -product(s, a + 4, b)) {
        out.push_back({"product flip in a", a, b});
      }
      if (s.wa[a][b] * s.wa[a + 4][b] != -s.wb[a][b] * s.wb[a + 4][b]) {
        out.push_back({"per-party flip in a", a, b});
      }
    }
  }
  return out;
}

LocalityClass classify(const HVStrategy& s) {
  for (int a = 0; a < kGridSize; ++a) {
    for (int b = 1; b < kGridSize; ++b) {
      if (s.wa[a][b] != s.wa[a][0]) return LocalityClass::nonlocal;
      if (s.wb[b][a] != s.wb[0][a]) return LocalityClass::nonlocal;
    }
  }
  return LocalityClass::local;
}

HVStrategy build_local(const std::array<int, 4>& t) {
  std::array<int, kGridSize> full{};
  for (int k = 0; k < 4; ++k) {
    require_sign(t[k], "local sign");
    full[k] = t[k];
    full[k + 4] = -t[k];
  }
  full[8] = t[0];

  HVStrategy s;
  s.lambda_id = "local:";
  for (int k = 0; k < 4; ++k) s.lambda_id += (t[k] > 0 ? '+' : '-');
  for (int a = 0; a < kGridSize; ++a) {
    for (int b = 0; b < kGridSize; ++b) {
      s.wa[a][b] = static_cast<std::int8_t>(full[a]);
      s.wb[a][b] = static_cast<std::int8_t>(-full[b]);
    }
  }
  return s;
}

std::vector<HVStrategy> enumerate_local_strategies() {
  std::vector<HVStrategy> out;
  out.reserve(16);
  for (int mask = 0; mask < 16; ++mask) {
    std::array<int, 4> t{};
    for (int k = 0; k < 4; ++k) t[k] = (mask >> k) & 1 ? +1 : -1;
    out.push_back(build_local(t));
  }
  return out;
}

HVStrategy build_pr_nonlocal(int eps, const std::array<int, kGridSize>& s,
                             Party nonlocal_side) {
  require_sign(eps, "eps");
  for (int v : s) require_sign(v, "local side sign");
  for (int k = 0; k + 4 < kGridSize; ++k) {
    if (s[k] != s[k + 4]) {
      throw std::invalid_argument(
          "local side sign table must satisfy s(k) = s(k + pi/2)");
    }
  }

  HVStrategy out;
  out.lambda_id = std::string("pr:") + (nonlocal_side == Party::alice ? "A" : "B") +
                  (eps > 0 ? ":+:" : ":-:");
  for (int v : s) out.lambda_id += (v > 0 ? '+' : '-');

  for (int a = 0; a < kGridSize; ++a) {
    for (int b = 0; b < kGridSize; ++b) {
      int sigma = pr_sigma(a - b, eps);
      if (nonlocal_side == Party::alice) {
        out.wb[a][b] = static_cast<std::int8_t>(s[b]);
        out.wa[a][b] = static_cast<std::int8_t>(s[b] * sigma);
      } else {
        out.wa[a][b] = static_cast<std::int8_t>(s[a]);
        out.wb[a][b] = static_cast<std::int8_t>(s[a] * sigma);
      }
    }
  }
  return out;
}

ChshSetting ChshSetting::canonical() {
  return ChshSetting{GridAngle{0}, GridAngle{2}, GridAngle{1}, GridAngle{3},
                     {+1, -1, +1, +1}};
}

double chsh_value(const HVStrategy& s, const ChshSetting& setting) {
  const std::array<std::pair<int, int>, 4> cells{
      {{setting.a1.k, setting.b1.k},
       {setting.a1.k, setting.b2.k},
       {setting.a2.k, setting.b1.k},
       {setting.a2.k, setting.b2.k}}};
  double v = 0.0;
  for (int i = 0; i < 4; ++i) {
    v += setting.signs[i] * product(s, cells[i].first, cells[i].second);
  }
  return v;
}

double singlet_chsh(const ChshSetting& setting) {
  return setting.signs[0] * correlation(setting.a1, setting.b1) +
         setting.signs[1] * correlation(setting.a1, setting.b2) +
         setting.signs[2] * correlation(setting.a2, setting.b1) +
         setting.signs[3] * correlation(setting.a2, setting.b2);
}

std::vector<std::string> validate_ensemble(const HVEnsemble& e, double tol) {
  std::vector<std::string> problems;
  if (e.entries.empty()) {
    problems.push_back("ensemble has no entries");
    return problems;
  }
  double sum = 0.0;
  for (const auto& entry : e.entries) {
    if (entry.weight < 0.0) {
      problems.push_back("negative weight for " + entry.strategy.lambda_id);
    }
    sum += entry.weight;
    for (const auto& v : check_constraints(entry.strategy)) {
      problems.push_back(entry.strategy.lambda_id + ": " + v.identity +
                         " violated at (a=" + std::to_string(v.a_k) +
                         ", b=" + std::to_string(v.b_k) + ")");
    }
  }
  if (std::abs(sum - 1.0) > tol) {
    problems.push_back("weights sum to " + std::to_string(sum) + ", not 1");
  }
  return problems;
}

double ensemble_chsh(const HVEnsemble& e, const ChshSetting& setting) {
  double v = 0.0;
  for (const auto& entry : e.entries) {
    v += entry.weight * chsh_value(entry.strategy, setting);
  }
  return v;
}

double nonlocal_weight(const HVEnsemble& e) {
  double w = 0.0;
  for (const auto& entry : e.entries) {
    if (classify(entry.strategy) == LocalityClass::nonlocal) w += entry.weight;
  }
  return w;
}

std::size_t draw_strategy_index(const HVEnsemble& e, RandomStream& rng) {
  double u = rng.next_unit();
  double acc = 0.0;
  for (std::size_t i = 0; i < e.entries.size(); ++i) {
    acc += e.entries[i].weight;
    if (u < acc) return i;
  }
  return e.entries.size() - 1;
}

namespace {

std::vector<HVStrategy> locals_with_canonical_value(double value) {
  std::vector<HVStrategy> out;
  const auto setting = ChshSetting::canonical();
  for (auto& s : enumerate_local_strategies()) {
    if (chsh_value(s, setting) == value) out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

HVEnsemble critical_ensemble() {
  const double nonlocal = std::numbers::sqrt2 - 1.0;
  std::array<int, kGridSize> ones{};
  ones.fill(+1);

  HVEnsemble e;
  e.entries.push_back({build_pr_nonlocal(+1, ones, Party::alice), nonlocal / 2.0});
  e.entries.push_back({build_pr_nonlocal(+1, ones, Party::bob), nonlocal / 2.0});

  auto locals = locals_with_canonical_value(-2.0);
  const double local_share = (1.0 - nonlocal) / static_cast<double>(locals.size());
  for (auto& s : locals) e.entries.push_back({std::move(s), local_share});
  return e;
}

HVEnsemble local_only_ensemble() {
  HVEnsemble e;
  auto locals = locals_with_canonical_value(-2.0);
  const double share = 1.0 / static_cast<double>(locals.size());
  for (auto& s : locals) e.entries.push_back({std::move(s), share});
  return e;
}

double min_nonlocal_fraction(double target_chsh_abs) {
  if (target_chsh_abs < 2.0 || target_chsh_abs > 4.0) {
    throw std::domain_error("target CHSH magnitude must lie in [2, 4]");
  }
  return (target_chsh_abs - 2.0) / 2.0;
}

}  // namespace monoqkd
