#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "indep_bounds/combinatorics.hpp"
#include "indep_bounds/errors.hpp"
#include "indep_bounds/parameters.hpp"

namespace indep_bounds {

enum class TheoremId { T1 = 1, T2, T3, T4, T5, T6, T7, T8 };
enum class BoundKind { Lower, Upper };

inline constexpr std::array<TheoremId, 8> kAllTheorems = {
    TheoremId::T1, TheoremId::T2, TheoremId::T3, TheoremId::T4,
    TheoremId::T5, TheoremId::T6, TheoremId::T7, TheoremId::T8};

inline std::string to_string(TheoremId id) { return "T" + std::to_string(static_cast<int>(id)); }

inline std::optional<TheoremId> parse_theorem(std::string_view s) {
  if (s.size() == 2 && (s[0] == 'T' || s[0] == 't') && s[1] >= '1' && s[1] <= '8')
    return static_cast<TheoremId>(s[1] - '0');
  return std::nullopt;
}

inline BoundKind kind_of(TheoremId id) {
  return static_cast<int>(id) <= 3 ? BoundKind::Upper : BoundKind::Lower;
}

inline std::string_view to_string(BoundKind k) { return k == BoundKind::Lower ? "lower" : "upper"; }

/// Internals of the case-2 flower bound for the chosen split.
struct FlowerInternals {
  int q = 0;
  int d = 0;
  int d1 = 0;
  int d2 = 0;
  int n1 = 0;
  int k2 = 0;
  int r = 0;
};

struct Witness {
  std::optional<PartitionTable> table;
  std::optional<int> t1;
  std::optional<int> s;
  std::optional<int> q;
  std::optional<FlowerInternals> flower;
  std::optional<BigCount> h;  // family size substituted for h(...)
};

/// Outcome of evaluating one theorem on one instance. When the hypotheses
/// fail, `conditions_met` is false, `failure`/`reason` say why and no value
/// is attached.
struct BoundResult {
  TheoremId theorem = TheoremId::T1;
  BoundKind kind = BoundKind::Lower;
  bool conditions_met = false;
  std::optional<ErrorCode> failure;
  std::string reason;
  std::optional<BigCount> value;  // floor of `exact` when the bound is rational
  std::optional<Rational> exact;
  std::optional<BigCount> capped;  // upper bounds: min(value, |V|)
  std::vector<std::string> notes;
  Witness witness;

  static BoundResult unmet(TheoremId id, ErrorCode code, std::string why) {
    BoundResult r;
    r.theorem = id;
    r.kind = kind_of(id);
    r.failure = code;
    r.reason = std::move(why);
    return r;
  }

  static BoundResult met(TheoremId id, BigCount v) {
    BoundResult r;
    r.theorem = id;
    r.kind = kind_of(id);
    r.conditions_met = true;
    r.value = std::move(v);
    return r;
  }
};

}  // namespace indep_bounds
