#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ugo/orders.hpp"
#include "ugo/quad_unit.hpp"

namespace ugo {

/// (P + sqrt(D)) / Q with Q | (D - P^2).
struct QuadIrrational {
  std::int64_t P = 0;
  std::int64_t Q = 1;
  std::int64_t D = 2;

  /// Validates D and Q, rescaling (P, Q, D) when Q does not divide D - P^2.
  static QuadIrrational make(std::int64_t P, std::int64_t Q, std::int64_t D);
  long double value() const;
};

enum class CFKind { regular, minus };

/// Eventually periodic continued fraction. Regular: a0 + 1/(a1 + 1/(...)).
/// Minus (Hirzebruch-Jung): a0 - 1/(a1 - 1/(...)), a_i >= 2 for i >= 1.
struct CFExpansion {
  CFKind kind = CFKind::regular;
  std::vector<std::int64_t> preperiod;
  std::vector<std::int64_t> period;

  /// Same value written with the minimal period and shortest preperiod.
  CFExpansion canonical() const;
  /// Partial quotient a_i.
  std::int64_t term(std::size_t i) const;
  std::string to_string() const;
  friend bool operator==(const CFExpansion&, const CFExpansion&) = default;
};

CFExpansion cf_expand(const QuadIrrational& x);
CFExpansion hj_cf_expand(const QuadIrrational& x);

/// Evaluates the first `terms` partial quotients (tail truncated).
long double evaluate_cf(const CFExpansion& cf, std::size_t terms);

/// The smallest unit > 1 of the order of discriminant delta > 0.
/// Throws OverflowError when (t, u) leave the 128-bit range.
QuadUnit fundamental_unit(std::int64_t delta);

/// Norm of the fundamental unit, from the parity of the period. Never overflows.
int unit_norm(std::int64_t delta);

/// Length of the period of the reduced irrational (b + sqrt(delta)) / 2.
std::int64_t unit_period_length(std::int64_t delta);

/// log of the fundamental unit, summed over the complete quotients of one period.
long double regulator(std::int64_t delta);

/// Norm, period length and regulator from a single period walk.
struct UnitSummary {
  int norm = 1;
  std::int64_t period_length = 0;
  long double regulator = 0;
};
UnitSummary unit_summary(std::int64_t delta);

/// (t mod m, u mod m) of the fundamental unit, exact for any period length.
struct UnitResidue {
  std::int64_t t = 0;
  std::int64_t u = 0;
};
UnitResidue fundamental_unit_mod(std::int64_t delta, std::int64_t m);

/// Index [O_{delta0}^x : O_delta^x] = the least j with eps_{delta0}^j in O_delta.
std::int64_t unit_index(std::int64_t delta0, std::int64_t delta);

/// The displayed parametric expansions of (n + sqrt(n^2 -+ 4)) / 2.
CFExpansion parametric_cf(UnitGeneratedParam param, CFKind kind);
bool verify_parametric_cf(UnitGeneratedParam param);

}  // namespace ugo
