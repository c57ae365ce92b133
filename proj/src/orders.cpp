#include "ugo/orders.hpp"

#include <cmath>
#include <string>

#include "ugo/cfrac.hpp"
#include "ugo/errors.hpp"
#include "ugo/intarith.hpp"

namespace ugo {

using intarith::i128;

std::string_view to_string(Family f) { return f == Family::plus ? "plus" : "minus"; }

std::string QuadUnit::to_string() const {
  return "(" + intarith::to_string(t) + " + " + intarith::to_string(u) + "*sqrt(" + std::to_string(delta) +
         "))/2";
}

bool is_discriminant(std::int64_t delta) {
  if (delta == 0 || delta > intarith::kMaxInput || delta < -intarith::kMaxInput) return false;
  const std::int64_t r = intarith::floor_mod(delta, 4);
  if (r != 0 && r != 1) return false;
  return !intarith::is_square(delta);
}

OrderDescriptor decompose(std::int64_t delta) {
  if (!is_discriminant(delta)) throw ValidationError("not a quadratic discriminant: " + std::to_string(delta));
  const std::int64_t mag = delta < 0 ? -delta : delta;
  const auto sd = intarith::squarefree_decomposition(mag);
  const std::int64_t d0 = delta < 0 ? -sd.squarefree : sd.squarefree;
  OrderDescriptor out;
  out.delta = delta;
  out.sign = delta < 0 ? OrderSign::imaginary : OrderSign::real;
  if (intarith::floor_mod(d0, 4) == 1) {
    out.delta0 = d0;
    out.conductor = sd.root;
  } else {
    out.delta0 = 4 * d0;
    out.conductor = sd.root / 2;
  }
  return out;
}

bool is_fundamental_discriminant(std::int64_t delta) {
  return is_discriminant(delta) && decompose(delta).conductor == 1;
}

std::int64_t unit_generated_discriminant(UnitGeneratedParam param) {
  const std::int64_t n = param.n;
  if (n < 0) throw ValidationError("unit-generated parameter n must be non-negative");
  const i128 sq = static_cast<i128>(n) * n;
  const i128 d = param.family == Family::plus ? sq - 4 : sq + 4;
  if (d > intarith::kMaxInput) throw RangeError("n^2 -+ 4 exceeds 2^62");
  if (!is_discriminant(static_cast<std::int64_t>(d))) {
    throw ValidationError("n = " + std::to_string(n) + " in family " + std::string(to_string(param.family)) +
                          " does not give a discriminant");
  }
  return static_cast<std::int64_t>(d);
}

std::vector<UnitGeneratedParam> classify_unit_generated(std::int64_t delta) {
  std::vector<UnitGeneratedParam> out;
  if (!is_discriminant(delta)) return out;
  if (delta + 4 >= 0 && intarith::is_square(delta + 4)) {
    const std::int64_t n = intarith::isqrt(delta + 4);
    if (n != 2) out.push_back({Family::plus, n});
  }
  if (delta - 4 >= 1 && intarith::is_square(delta - 4)) {
    out.push_back({Family::minus, intarith::isqrt(delta - 4)});
  }
  return out;
}

QuadUnit generating_unit(UnitGeneratedParam param) {
  const std::int64_t delta = unit_generated_discriminant(param);
  if (delta < 0) throw DomainError("generating_unit: imaginary orders are generated by roots of unity");
  QuadUnit u;
  u.t = param.n;
  u.u = 1;
  u.delta = delta;
  u.norm = param.family == Family::plus ? 1 : -1;
  const long double n = static_cast<long double>(param.n);
  u.regulator = std::log((n + std::sqrt(static_cast<long double>(delta))) / 2.0L);
  return u;
}

UnitPower fundamental_unit_power(std::int64_t delta0, int j) {
  if (delta0 <= 0 || !is_fundamental_discriminant(delta0)) {
    throw ValidationError("power_order: " + std::to_string(delta0) + " is not a positive fundamental discriminant");
  }
  if (j < 1) throw DomainError("power_order: exponent must be >= 1");
  const QuadUnit eps = fundamental_unit(delta0);
  // eps^{k+1} = trace * eps^k - norm * eps^{k-1}, coefficientwise.
  i128 t_prev = 2, f_prev = 0;
  i128 t_cur = eps.t, f_cur = eps.u;
  for (int k = 1; k < j; ++k) {
    const i128 t_next = intarith::checked_add(intarith::checked_mul(eps.t, t_cur), -eps.norm * t_prev);
    const i128 f_next = intarith::checked_add(intarith::checked_mul(eps.t, f_cur), -eps.norm * f_prev);
    t_prev = t_cur;
    f_prev = f_cur;
    t_cur = t_next;
    f_cur = f_next;
  }
  return {t_cur, f_cur};
}

std::int64_t power_order(std::int64_t delta0, int j) {
  const UnitPower p = fundamental_unit_power(delta0, j);
  const i128 d = intarith::checked_mul(intarith::checked_mul(p.f, p.f), delta0);
  if (d > intarith::kMaxInput) throw OverflowError("power_order: discriminant exceeds 2^62");
  return static_cast<std::int64_t>(d);
}

std::int64_t conductor_local_factor(std::int64_t delta0, std::int64_t f) {
  if (f < 1) throw DomainError("conductor must be positive");
  i128 out = 1;
  for (const auto& [p, e] : intarith::factor(f).factors) {
    const auto ip = static_cast<std::int64_t>(p);
    i128 term = ip - intarith::kronecker_symbol(delta0, ip);
    for (int k = 1; k < e; ++k) term *= ip;
    out = intarith::checked_mul(out, term);
  }
  return intarith::narrow(out);
}

std::vector<RDClass> richaud_degert_rows(std::int64_t delta0) {
  std::vector<RDClass> out;
  if (delta0 <= 0 || !is_fundamental_discriminant(delta0)) return out;
  const std::int64_t d0 = delta0 % 4 == 0 ? delta0 / 4 : delta0;
  struct RowShape {
    int row;
    std::int64_t r;
    bool m_even;
  };
  static constexpr RowShape kRows[] = {{1, -4, false}, {2, -1, true}, {3, 1, true}, {4, 1, false}, {5, 4, false}};
  for (const auto& shape : kRows) {
    const std::int64_t msq = d0 - shape.r;
    if (msq < 1 || !intarith::is_square(msq)) continue;
    const std::int64_t m = intarith::isqrt(msq);
    if ((m % 2 == 0) != shape.m_even) continue;
    out.push_back({shape.row, m, shape.row == 3 ? 2 : 1});
  }
  return out;
}

std::optional<RDClass> richaud_degert_classify(std::int64_t delta0) {
  auto rows = richaud_degert_rows(delta0);
  if (rows.empty()) return std::nullopt;
  // delta0 = 5 fits rows 1, 3 and 5; row 1 reports the unit-generated maximal order.
  return rows.front();
}

std::int64_t rd_unit_generated_discriminant(const RDClass& rd) {
  const std::int64_t m = rd.m;
  switch (rd.row) {
    case 1: return m * m - 4;
    case 2: return 4 * m * m - 4;
    case 3:
    case 4: return 4 * m * m + 4;
    case 5: return m * m + 4;
    default: throw DomainError("unknown Richaud-Degert row");
  }
}

}  // namespace ugo
