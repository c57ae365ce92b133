#include "ugo/cfrac.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "ugo/errors.hpp"
#include "ugo/intarith.hpp"

namespace ugo {

using intarith::i128;

namespace {

constexpr std::size_t kMaxSteps = 50'000'000;

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

// floor((P + sqrt(D)) / Q) for nonsquare D.
std::int64_t floor_quad(std::int64_t P, std::int64_t Q, std::int64_t s) {
  if (Q > 0) return floor_div(P + s, Q);
  return -floor_div(P + s, -Q) - 1;
}

template <typename Step>
CFExpansion expand(const QuadIrrational& x, CFKind kind, Step step) {
  const std::int64_t s = intarith::isqrt(x.D);
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> seen;
  std::vector<std::int64_t> terms;
  std::int64_t P = x.P, Q = x.Q;
  for (std::size_t i = 0; i < kMaxSteps; ++i) {
    auto [it, fresh] = seen.emplace(std::make_pair(P, Q), terms.size());
    if (!fresh) {
      CFExpansion cf;
      cf.kind = kind;
      cf.preperiod.assign(terms.begin(), terms.begin() + static_cast<std::ptrdiff_t>(it->second));
      cf.period.assign(terms.begin() + static_cast<std::ptrdiff_t>(it->second), terms.end());
      return cf;
    }
    terms.push_back(step(P, Q, x.D, s));
  }
  throw OverflowError("continued fraction period exceeds the step budget");
}

// Regular step: a = floor(x), x' = 1 / (x - a).
std::int64_t regular_step(std::int64_t& P, std::int64_t& Q, std::int64_t D, std::int64_t s) {
  const std::int64_t a = floor_quad(P, Q, s);
  const i128 p_next = static_cast<i128>(a) * Q - P;
  const i128 q_next = (static_cast<i128>(D) - p_next * p_next) / Q;
  P = intarith::narrow(p_next);
  Q = intarith::narrow(q_next);
  return a;
}

// Minus step: a = floor(x) + 1, x' = 1 / (a - x).
std::int64_t minus_step(std::int64_t& P, std::int64_t& Q, std::int64_t D, std::int64_t s) {
  const std::int64_t a = floor_quad(P, Q, s) + 1;
  const i128 p_next = static_cast<i128>(a) * Q - P;
  const i128 q_next = (p_next * p_next - static_cast<i128>(D)) / Q;
  P = intarith::narrow(p_next);
  Q = intarith::narrow(q_next);
  return a;
}

void require_real_discriminant(std::int64_t delta, const char* who) {
  if (delta <= 0 || !is_discriminant(delta)) {
    throw ValidationError(std::string(who) + ": " + std::to_string(delta) + " is not a positive discriminant");
  }
}

// Walks one period of the reduced irrational (b + sqrt(delta)) / 2, where b is
// the largest integer below sqrt(delta) of the same parity as delta. Calls
// visit(a, P, Q) with the partial quotient and the state it was taken from.
template <typename Visit>
std::int64_t walk_unit_period(std::int64_t delta, Visit visit) {
  const std::int64_t s = intarith::isqrt(delta);
  const std::int64_t p0 = (s - delta) % 2 == 0 ? s : s - 1;
  std::int64_t P = p0, Q = 2;
  std::int64_t len = 0;
  do {
    const std::int64_t P_before = P, Q_before = Q;
    const std::int64_t a = regular_step(P, Q, delta, s);
    visit(a, P_before, Q_before);
    if (++len > static_cast<std::int64_t>(kMaxSteps)) throw OverflowError("unit period exceeds the step budget");
  } while (P != p0 || Q != 2);
  return len;
}

std::int64_t start_numerator(std::int64_t delta) {
  const std::int64_t s = intarith::isqrt(delta);
  return (s - delta) % 2 == 0 ? s : s - 1;
}

}  // namespace

QuadIrrational QuadIrrational::make(std::int64_t P, std::int64_t Q, std::int64_t D) {
  if (Q == 0) throw DomainError("QuadIrrational: Q must be nonzero");
  if (D <= 0 || intarith::is_square(D)) throw DomainError("QuadIrrational: D must be a positive nonsquare");
  const i128 num = static_cast<i128>(D) - static_cast<i128>(P) * P;
  if (num % Q == 0) return {P, Q, D};
  const i128 aq = Q < 0 ? -static_cast<i128>(Q) : static_cast<i128>(Q);
  return {intarith::narrow(intarith::checked_mul(P, aq)), intarith::narrow(intarith::checked_mul(Q, aq)),
          intarith::narrow(intarith::checked_mul(intarith::checked_mul(D, aq), aq))};
}

long double QuadIrrational::value() const {
  return (static_cast<long double>(P) + std::sqrt(static_cast<long double>(D))) / static_cast<long double>(Q);
}

CFExpansion CFExpansion::canonical() const {
  CFExpansion out = *this;
  // Minimal root of the period.
  const std::size_t n = out.period.size();
  for (std::size_t d = 1; d <= n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = out.period[i] == out.period[i - d];
    if (ok) {
      out.period.resize(d);
      break;
    }
  }
  // Fold a preperiod tail that repeats the end of the period.
  while (!out.preperiod.empty() && out.preperiod.back() == out.period.back()) {
    std::rotate(out.period.rbegin(), out.period.rbegin() + 1, out.period.rend());
    out.preperiod.pop_back();
  }
  return out;
}

std::int64_t CFExpansion::term(std::size_t i) const {
  if (i < preperiod.size()) return preperiod[i];
  return period[(i - preperiod.size()) % period.size()];
}

std::string CFExpansion::to_string() const {
  std::string s = "[";
  for (std::size_t i = 0; i < preperiod.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(preperiod[i]);
  }
  if (!preperiod.empty()) s += "; ";
  s += "overline{";
  for (std::size_t i = 0; i < period.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(period[i]);
  }
  s += "}]";
  s += kind == CFKind::regular ? "+" : "-";
  return s;
}

CFExpansion cf_expand(const QuadIrrational& x) { return expand(x, CFKind::regular, regular_step); }

CFExpansion hj_cf_expand(const QuadIrrational& x) { return expand(x, CFKind::minus, minus_step); }

long double evaluate_cf(const CFExpansion& cf, std::size_t terms) {
  if (terms == 0) return 0;
  long double v = static_cast<long double>(cf.term(terms - 1));
  for (std::size_t i = terms - 1; i-- > 0;) {
    const long double a = static_cast<long double>(cf.term(i));
    v = cf.kind == CFKind::regular ? a + 1.0L / v : a - 1.0L / v;
  }
  return v;
}

QuadUnit fundamental_unit(std::int64_t delta) {
  require_real_discriminant(delta, "fundamental_unit");
  // eps = q_{l-1} x0 + q_{l-2} for the convergent denominators q_k of x0.
  i128 q_prev = 1, q_cur = 0;  // q_{-2}, q_{-1}
  const std::int64_t len = walk_unit_period(delta, [&](std::int64_t a, std::int64_t, std::int64_t) {
    const i128 q_next = intarith::checked_add(intarith::checked_mul(a, q_cur), q_prev);
    q_prev = q_cur;
    q_cur = q_next;
  });
  QuadUnit eps;
  eps.delta = delta;
  eps.u = q_cur;
  eps.t = intarith::checked_add(intarith::checked_mul(q_cur, start_numerator(delta)), intarith::checked_mul(2, q_prev));
  eps.norm = len % 2 == 0 ? 1 : -1;
  eps.regulator = regulator(delta);
  return eps;
}

int unit_norm(std::int64_t delta) { return unit_period_length(delta) % 2 == 0 ? 1 : -1; }

std::int64_t unit_period_length(std::int64_t delta) {
  require_real_discriminant(delta, "unit_period_length");
  return walk_unit_period(delta, [](std::int64_t, std::int64_t, std::int64_t) {});
}

long double regulator(std::int64_t delta) {
  require_real_discriminant(delta, "regulator");
  const long double root = std::sqrt(static_cast<long double>(delta));
  long double sum = 0;
  walk_unit_period(delta, [&](std::int64_t, std::int64_t P, std::int64_t Q) {
    sum += std::log((static_cast<long double>(P) + root) / static_cast<long double>(Q));
  });
  return sum;
}

UnitSummary unit_summary(std::int64_t delta) {
  require_real_discriminant(delta, "unit_summary");
  const long double root = std::sqrt(static_cast<long double>(delta));
  UnitSummary out;
  out.period_length = walk_unit_period(delta, [&](std::int64_t, std::int64_t P, std::int64_t Q) {
    out.regulator += std::log((static_cast<long double>(P) + root) / static_cast<long double>(Q));
  });
  out.norm = out.period_length % 2 == 0 ? 1 : -1;
  return out;
}

UnitResidue fundamental_unit_mod(std::int64_t delta, std::int64_t m) {
  require_real_discriminant(delta, "fundamental_unit_mod");
  if (m < 1) throw DomainError("fundamental_unit_mod: modulus must be positive");
  i128 q_prev = 1 % m, q_cur = 0;
  walk_unit_period(delta, [&](std::int64_t a, std::int64_t, std::int64_t) {
    const i128 q_next = (static_cast<i128>(a % m) * q_cur + q_prev) % m;
    q_prev = q_cur;
    q_cur = q_next;
  });
  const i128 t = (q_cur * (start_numerator(delta) % m) + 2 * q_prev) % m;
  return {static_cast<std::int64_t>(t), static_cast<std::int64_t>(q_cur)};
}

std::int64_t unit_index(std::int64_t delta0, std::int64_t delta) {
  require_real_discriminant(delta, "unit_index");
  const OrderDescriptor od = decompose(delta);
  if (od.delta0 != delta0) {
    throw ValidationError("unit_index: " + std::to_string(delta) + " lies over " + std::to_string(od.delta0) +
                          ", not " + std::to_string(delta0));
  }
  const std::int64_t f = od.conductor;
  if (f == 1) return 1;
  // eps0 = x + y w in the basis (1, w), w = (delta0 + sqrt(delta0)) / 2, all mod f.
  const UnitResidue r = fundamental_unit_mod(delta0, 2 * f);
  const i128 twice_x = intarith::floor_mod(static_cast<i128>(r.t) - static_cast<i128>(r.u) * (delta0 % (2 * f)), static_cast<i128>(2 * f));
  struct Elt {
    i128 x, y;
  };
  const Elt eps{(twice_x / 2) % f, r.u % f};
  // w^2 = A w - B
  const i128 A = delta0 % f;
  const i128 B = ((static_cast<i128>(delta0) * delta0 - delta0) / 4) % f;
  const i128 fm = f;
  auto mul = [&](const Elt& p, const Elt& q) {
    const i128 yy = p.y * q.y % fm;
    return Elt{intarith::floor_mod(p.x * q.x - yy * B, fm), intarith::floor_mod(p.x * q.y + p.y * q.x + yy * A, fm)};
  };
  auto pow = [&](Elt base, std::int64_t e) {
    Elt acc{1 % f, 0};
    while (e) {
      if (e & 1) acc = mul(acc, base);
      base = mul(base, base);
      e >>= 1;
    }
    return acc;
  };
  // The index divides the order of (O_{delta0}/f)^x / (Z/f)^x.
  const std::int64_t group_order = conductor_local_factor(delta0, f);
  for (std::int64_t d : intarith::divisors(intarith::factor(group_order))) {
    if (pow(eps, d).y == 0) return d;
  }
  throw ConsistencyError("unit_index: no power of the fundamental unit lies in the order " + std::to_string(delta));
}

CFExpansion parametric_cf(UnitGeneratedParam param, CFKind kind) {
  const std::int64_t n = param.n;
  CFExpansion cf;
  cf.kind = kind;
  if (param.family == Family::plus) {
    if (n < 3) throw DomainError("parametric_cf: plus family needs n >= 3");
    if (kind == CFKind::regular) {
      cf.preperiod = {n - 1};
      cf.period = {1, n - 2};
    } else {
      cf.period = {n};
    }
  } else {
    if (n < 1) throw DomainError("parametric_cf: minus family needs n >= 1");
    if (kind == CFKind::regular) {
      cf.period = {n};
    } else {
      cf.preperiod = {n + 1};
      cf.period.assign(static_cast<std::size_t>(n - 1), 2);
      cf.period.push_back(n + 2);
    }
  }
  return cf;
}

bool verify_parametric_cf(UnitGeneratedParam param) {
  const std::int64_t delta = unit_generated_discriminant(param);
  if (delta < 0) return false;
  const QuadIrrational eps = QuadIrrational::make(param.n, 2, delta);
  return cf_expand(eps).canonical() == parametric_cf(param, CFKind::regular).canonical() &&
         hj_cf_expand(eps).canonical() == parametric_cf(param, CFKind::minus).canonical();
}

}  // namespace ugo
