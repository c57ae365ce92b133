#include "ugo/forms.hpp"

#include <algorithm>
#include <numeric>

#include "ugo/cfrac.hpp"
#include "ugo/errors.hpp"
#include "ugo/orders.hpp"

namespace ugo {

using intarith::i128;

namespace {

i128 abs128(i128 v) { return v < 0 ? -v : v; }

i128 gcd128(i128 a, i128 b) {
  a = abs128(a);
  b = abs128(b);
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

void require_discriminant(std::int64_t delta) {
  if (!is_discriminant(delta)) throw ValidationError("not a quadratic discriminant: " + std::to_string(delta));
}

void require_form_of(const BQF& f, std::int64_t delta) {
  if (f.discriminant() != delta) {
    throw ValidationError("form " + f.to_string() + " does not have discriminant " + std::to_string(delta));
  }
}

struct WideForm {
  i128 a, b, c;
};

// r = -b mod 2|c|, in (s - 2|c|, s] when |c| <= s and in (-|c|, |c|] otherwise.
WideForm rho_step(const WideForm& f, std::int64_t delta, i128 s) {
  const i128 ac = abs128(f.c);
  const i128 two_c = 2 * ac;
  const i128 r = ac <= s ? s - intarith::floor_mod(s + f.b, two_c) : ac - intarith::floor_mod(ac + f.b, two_c);
  return {f.c, r, (r * r - delta) / (4 * f.c)};
}

bool reduced_indefinite(i128 a, i128 b, i128 s) {
  const i128 aa = 2 * abs128(a);
  return b > 0 && b <= s && s - b < aa && aa <= s + b;
}

WideForm reduce_definite(WideForm f) {
  for (;;) {
    // b into (-a, a]
    const i128 two_a = 2 * f.a;
    const i128 r = f.a - intarith::floor_mod(f.a - f.b, two_a);
    if (r != f.b) {
      const i128 k = (r - f.b) / two_a;
      f.c = f.c + k * f.b + k * k * f.a;
      f.b = r;
    }
    if (f.a > f.c) {
      f = {f.c, -f.b, f.a};
      continue;
    }
    if (f.a == f.c && f.b < 0) f.b = -f.b;
    return f;
  }
}

BQF narrow_form(const WideForm& f) { return {intarith::narrow(f.a), intarith::narrow(f.b), intarith::narrow(f.c)}; }

// Divisors of n (ascending not required) into out.
void divisors_into(std::uint64_t n, const intarith::FactorSieve* sieve, std::vector<std::int64_t>& out) {
  out.clear();
  out.push_back(1);
  if (sieve && sieve->covers(n)) {
    while (n > 1) {
      const std::uint64_t p = sieve->smallest_prime_factor(n);
      int e = 0;
      while (n % p == 0) {
        n /= p;
        ++e;
      }
      const std::size_t base = out.size();
      std::int64_t pk = 1;
      for (int k = 1; k <= e; ++k) {
        pk *= static_cast<std::int64_t>(p);
        for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
      }
    }
    return;
  }
  out = intarith::divisors(intarith::factor(static_cast<std::int64_t>(n)));
}

std::int64_t gcd3(std::int64_t a, std::int64_t b, std::int64_t c) {
  return std::gcd(std::gcd(a < 0 ? -a : a, b < 0 ? -b : b), c < 0 ? -c : c);
}

}  // namespace

bool BQF::is_primitive() const { return gcd3(a, b, c) == 1; }

std::string BQF::to_string() const {
  return "(" + std::to_string(a) + ", " + std::to_string(b) + ", " + std::to_string(c) + ")";
}

bool ClassGroupStructure::is_consistent() const {
  std::int64_t prod = 1;
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    if (divisors[i] < 2) return false;
    if (i > 0 && divisors[i] % divisors[i - 1] != 0) return false;
    prod *= divisors[i];
  }
  return prod == order;
}

std::string ClassGroupStructure::to_string() const {
  if (divisors.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(divisors[i]);
  }
  return s;
}

std::string ClassGroupStructure::to_pretty() const {
  if (divisors.empty()) return "1";
  std::string s;
  for (std::size_t i = 0; i < divisors.size();) {
    std::size_t j = i;
    while (j < divisors.size() && divisors[j] == divisors[i]) ++j;
    if (!s.empty()) s += " x ";
    s += "Z/" + std::to_string(divisors[i]) + "Z";
    if (j - i > 1) s += "^" + std::to_string(j - i);
    i = j;
  }
  return s;
}

std::int64_t ClassGroupStructure::two_rank_size() const {
  std::int64_t n = 1;
  for (std::int64_t d : divisors) {
    if (d % 2 == 0) n *= 2;
  }
  return n;
}

BQF principal_form(std::int64_t delta) {
  require_discriminant(delta);
  const std::int64_t b0 = intarith::floor_mod(delta, 2);
  return {1, b0, (b0 * b0 - delta) / 4};
}

bool is_reduced(const BQF& f, std::int64_t delta) {
  require_form_of(f, delta);
  if (delta > 0) return reduced_indefinite(f.a, f.b, intarith::isqrt(delta));
  if (f.a <= 0) return false;
  const std::int64_t ab = f.b < 0 ? -f.b : f.b;
  if (!(ab <= f.a && f.a <= f.c)) return false;
  if ((ab == f.a || f.a == f.c) && f.b < 0) return false;
  return true;
}

BQF rho(const BQF& f, std::int64_t delta) {
  if (delta <= 0) throw DomainError("rho is defined for positive discriminants");
  if (!is_reduced(f, delta)) throw DomainError("rho expects a reduced form, got " + f.to_string());
  return narrow_form(rho_step({f.a, f.b, f.c}, delta, intarith::isqrt(delta)));
}

BQF reduce_wide(i128 a, i128 b, i128 c, std::int64_t delta) {
  require_discriminant(delta);
  if (b * b - 4 * a * c != delta) throw ValidationError("reduce: discriminant mismatch");
  if (gcd128(gcd128(a, b), c) != 1) throw ValidationError("reduce: form is not primitive");
  WideForm f{a, b, c};
  if (delta < 0) {
    if (a < 0) throw DomainError("reduce: negative definite form");
    return narrow_form(reduce_definite(f));
  }
  const i128 s = intarith::isqrt(delta);
  while (!reduced_indefinite(f.a, f.b, s)) f = rho_step(f, delta, s);
  return narrow_form(f);
}

BQF reduce(const BQF& f, std::int64_t delta) {
  require_form_of(f, delta);
  return reduce_wide(f.a, f.b, f.c, delta);
}

std::vector<BQF> enumerate_reduced(std::int64_t delta, const intarith::FactorSieve* sieve) {
  require_discriminant(delta);
  std::vector<BQF> out;
  if (delta < 0) {
    const std::int64_t m = -delta;
    for (std::int64_t a = 1; 3 * a * a <= m; ++a) {
      for (std::int64_t b = -a + 1; b <= a; ++b) {
        if (((b - delta) & 1) != 0) continue;
        const std::int64_t num = (b * b - delta) / 4;
        if (num % a != 0) continue;
        const std::int64_t c = num / a;
        if (c < a || (c == a && b < 0)) continue;
        if (gcd3(a, b, c) != 1) continue;
        out.push_back({a, b, c});
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  const std::int64_t s = intarith::isqrt(delta);
  std::vector<std::int64_t> divs;
  for (std::int64_t b = (delta & 1) ? 1 : 2; b <= s; b += 2) {
    const std::int64_t n = (delta - b * b) / 4;
    divisors_into(static_cast<std::uint64_t>(n), sieve, divs);
    for (std::int64_t d : divs) {
      const std::int64_t twice = 2 * d;
      if (twice <= s - b || twice > s + b) continue;
      const std::int64_t e = n / d;
      if (gcd3(d, b, e) != 1) continue;
      out.push_back({d, b, -e});
      out.push_back({-d, b, e});
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

BQF compose_forms(const BQF& f, const BQF& g, std::int64_t delta) {
  require_form_of(f, delta);
  require_form_of(g, delta);
  if (!f.is_primitive() || !g.is_primitive()) throw ValidationError("compose: forms must be primitive");
  auto positive = [&](const BQF& x) {
    BQF r = reduce(x, delta);
    if (r.a < 0) r = {r.c, -r.b, r.a};
    return r;
  };
  const BQF x = positive(f), y = positive(g);
  const i128 a1 = x.a, b1 = x.b, a2 = y.a, b2 = y.b;
  const i128 beta = (b1 + b2) / 2;
  i128 x1, y1, x2, y2;
  const i128 g1 = intarith::ext_gcd(a1, a2, x1, y1);
  const i128 e = intarith::ext_gcd(g1, beta, x2, y2);
  const i128 u = x2 * x1, v = x2 * y1, w = y2;
  const i128 a3 = (a1 / e) * (a2 / e);
  const i128 num = u * a1 * b2 + v * a2 * b1 + w * ((b1 * b2 + delta) / 2);
  if (num % e != 0) throw ConsistencyError("compose: non-integral middle coefficient");
  const i128 b3 = intarith::floor_mod(num / e, 2 * a3);
  const i128 cn = b3 * b3 - delta;
  if (cn % (4 * a3) != 0) throw ConsistencyError("compose: composite has the wrong discriminant");
  return reduce_wide(a3, b3, cn / (4 * a3), delta);
}

FormClassGroup::FormClassGroup(std::int64_t delta, const intarith::FactorSieve* sieve)
    : delta_(delta), forms_(enumerate_reduced(delta, sieve)), cycle_id_(forms_.size(), -1) {
  if (delta < 0) {
    for (std::size_t i = 0; i < forms_.size(); ++i) cycle_id_[i] = static_cast<int>(i);
    reps_ = forms_;
  } else {
    const i128 s = intarith::isqrt(delta);
    for (std::size_t i = 0; i < forms_.size(); ++i) {
      if (cycle_id_[i] >= 0) continue;
      const int id = static_cast<int>(reps_.size());
      reps_.push_back(forms_[i]);
      WideForm f{forms_[i].a, forms_[i].b, forms_[i].c};
      std::size_t j = i;
      do {
        cycle_id_[j] = id;
        f = rho_step(f, delta, s);
        const BQF nf = narrow_form(f);
        const auto it = std::lower_bound(forms_.begin(), forms_.end(), nf);
        if (it == forms_.end() || *it != nf) throw ConsistencyError("rho left the reduced set at " + nf.to_string());
        j = static_cast<std::size_t>(it - forms_.begin());
      } while (j != i);
    }
  }
  principal_ = class_of(principal_form(delta));
  if (delta > 0) {
    const std::int64_t b0 = delta & 1;
    tau_ = lookup(reduce_wide(-1, b0, (delta - b0 * b0) / 4, delta));
  } else {
    tau_ = principal_;
  }
}

std::int64_t FormClassGroup::class_number() const {
  const std::int64_t hp = narrow_class_number();
  return has_unit_of_norm_minus_one() ? hp : hp / 2;
}

int FormClassGroup::lookup(const BQF& reduced) const {
  const auto it = std::lower_bound(forms_.begin(), forms_.end(), reduced);
  if (it == forms_.end() || *it != reduced) throw ConsistencyError("reduced form " + reduced.to_string() + " not enumerated");
  return cycle_id_[static_cast<std::size_t>(it - forms_.begin())];
}

int FormClassGroup::class_of(const BQF& f) const { return lookup(reduce(f, delta_)); }

std::vector<BQF> FormClassGroup::cycle(int id) const {
  std::vector<BQF> out{reps_.at(static_cast<std::size_t>(id))};
  if (delta_ < 0) return out;
  for (BQF f = rho(out.front(), delta_); f != out.front(); f = rho(f, delta_)) out.push_back(f);
  return out;
}

int FormClassGroup::compose(int x, int y) const {
  return lookup(compose_forms(reps_.at(static_cast<std::size_t>(x)), reps_.at(static_cast<std::size_t>(y)), delta_));
}

int FormClassGroup::inverse(int x) const {
  const BQF& f = reps_.at(static_cast<std::size_t>(x));
  return class_of({f.a, -f.b, f.c});
}

int FormClassGroup::power(int x, std::int64_t e) const {
  if (e < 0) return power(inverse(x), -e);
  int acc = principal_;
  int base = x;
  while (e) {
    if (e & 1) acc = compose(acc, base);
    e >>= 1;
    if (e) base = compose(base, base);
  }
  return acc;
}

ClassGroupStructure FormClassGroup::quotient_structure(bool mod_tau) const {
  const bool tau_nontrivial = mod_tau && tau_ != principal_;
  const std::int64_t t_size = tau_nontrivial ? 2 : 1;
  ClassGroupStructure out;
  out.flavor = mod_tau ? GroupFlavor::wide : GroupFlavor::narrow;
  out.order = narrow_class_number() / t_size;
  if (out.order == 1) return out;
  const auto in_t = [&](int c) { return c == principal_ || (tau_nontrivial && c == tau_); };
  const int h = static_cast<int>(narrow_class_number());
  // cyclic factor orders per prime, largest first
  std::vector<std::vector<std::int64_t>> per_prime;
  for (const auto& [p_u, v] : intarith::factor(out.order).factors) {
    const auto p = static_cast<std::int64_t>(p_u);
    std::int64_t target = 1;
    for (int i = 0; i < v; ++i) target *= p;
    std::vector<int> cur(static_cast<std::size_t>(h));
    std::iota(cur.begin(), cur.end(), 0);
    std::vector<int> ranks;  // ranks[k-1] = number of factors of order >= p^k
    std::int64_t prev = 1;
    while (prev < target) {
      std::int64_t hits = 0;
      for (int& c : cur) {
        c = power(c, p);
        if (in_t(c)) ++hits;
      }
      const std::int64_t count = hits / t_size;
      int r = 0;
      for (std::int64_t q = count / prev; q > 1; q /= p) ++r;
      if (r == 0) throw ConsistencyError("group structure: p-part stalled for delta " + std::to_string(delta_));
      ranks.push_back(r);
      prev = count;
    }
    std::vector<std::int64_t> orders;
    std::int64_t pk = 1;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      pk *= p;
      const int exact = ranks[k] - (k + 1 < ranks.size() ? ranks[k + 1] : 0);
      for (int i = 0; i < exact; ++i) orders.push_back(pk);
    }
    std::sort(orders.rbegin(), orders.rend());
    per_prime.push_back(std::move(orders));
  }
  std::size_t len = 0;
  for (const auto& o : per_prime) len = std::max(len, o.size());
  out.divisors.assign(len, 1);
  for (const auto& o : per_prime) {
    for (std::size_t i = 0; i < o.size(); ++i) out.divisors[i] *= o[i];
  }
  std::reverse(out.divisors.begin(), out.divisors.end());
  if (!out.is_consistent()) throw ConsistencyError("group structure: inconsistent divisor chain " + out.to_string());
  return out;
}

ClassGroupStructure FormClassGroup::narrow_structure() const { return quotient_structure(false); }

ClassGroupStructure FormClassGroup::wide_structure() const { return quotient_structure(delta_ > 0); }

std::int64_t FormClassGroup::narrow_two_torsion() const {
  std::int64_t n = 0;
  for (int c = 0; c < static_cast<int>(reps_.size()); ++c) {
    if (compose(c, c) == principal_) ++n;
  }
  return n;
}

namespace {

std::shared_ptr<const intarith::FactorSieve> sieve_for(std::int64_t delta) {
  const std::int64_t m = delta < 0 ? -delta : delta;
  return intarith::FactorSieve::shared(static_cast<std::uint64_t>(m / 4 + 1));
}

void cross_check_unit_norm(const FormClassGroup& g) {
  if (g.delta() < 0) return;
  const bool minus_one = unit_norm(g.delta()) == -1;
  if (minus_one != g.has_unit_of_norm_minus_one()) {
    throw ConsistencyError("delta " + std::to_string(g.delta()) + ": negative principal class disagrees with unit norm");
  }
}

}  // namespace

std::vector<std::vector<BQF>> narrow_classes(std::int64_t delta) {
  const auto sv = sieve_for(delta);
  const FormClassGroup g(delta, sv.get());
  std::vector<std::vector<BQF>> out;
  for (int id = 0; id < static_cast<int>(g.narrow_class_number()); ++id) out.push_back(g.cycle(id));
  return out;
}

BQF compose(const BQF& f, const BQF& g, std::int64_t delta) {
  const auto sv = sieve_for(delta);
  const FormClassGroup grp(delta, sv.get());
  return grp.representatives().at(static_cast<std::size_t>(grp.class_of(compose_forms(f, g, delta))));
}

ClassGroupStructure narrow_class_group(std::int64_t delta) {
  const auto sv = sieve_for(delta);
  return FormClassGroup(delta, sv.get()).narrow_structure();
}

ClassGroupStructure wide_class_group(std::int64_t delta) {
  const auto sv = sieve_for(delta);
  const FormClassGroup g(delta, sv.get());
  cross_check_unit_norm(g);
  return g.wide_structure();
}

std::int64_t class_number(std::int64_t delta) {
  const auto sv = sieve_for(delta);
  const FormClassGroup g(delta, sv.get());
  cross_check_unit_norm(g);
  return g.class_number();
}

std::int64_t narrow_class_number(std::int64_t delta) {
  const auto sv = sieve_for(delta);
  return FormClassGroup(delta, sv.get()).narrow_class_number();
}

}  // namespace ugo
