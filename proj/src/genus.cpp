#include "ugo/genus.hpp"

#include <algorithm>

#include "ugo/errors.hpp"

namespace ugo {

namespace {

struct Shape {
  int e2 = 0;                           // exponent of 2 in |delta|
  std::vector<intarith::PrimePower> odd;  // odd prime powers
  std::int64_t odd_part = 1;
};

Shape shape_of(const intarith::Factorization& fac) {
  Shape s;
  for (const auto& pp : fac.factors) {
    if (pp.p == 2) {
      s.e2 = pp.e;
    } else {
      s.odd.push_back(pp);
      for (int i = 0; i < pp.e; ++i) s.odd_part *= static_cast<std::int64_t>(pp.p);
    }
  }
  return s;
}

intarith::Factorization factor_delta(std::int64_t delta) {
  if (!is_discriminant(delta)) throw ValidationError("not a quadratic discriminant: " + std::to_string(delta));
  return intarith::factor(delta < 0 ? -delta : delta);
}

void require_positive(std::int64_t delta) {
  if (delta <= 0) throw DomainError("parity predicates need delta > 0");
}

}  // namespace

std::string_view to_string(Parity p) { return p == Parity::odd ? "odd" : "even"; }

int mu(std::int64_t delta, const intarith::Factorization& fac) {
  const int r = static_cast<int>(shape_of(fac).odd.size());
  const std::int64_t m4 = intarith::floor_mod(delta, 4);
  const std::int64_t m16 = intarith::floor_mod(delta, 16);
  const std::int64_t m32 = intarith::floor_mod(delta, 32);
  if (m4 == 1 || m16 == 4) return r;
  if (m16 == 8 || m16 == 12 || m32 == 16) return r + 1;
  return r + 2;
}

int mu(std::int64_t delta) { return mu(delta, factor_delta(delta)); }

std::int64_t genus_group_order(std::int64_t delta) { return std::int64_t{1} << (mu(delta) - 1); }

bool is_two_torsion(const ClassGroupStructure& g) {
  return std::all_of(g.divisors.begin(), g.divisors.end(), [](std::int64_t d) { return d == 2; });
}

bool one_class_per_genus(std::int64_t delta) {
  const ClassGroupStructure g = narrow_class_group(delta);
  const bool by_structure = is_two_torsion(g);
  const bool by_count = g.order == genus_group_order(delta);
  if (by_structure != by_count) {
    throw ConsistencyError("delta " + std::to_string(delta) + ": Cl+ = " + g.to_string() +
                           " disagrees with genus order " + std::to_string(genus_group_order(delta)));
  }
  return by_structure;
}

GenusData genus_data(std::int64_t delta) {
  const auto fac = factor_delta(delta);
  GenusData d;
  d.mu = mu(delta, fac);
  d.genus_order = std::int64_t{1} << (d.mu - 1);
  d.omega = static_cast<int>(fac.factors.size());
  const auto sv = intarith::FactorSieve::shared(static_cast<std::uint64_t>((delta < 0 ? -delta : delta) / 4 + 1));
  const FormClassGroup g(delta, sv.get());
  d.two_torsion_narrow = is_two_torsion(g.narrow_structure());
  d.two_torsion_wide = is_two_torsion(g.wide_structure());
  return d;
}

Parity narrow_parity_predicate(std::int64_t delta, const intarith::Factorization& fac) {
  require_positive(delta);
  if (delta == 8) return Parity::odd;
  const Shape s = shape_of(fac);
  if ((s.e2 == 0 || s.e2 == 2) && s.odd.size() == 1 && s.odd[0].p % 4 == 1 && s.odd[0].e % 2 == 1) {
    return Parity::odd;
  }
  return Parity::even;
}

Parity narrow_parity_predicate(std::int64_t delta) { return narrow_parity_predicate(delta, factor_delta(delta)); }

Parity wide_parity_predicate(std::int64_t delta, const intarith::Factorization& fac) {
  if (narrow_parity_predicate(delta, fac) == Parity::odd) return Parity::odd;
  if (delta == 32) return Parity::odd;
  const Shape s = shape_of(fac);
  if ((s.e2 == 0 || s.e2 == 2) && s.odd.size() == 2) {
    const auto& x = s.odd[0];
    const auto& y = s.odd[1];
    const bool not_both_even = x.e % 2 == 1 || y.e % 2 == 1;
    const bool some_three = x.p % 4 == 3 || y.p % 4 == 3;
    if (not_both_even && some_three && s.odd_part % 4 == 1) return Parity::odd;
  }
  if (s.e2 == 2 && s.odd.size() == 1 && s.odd[0].e % 2 == 1 && delta % 16 == 12) return Parity::odd;
  if ((s.e2 == 3 || s.e2 == 4) && s.odd.size() == 1 && s.odd[0].p % 4 == 3) return Parity::odd;
  // Two shapes with odd h that the usual case list leaves out.
  if (s.e2 == 4 && s.odd.size() == 1 && s.odd[0].p % 4 == 1 && s.odd[0].e % 2 == 1) return Parity::odd;
  if (s.odd.empty() && s.e2 % 2 == 1 && s.e2 >= 5) return Parity::odd;
  return Parity::even;
}

Parity wide_parity_predicate(std::int64_t delta) { return wide_parity_predicate(delta, factor_delta(delta)); }

Parity fundamental_parity_predicate(std::int64_t delta) {
  if (!is_fundamental_discriminant(delta)) {
    throw ValidationError(std::to_string(delta) + " is not a fundamental discriminant");
  }
  if (delta == -4 || delta == 8 || delta == -8) return Parity::odd;
  const Shape s = shape_of(factor_delta(delta));
  if (s.e2 == 0 && s.odd.size() == 1) {
    const auto p = static_cast<std::int64_t>(s.odd[0].p);
    if (delta == (p % 4 == 1 ? p : -p)) return Parity::odd;
  }
  if (delta > 0 && (s.e2 == 2 || s.e2 == 3) && s.odd.size() == 1 && s.odd[0].p % 4 == 3) return Parity::odd;
  if (delta > 0 && s.e2 == 0 && s.odd.size() == 2 && s.odd[0].p % 4 == 3 && s.odd[1].p % 4 == 3) {
    return Parity::odd;
  }
  return Parity::even;
}

std::optional<ForcedParity> theorem_parity_checks(std::int64_t n, Family family) {
  if (n % 4 != 2) return std::nullopt;
  if (family == Family::minus && n >= 6) return ForcedParity::must_be_even;
  if (family == Family::plus && n >= 10) return ForcedParity::must_be_even;
  return std::nullopt;
}

}  // namespace ugo
