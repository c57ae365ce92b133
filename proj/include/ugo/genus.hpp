#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "ugo/forms.hpp"
#include "ugo/intarith.hpp"
#include "ugo/orders.hpp"

namespace ugo {

struct GenusData {
  int mu = 1;
  std::int64_t genus_order = 1;
  int omega = 0;
  bool two_torsion_wide = false;
  bool two_torsion_narrow = false;
};

enum class Parity { odd, even };
std::string_view to_string(Parity p);

enum class ForcedParity { must_be_even };

/// r, r + 1 or r + 2 by the 2-adic class of delta, r = number of odd primes dividing delta.
int mu(std::int64_t delta);
int mu(std::int64_t delta, const intarith::Factorization& fac);

/// 2^(mu - 1) = |Cl+[2]| = |Cl+ / (Cl+)^2|.
std::int64_t genus_group_order(std::int64_t delta);

bool is_two_torsion(const ClassGroupStructure& g);

/// Cl+ is 2-torsion; checked against h+ = genus_group_order.
bool one_class_per_genus(std::int64_t delta);

/// Full genus record; computes both class groups.
GenusData genus_data(std::int64_t delta);

/// Parity of h+ read off the factorization of delta > 0.
Parity narrow_parity_predicate(std::int64_t delta);
Parity narrow_parity_predicate(std::int64_t delta, const intarith::Factorization& fac);

/// Parity of h read off the factorization of delta > 0. Odd exactly when h+
/// is odd, or delta is one of p^r q^s, 4 p^r q^s (p = 3 mod 4, r or s odd,
/// p^r q^s = 1 mod 4), 4 p^r = 12 mod 16 (r odd), 8 p^r or 16 p^r (p = 3 mod 4),
/// 16 p^r (p = 1 mod 4, r odd), or 2^k (k odd, k >= 5).
Parity wide_parity_predicate(std::int64_t delta);
Parity wide_parity_predicate(std::int64_t delta, const intarith::Factorization& fac);

/// Parity of h for a fundamental discriminant (any sign) from its shape alone.
Parity fundamental_parity_predicate(std::int64_t delta);

/// Forced evenness of h for unit-generated parameters with n = 2 mod 4:
/// minus family from n = 6 on, plus family from n = 10 on (n = 6 gives h = 1).
std::optional<ForcedParity> theorem_parity_checks(std::int64_t n, Family family);

}  // namespace ugo
