#pragma once

#include <cstdint>
#include <compare>
#include <string>
#include <vector>

#include "ugo/intarith.hpp"

namespace ugo {

/// The form a x^2 + b xy + c y^2.
struct BQF {
  std::int64_t a = 0;
  std::int64_t b = 0;
  std::int64_t c = 0;

  intarith::i128 discriminant() const {
    return static_cast<intarith::i128>(b) * b - static_cast<intarith::i128>(4) * a * c;
  }
  bool is_primitive() const;
  std::string to_string() const;
  friend auto operator<=>(const BQF&, const BQF&) = default;
};

enum class GroupFlavor { narrow, wide };

/// Finite abelian group Z/d1 x ... x Z/dk with d1 | d2 | ... | dk, all di >= 2.
struct ClassGroupStructure {
  std::int64_t order = 1;
  std::vector<std::int64_t> divisors;
  GroupFlavor flavor = GroupFlavor::narrow;

  bool is_consistent() const;
  /// "2x2x4"; the trivial group is "1".
  std::string to_string() const;
  /// Z/2Z x Z/4Z style.
  std::string to_pretty() const;
  /// Number of elements of order dividing 2.
  std::int64_t two_rank_size() const;
  friend bool operator==(const ClassGroupStructure&, const ClassGroupStructure&) = default;
};

/// (1, b0, (b0^2 - delta) / 4), b0 = delta mod 2.
BQF principal_form(std::int64_t delta);

/// delta > 0: 0 < b < sqrt(delta) and |sqrt(delta) - 2|a|| < b.
/// delta < 0: positive definite with |b| <= a <= c, b >= 0 if |b| = a or a = c.
bool is_reduced(const BQF& f, std::int64_t delta);

/// One reduction step (a, b, c) -> (c, r, (r^2 - delta) / 4c), r = -b mod 2c.
/// Maps reduced forms of delta > 0 to reduced forms.
BQF rho(const BQF& f, std::int64_t delta);

/// A reduced form properly equivalent to f.
BQF reduce(const BQF& f, std::int64_t delta);
/// Same, for forms with coefficients beyond 64 bits (results of composition).
BQF reduce_wide(intarith::i128 a, intarith::i128 b, intarith::i128 c, std::int64_t delta);

/// All primitive reduced forms, sorted ascending. Uses the sieve for the
/// divisor search when it covers delta / 4.
std::vector<BQF> enumerate_reduced(std::int64_t delta, const intarith::FactorSieve* sieve = nullptr);

/// Dirichlet composition of two primitive forms, reduced.
BQF compose_forms(const BQF& f, const BQF& g, std::int64_t delta);

/// The form class group of one discriminant: reduced forms grouped into
/// rho-cycles (or singletons for delta < 0), one class per cycle.
/// Classes are numbered by their canonical representative, the
/// lexicographically least reduced form of the cycle.
class FormClassGroup {
 public:
  explicit FormClassGroup(std::int64_t delta, const intarith::FactorSieve* sieve = nullptr);

  std::int64_t delta() const { return delta_; }
  std::int64_t narrow_class_number() const { return static_cast<std::int64_t>(reps_.size()); }
  std::int64_t class_number() const;

  const std::vector<BQF>& reduced_forms() const { return forms_; }
  const std::vector<BQF>& representatives() const { return reps_; }
  /// Reduced forms of one class, in rho order starting at the representative.
  std::vector<BQF> cycle(int id) const;

  int class_of(const BQF& f) const;
  int principal() const { return principal_; }
  /// Class of (-1, b0, (delta - b0^2) / 4); principal exactly when a unit of
  /// norm -1 exists.
  int negative_principal() const { return tau_; }
  bool has_unit_of_norm_minus_one() const { return tau_ == principal_; }

  int compose(int x, int y) const;
  int inverse(int x) const;
  int power(int x, std::int64_t e) const;

  ClassGroupStructure narrow_structure() const;
  ClassGroupStructure wide_structure() const;
  /// |Cl+[2]|
  std::int64_t narrow_two_torsion() const;

 private:
  int lookup(const BQF& reduced) const;
  ClassGroupStructure quotient_structure(bool mod_tau) const;

  std::int64_t delta_;
  std::vector<BQF> forms_;
  std::vector<int> cycle_id_;
  std::vector<BQF> reps_;
  int principal_ = 0;
  int tau_ = 0;
};

/// Reduced forms grouped by class; delta < 0 gives singletons.
std::vector<std::vector<BQF>> narrow_classes(std::int64_t delta);
/// Class of the composite, as its canonical representative.
BQF compose(const BQF& f, const BQF& g, std::int64_t delta);
ClassGroupStructure narrow_class_group(std::int64_t delta);
/// Cl+ / <tau>. Cross-checks tau against the unit norm from the continued
/// fraction and throws ConsistencyError on disagreement.
ClassGroupStructure wide_class_group(std::int64_t delta);
std::int64_t class_number(std::int64_t delta);
std::int64_t narrow_class_number(std::int64_t delta);

}  // namespace ugo
