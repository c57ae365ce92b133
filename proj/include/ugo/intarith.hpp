#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace ugo::intarith {

using i128 = __int128;
using u128 = unsigned __int128;

/// Largest magnitude accepted by the exact routines.
inline constexpr std::int64_t kMaxInput = std::int64_t{1} << 62;

struct PrimePower {
  std::uint64_t p = 0;
  int e = 0;
  friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// Prime decomposition sign * prod p^e, primes strictly increasing.
struct Factorization {
  int sign = 1;
  std::vector<PrimePower> factors;

  /// Reconstructs the factored integer (throws OverflowError past 2^62).
  std::int64_t value() const;
  /// Exponent of p, 0 when p does not divide.
  int exponent(std::uint64_t p) const;
  std::string to_string() const;
  friend bool operator==(const Factorization&, const Factorization&) = default;
};

Factorization factor(std::int64_t m);
bool is_prime(std::uint64_t m);
int omega(std::int64_t m);
std::int64_t euler_phi(std::int64_t f);

/// e^gamma log log n + 5 / (2 log log n); phi(f) > f / ell(f) for f >= 3.
double rosser_schoenfeld_ell(std::int64_t n);

/// Kronecker symbol (a | n); n == 0 is a DomainError.
int kronecker_symbol(std::int64_t a, std::int64_t n);

struct SquarefreeDecomposition {
  std::int64_t squarefree = 1;
  std::int64_t root = 1;  // m = squarefree * root^2
};
SquarefreeDecomposition squarefree_decomposition(std::int64_t m);
bool is_squarefree(std::int64_t m);

/// floor(sqrt(m)) for m >= 0.
std::int64_t isqrt(std::int64_t m);
bool is_square(std::int64_t m);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m);

/// All positive divisors of the factored number, ascending.
std::vector<std::int64_t> divisors(const Factorization& f);

/// a mod m in [0, |m|).
inline std::int64_t floor_mod(std::int64_t a, std::int64_t m) {
  if (m < 0) m = -m;
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}
inline i128 floor_mod(i128 a, i128 m) {
  if (m < 0) m = -m;
  i128 r = a % m;
  return r < 0 ? r + m : r;
}

/// Extended gcd: returns g = gcd(|a|, |b|) >= 0 with a*x + b*y = g.
i128 ext_gcd(i128 a, i128 b, i128& x, i128& y);

i128 checked_mul(i128 a, i128 b);
i128 checked_add(i128 a, i128 b);
/// Narrow to int64 or throw OverflowError.
std::int64_t narrow(i128 v);

std::string to_string(i128 v);

/// Smallest-prime-factor table: entry is 0 for primes, else the smallest
/// prime factor (always < 65536 inside the supported limit).
class FactorSieve {
 public:
  static constexpr std::uint64_t kMaxLimit = std::uint64_t{1} << 31;

  explicit FactorSieve(std::uint64_t limit);

  std::uint64_t limit() const { return limit_; }
  bool covers(std::uint64_t m) const { return m <= limit_; }
  /// Factorization of 1 <= m <= limit().
  Factorization factor(std::uint64_t m) const;
  /// Smallest prime factor of 2 <= m <= limit().
  std::uint64_t smallest_prime_factor(std::uint64_t m) const {
    const std::uint64_t p = spf_[m];
    return p == 0 ? m : p;
  }

  /// Process-wide table covering at least `min_limit`; grown on demand.
  /// Returns nullptr if min_limit exceeds `cap`.
  static std::shared_ptr<const FactorSieve> shared(std::uint64_t min_limit,
                                                   std::uint64_t cap = std::uint64_t{1} << 27);

 private:
  std::uint64_t limit_;
  std::vector<std::uint16_t> spf_;
};

/// factor() that uses the sieve when it covers m.
Factorization factor_with(const FactorSieve* sieve, std::int64_t m);

}  // namespace ugo::intarith
