#include "ugo/intarith.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <mutex>
#include <numbers>
#include <numeric>

#include "ugo/errors.hpp"

namespace ugo::intarith {

namespace {

// Primes below 2^16, enough to strip small factors before rho takes over.
const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    constexpr std::uint32_t kBound = 1u << 16;
    std::vector<bool> composite(kBound, false);
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 2; i < kBound; ++i) {
      if (composite[i]) continue;
      out.push_back(i);
      for (std::uint64_t j = std::uint64_t{i} * i; j < kBound; j += i) composite[j] = true;
    }
    return out;
  }();
  return primes;
}

bool strong_probable_prime(std::uint64_t n, std::uint64_t base) {
  base %= n;
  if (base == 0) return true;
  std::uint64_t d = n - 1;
  int s = std::countr_zero(d);
  d >>= s;
  std::uint64_t x = powmod(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

std::uint64_t brent_rho(std::uint64_t n, std::uint64_t c) {
  if (n % 2 == 0) return 2;
  auto f = [&](std::uint64_t x) { return (mulmod(x, x, n) + c) % n; };
  std::uint64_t y = 2, x = 2, q = 1, g = 1, ys = 2;
  std::uint64_t r = 1;
  constexpr std::uint64_t kBatch = 128;
  while (g == 1) {
    x = y;
    for (std::uint64_t i = 0; i < r; ++i) y = f(y);
    std::uint64_t k = 0;
    while (k < r && g == 1) {
      ys = y;
      const std::uint64_t lim = std::min(kBatch, r - k);
      for (std::uint64_t i = 0; i < lim; ++i) {
        y = f(y);
        q = mulmod(q, x > y ? x - y : y - x, n);
      }
      g = std::gcd(q, n);
      k += kBatch;
    }
    r *= 2;
  }
  if (g == n) {
    do {
      ys = f(ys);
      g = std::gcd(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return g;
}

void factor_large(std::uint64_t n, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  for (std::uint64_t c = 1;; ++c) {
    std::uint64_t d = brent_rho(n, c);
    if (d != n && d != 1) {
      factor_large(d, out);
      factor_large(n / d, out);
      return;
    }
  }
}

Factorization from_primes(int sign, std::vector<std::uint64_t> primes) {
  std::sort(primes.begin(), primes.end());
  Factorization f;
  f.sign = sign;
  for (std::uint64_t p : primes) {
    if (!f.factors.empty() && f.factors.back().p == p) {
      ++f.factors.back().e;
    } else {
      f.factors.push_back({p, 1});
    }
  }
  return f;
}

}  // namespace

std::int64_t Factorization::value() const {
  i128 v = sign;
  for (const auto& [p, e] : factors) {
    for (int i = 0; i < e; ++i) {
      v *= static_cast<i128>(p);
      if (v > kMaxInput || v < -kMaxInput) throw OverflowError("factorization value exceeds 2^62");
    }
  }
  return static_cast<std::int64_t>(v);
}

int Factorization::exponent(std::uint64_t p) const {
  for (const auto& pp : factors) {
    if (pp.p == p) return pp.e;
  }
  return 0;
}

std::string Factorization::to_string() const {
  std::string s = sign < 0 ? "-" : "";
  if (factors.empty()) return s + "1";
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i) s += "*";
    s += std::to_string(factors[i].p);
    if (factors[i].e > 1) s += "^" + std::to_string(factors[i].e);
  }
  return s;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<u128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

bool is_prime(std::uint64_t m) {
  if (m < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (m % p == 0) return m == p;
  }
  if (m < 41 * 41) return true;
  // Bases proven sufficient for every n < 2^64.
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    if (!strong_probable_prime(m, a)) return false;
  }
  return true;
}

Factorization factor(std::int64_t m) {
  if (m < 1 || m > kMaxInput) throw RangeError("factor: input must lie in [1, 2^62], got " + std::to_string(m));
  std::uint64_t n = static_cast<std::uint64_t>(m);
  std::vector<std::uint64_t> primes;
  std::uint64_t last = 2;
  for (std::uint32_t p : small_primes()) {
    last = p;
    if (std::uint64_t{p} * p > n) break;
    while (n % p == 0) {
      primes.push_back(p);
      n /= p;
    }
  }
  if (n > 1) {
    if (n < last * last) {
      primes.push_back(n);
    } else {
      factor_large(n, primes);
    }
  }
  return from_primes(1, std::move(primes));
}

int omega(std::int64_t m) { return static_cast<int>(factor(m).factors.size()); }

std::int64_t euler_phi(std::int64_t f) {
  std::int64_t phi = f;
  for (const auto& [p, e] : factor(f).factors) {
    phi = phi / static_cast<std::int64_t>(p) * static_cast<std::int64_t>(p - 1);
  }
  return phi;
}

double rosser_schoenfeld_ell(std::int64_t n) {
  if (n < 3) throw DomainError("rosser_schoenfeld_ell: requires n >= 3");
  const double ll = std::log(std::log(static_cast<double>(n)));
  return std::exp(std::numbers::egamma) * ll + 5.0 / (2.0 * ll);
}

int kronecker_symbol(std::int64_t a, std::int64_t n) {
  if (n == 0) throw DomainError("kronecker_symbol: n must be nonzero");
  static constexpr int kTwo[8] = {0, 1, 0, -1, 0, -1, 0, 1};
  int k = 1;
  std::uint64_t un;
  if (n < 0) {
    un = static_cast<std::uint64_t>(-(n + 1)) + 1;
    if (a < 0) k = -1;
  } else {
    un = static_cast<std::uint64_t>(n);
  }
  if (un % 2 == 0) {
    if (a % 2 == 0) return 0;
    int v = std::countr_zero(un);
    un >>= v;
    if (v & 1) k *= kTwo[a & 7];
  }
  // Jacobi symbol (a | un), un odd positive.
  std::uint64_t ua = static_cast<std::uint64_t>(floor_mod(static_cast<i128>(a), static_cast<i128>(un)));
  while (ua != 0) {
    int v = std::countr_zero(ua);
    ua >>= v;
    if (v & 1) k *= kTwo[un & 7];
    if (ua & un & 2) k = -k;
    std::uint64_t r = ua;
    ua = un % r;
    un = r;
  }
  return un == 1 ? k : 0;
}

SquarefreeDecomposition squarefree_decomposition(std::int64_t m) {
  if (m < 1) throw RangeError("squarefree_decomposition: m must be positive");
  SquarefreeDecomposition d;
  for (const auto& [p, e] : factor(m).factors) {
    const auto ip = static_cast<std::int64_t>(p);
    if (e & 1) d.squarefree *= ip;
    for (int i = 0; i < e / 2; ++i) d.root *= ip;
  }
  return d;
}

bool is_squarefree(std::int64_t m) {
  for (const auto& pp : factor(m).factors) {
    if (pp.e > 1) return false;
  }
  return true;
}

std::int64_t isqrt(std::int64_t m) {
  if (m < 0) throw DomainError("isqrt of a negative number");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(m)));
  while (r > 0 && static_cast<i128>(r) * r > m) --r;
  while (static_cast<i128>(r + 1) * (r + 1) <= m) ++r;
  return r;
}

bool is_square(std::int64_t m) {
  if (m < 0) return false;
  const std::int64_t r = isqrt(m);
  return r * r == m;
}

std::vector<std::int64_t> divisors(const Factorization& f) {
  std::vector<std::int64_t> out{1};
  for (const auto& [p, e] : f.factors) {
    const std::size_t base = out.size();
    std::int64_t pk = 1;
    for (int k = 1; k <= e; ++k) {
      pk *= static_cast<std::int64_t>(p);
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

i128 ext_gcd(i128 a, i128 b, i128& x, i128& y) {
  i128 old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    const i128 q = old_r / r;
    i128 tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) {
    old_r = -old_r;
    old_s = -old_s;
    old_t = -old_t;
  }
  x = old_s;
  y = old_t;
  return old_r;
}

i128 checked_mul(i128 a, i128 b) {
  i128 r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit multiplication overflow");
  return r;
}

i128 checked_add(i128 a, i128 b) {
  i128 r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit addition overflow");
  return r;
}

std::int64_t narrow(i128 v) {
  if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("value does not fit in 64 bits");
  return static_cast<std::int64_t>(v);
}

std::string to_string(i128 v) {
  if (v == 0) return "0";
  const bool neg = v < 0;
  u128 u = neg ? static_cast<u128>(-(v + 1)) + 1 : static_cast<u128>(v);
  std::string s;
  while (u) {
    s.push_back(static_cast<char>('0' + static_cast<int>(u % 10)));
    u /= 10;
  }
  if (neg) s.push_back('-');
  std::reverse(s.begin(), s.end());
  return s;
}

FactorSieve::FactorSieve(std::uint64_t limit) : limit_(limit) {
  if (limit > kMaxLimit) throw RangeError("FactorSieve limit too large");
  spf_.assign(limit + 1, 0);
  for (std::uint64_t i = 2; i * i <= limit; ++i) {
    if (spf_[i] != 0) continue;
    for (std::uint64_t j = i * i; j <= limit; j += i) {
      if (spf_[j] == 0) spf_[j] = static_cast<std::uint16_t>(i);
    }
  }
}

Factorization FactorSieve::factor(std::uint64_t m) const {
  Factorization f;
  while (m > 1) {
    std::uint64_t p = spf_[m];
    if (p == 0) p = m;
    int e = 0;
    do {
      m /= p;
      ++e;
    } while (m % p == 0);
    f.factors.push_back({p, e});
  }
  return f;
}

std::shared_ptr<const FactorSieve> FactorSieve::shared(std::uint64_t min_limit, std::uint64_t cap) {
  static std::mutex mu;
  static std::shared_ptr<const FactorSieve> current;
  if (min_limit > cap) return nullptr;
  std::lock_guard lock(mu);
  if (!current || current->limit() < min_limit) {
    std::uint64_t lim = std::max<std::uint64_t>(min_limit, std::uint64_t{1} << 16);
    if (current) lim = std::max(lim, std::min(cap, current->limit() * 2));
    current = std::make_shared<const FactorSieve>(std::min(lim, cap));
  }
  return current;
}

Factorization factor_with(const FactorSieve* sieve, std::int64_t m) {
  if (sieve && m >= 1 && sieve->covers(static_cast<std::uint64_t>(m))) return sieve->factor(static_cast<std::uint64_t>(m));
  return factor(m);
}

}  // namespace ugo::intarith
