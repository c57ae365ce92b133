#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ugo {

enum class VerifySuite { parity, genus, conductor, cf, group_axioms };

std::string_view to_string(VerifySuite s);
VerifySuite parse_verify_suite(std::string_view s);

struct VerifyBounds {
  std::int64_t max_delta = 0;  ///< 0 selects the suite default
  std::int64_t max_n = 0;      ///< 0 selects the suite default
  int samples = 20;            ///< random triples per discriminant (group-axioms)
  std::uint64_t seed = 1;
  int jobs = 1;
};

struct VerifyReport {
  VerifySuite suite = VerifySuite::parity;
  std::int64_t checked = 0;
  std::int64_t failures = 0;
  std::vector<std::string> counterexamples;  ///< first few, in ascending order

  bool passed() const { return failures == 0; }
  std::string summary() const;
};

/// parity:       Halter-Koch predicates vs enumerated h, h+ (default delta <= 1e5)
/// genus:        genus order vs |Cl+[2]|, mu - 1 <= omega, forced parities (1e5, n <= 2000)
/// conductor:    conductor formula for every non-maximal order (1e6)
/// cf:           parametric expansions and Pell norms (n <= 500)
/// group-axioms: identity, inverses, associativity, h+/h and the family law (1e4, n <= 2000)
VerifyReport run_verify(VerifySuite suite, const VerifyBounds& bounds);

}  // namespace ugo
