#include "doctest.h"
#include "oracles.hpp"
#include "ugo/errors.hpp"
#include "ugo/forms.hpp"
#include "ugo/relations.hpp"

using namespace ugo;
using intarith::i128;

namespace {

// Least j with eps0^j in the order of conductor f, by exact powering.
std::optional<std::int64_t> brute_unit_index(std::int64_t d0, std::int64_t f) {
  const auto eps = oracle::pell_search(d0, 10000000);
  if (!eps) return std::nullopt;
  i128 t = eps->t, u = eps->u;
  for (std::int64_t j = 1;; ++j) {
    if (u % f == 0 && (t - (u / f) * f * f * d0) % 2 == 0) return j;
    const i128 nt = (eps->t * t + eps->u * u * d0) / 2;
    const i128 nu = (eps->t * u + eps->u * t) / 2;
    t = nt;
    u = nu;
    if (t > (static_cast<i128>(1) << 90)) return std::nullopt;
  }
}

}  // namespace

TEST_CASE("conductor formula against analytic h0 and brute unit index") {
  int compared = 0;
  for (std::int64_t d0 = 5; d0 <= 120; ++d0) {
    if (!is_fundamental_discriminant(d0)) continue;
    const auto h0_opt = oracle::analytic_class_number(d0);
    if (!h0_opt) continue;
    const std::int64_t h0 = *h0_opt;
    for (std::int64_t f = 2; f <= 9; ++f) {
      std::int64_t local = f;
      for (const auto& [p, e] : oracle::trial_factor(f)) local = local / p * (p - oracle::kronecker(d0, p));
      const auto j_opt = brute_unit_index(d0, f);
      if (!j_opt) continue;
      const std::int64_t j = *j_opt;
      ++compared;
      REQUIRE((h0 * local) % j == 0);
      const std::int64_t expected = h0 * local / j;
      REQUIRE_MESSAGE(class_number(f * f * d0) == expected, d0 << " f=" << f);
      const auto rep = class_number_via_conductor(d0, f);
      REQUIRE(rep.h0 == h0);
      REQUIRE(rep.local_factor == local);
      REQUIRE(rep.unit_index == j);
      REQUIRE(rep.is_integral());
      REQUIRE(rep.h_predicted() == expected);
    }
  }
  CHECK(compared > 150);
}

TEST_CASE("verify_conductor_formula on a range") {
  for (std::int64_t d = 5; d <= 40000; ++d) {
    if (!is_discriminant(d)) continue;
    std::string diag;
    REQUIRE_MESSAGE(verify_conductor_formula(d, &diag), d << " " << diag);
  }
  const auto rep = class_number_via_conductor(17160, 2);
  CHECK(rep.h_predicted() == 16);
  CHECK(!rep.to_string().empty());
}

TEST_CASE("trend statistic is deterministic across thread counts") {
  std::vector<UnitGeneratedParam> params;
  for (std::int64_t n = 20; n <= 220; ++n) {
    params.push_back({Family::plus, n});
    params.push_back({Family::minus, n});
  }
  const auto a = hua_trend(params, 1);
  const auto b = hua_trend(params, 4);
  REQUIRE(a.samples.size() == params.size());
  REQUIRE(a.samples.size() == b.samples.size());
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    REQUIRE(a.samples[i].h == b.samples[i].h);
    REQUIRE(a.samples[i].h == class_number(unit_generated_discriminant({a.samples[i].family, a.samples[i].n})));
    if (i > 0) {
      const auto& p = a.samples[i - 1];
      const auto& q = a.samples[i];
      REQUIRE((p.family < q.family || (p.family == q.family && p.n < q.n)));
    }
  }
  REQUIRE(a.mean == b.mean);
  REQUIRE(a.min <= a.mean);
  REQUIRE(a.mean <= a.max);
}

TEST_CASE("bounded family statistic") {
  const auto s = bounded_family_statistic(1000, 3, 2000, 2);
  REQUIRE(!s.samples.empty());
  for (const auto& x : s.samples) {
    REQUIRE(x.delta0 <= 1000);
    REQUIRE(decompose(unit_generated_discriminant({x.family, x.n})).delta0 == x.delta0);
    REQUIRE(x.ratio <= s.max);
  }
  const auto t = bounded_family_statistic(1000, 3, 2000, 1);
  REQUIRE(t.samples.size() == s.samples.size());
  REQUIRE(t.mean == s.mean);
}
