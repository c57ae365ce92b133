#include "doctest.h"
#include "oracles.hpp"
#include "ugo/cfrac.hpp"
#include "ugo/errors.hpp"
#include "ugo/orders.hpp"

using namespace ugo;

namespace {

bool fundamental_by_definition(std::int64_t d) {
  auto squarefree = [](std::int64_t m) {
    for (const auto& [p, e] : oracle::trial_factor(m)) {
      if (e > 1) return false;
    }
    return true;
  };
  const std::int64_t r4 = ((d % 4) + 4) % 4;
  if (r4 == 1) return d != 1 && squarefree(d);
  if (r4 != 0) return false;
  const std::int64_t m = d / 4;
  const std::int64_t r = ((m % 4) + 4) % 4;
  return (r == 2 || r == 3) && squarefree(m);
}

bool is_ug_discriminant(std::int64_t d) {
  for (std::int64_t r : {4, -4}) {
    const std::int64_t s = d + r;
    if (s < 0) continue;
    const std::int64_t n = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(s))));
    if (n * n == s && !(r == 4 && n == 2)) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("discriminant validity") {
  for (std::int64_t d = -200; d <= 200; ++d) {
    const std::int64_t r = ((d % 4) + 4) % 4;
    const auto root = static_cast<std::int64_t>(std::llround(std::sqrt(static_cast<double>(d < 0 ? 0 : d))));
    const bool square = d >= 0 && root * root == d;
    REQUIRE(is_discriminant(d) == ((r == 0 || r == 1) && !square));
  }
}

TEST_CASE("decompose recovers conductor and fundamental discriminant") {
  for (std::int64_t d = -20000; d <= 20000; ++d) {
    if (!is_discriminant(d)) {
      REQUIRE_THROWS_AS(decompose(d), ValidationError);
      continue;
    }
    const auto od = decompose(d);
    REQUIRE(od.conductor * od.conductor * od.delta0 == d);
    REQUIRE(fundamental_by_definition(od.delta0));
    REQUIRE(is_fundamental_discriminant(d) == fundamental_by_definition(d));
    REQUIRE((od.sign == OrderSign::real) == (d > 0));
    REQUIRE((od.delta0 == od.radicand() || od.delta0 == 4 * od.radicand()));
  }
  CHECK(decompose(68640).conductor == 2);
  CHECK(decompose(68640).delta0 == 17160);
  CHECK(decompose(-12).delta0 == -3);
}

TEST_CASE("unit-generated discriminants") {
  CHECK(unit_generated_discriminant({Family::plus, 0}) == -4);
  CHECK(unit_generated_discriminant({Family::plus, 1}) == -3);
  CHECK(unit_generated_discriminant({Family::plus, 3}) == 5);
  CHECK(unit_generated_discriminant({Family::minus, 1}) == 5);
  CHECK(unit_generated_discriminant({Family::minus, 2}) == 8);
  CHECK_THROWS_AS(unit_generated_discriminant({Family::plus, 2}), ValidationError);
  CHECK_THROWS_AS(unit_generated_discriminant({Family::minus, 0}), ValidationError);

  const auto five = classify_unit_generated(5);
  REQUIRE(five.size() == 2);
  CHECK(five[0] == UnitGeneratedParam{Family::plus, 3});
  CHECK(five[1] == UnitGeneratedParam{Family::minus, 1});
  for (std::int64_t d = -4; d <= 50000; ++d) {
    if (!is_discriminant(d)) continue;
    const auto ps = classify_unit_generated(d);
    REQUIRE((!ps.empty()) == is_ug_discriminant(d));
    for (const auto& p : ps) REQUIRE(unit_generated_discriminant(p) == d);
    if (d != 5) REQUIRE(ps.size() <= 1);
  }
}

TEST_CASE("generating unit has the family's norm") {
  for (std::int64_t n = 3; n <= 300; ++n) {
    for (Family fam : {Family::plus, Family::minus}) {
      const auto u = generating_unit({fam, n});
      REQUIRE(u.t == n);
      REQUIRE(u.u == 1);
      REQUIRE(u.norm == (fam == Family::plus ? 1 : -1));
      REQUIRE(u.t * u.t - u.u * u.u * u.delta == 4 * u.norm);
    }
  }
}

TEST_CASE("powers of the fundamental unit") {
  CHECK(power_order(5, 1) == 5);
  CHECK(power_order(5, 2) == 5);
  CHECK(power_order(5, 3) == 20);
  CHECK(power_order(5, 6) == 320);  // eps^6 = 9 + 4 sqrt 5
  for (std::int64_t d0 = 5; d0 <= 300; ++d0) {
    if (!fundamental_by_definition(d0)) continue;
    const auto eps = oracle::pell_search(d0, 2000000);
    if (!eps) continue;
    const auto p1 = fundamental_unit_power(d0, 1);
    REQUIRE(static_cast<std::int64_t>(p1.t) == eps->t);
    REQUIRE(static_cast<std::int64_t>(p1.f) == eps->u);
    const auto p2 = fundamental_unit_power(d0, 2);
    // eps^2 = ((t^2 + u^2 d0) / 2 + t u sqrt(d0)) / 2
    REQUIRE(static_cast<std::int64_t>(p2.t) == (eps->t * eps->t + eps->u * eps->u * d0) / 2);
    REQUIRE(static_cast<std::int64_t>(p2.f) == eps->t * eps->u);
  }
}

TEST_CASE("conductor local factor") {
  for (std::int64_t d0 : {5LL, 8LL, 12LL, 13LL, 21LL, -3LL, -4LL, 17160LL}) {
    for (std::int64_t f = 1; f <= 200; ++f) {
      long double prod = static_cast<long double>(f);
      for (const auto& [p, e] : oracle::trial_factor(f)) prod *= 1.0L - oracle::kronecker(d0, p) / static_cast<long double>(p);
      REQUIRE(conductor_local_factor(d0, f) == std::llround(prod));
    }
  }
}

TEST_CASE("Richaud-Degert classification") {
  CHECK(richaud_degert_rows(5).size() == 3);
  CHECK(richaud_degert_rows(24).empty());
  CHECK(richaud_degert_classify(5)->row == 1);
  for (std::int64_t d0 = 5; d0 <= 200000; ++d0) {
    if (!fundamental_by_definition(d0)) continue;
    const auto rows = richaud_degert_rows(d0);
    // Every maximal unit-generated order, and every odd delta0 whose
    // conductor-2 order is unit-generated, is of narrow Richaud-Degert type.
    // (Even delta0 such as 24 can have a unit-generated conductor-2 order
    // without being of narrow type: 96 = 10^2 - 4.)
    if (is_ug_discriminant(d0) || (d0 % 2 == 1 && is_ug_discriminant(4 * d0))) REQUIRE_MESSAGE(!rows.empty(), d0);
    if (d0 != 5) REQUIRE(rows.size() <= 1);
    for (const auto& rd : rows) {
      const std::int64_t ug = rd_unit_generated_discriminant(rd);
      REQUIRE((ug == d0 || ug == 4 * d0));
      REQUIRE(is_ug_discriminant(ug));
      REQUIRE(rd.conductor_of_ug_order * rd.conductor_of_ug_order * d0 == ug);
    }
  }
}
