#include "ugo/verify.hpp"

#include <algorithm>
#include <exception>
#include <functional>
#include <optional>
#include <random>

#include "ugo/cfrac.hpp"
#include "ugo/errors.hpp"
#include "ugo/forms.hpp"
#include "ugo/genus.hpp"
#include "ugo/orders.hpp"
#include "ugo/relations.hpp"

namespace ugo {

namespace {

using Check = std::function<std::optional<std::string>(std::int64_t)>;

constexpr std::size_t kMaxCounterexamples = 10;

void run_checks(const std::vector<std::int64_t>& inputs, const Check& check, int jobs, VerifyReport& rep) {
  const auto count = static_cast<std::int64_t>(inputs.size());
  std::vector<std::optional<std::string>> out(inputs.size());
#pragma omp parallel for schedule(dynamic, 16) num_threads(std::max(1, jobs))
  for (std::int64_t i = 0; i < count; ++i) {
    const std::int64_t x = inputs[static_cast<std::size_t>(i)];
    try {
      out[static_cast<std::size_t>(i)] = check(x);
    } catch (const std::exception& e) {
      out[static_cast<std::size_t>(i)] = std::to_string(x) + ": " + e.what();
    }
  }
  rep.checked += count;
  for (auto& o : out) {
    if (!o) continue;
    ++rep.failures;
    if (rep.counterexamples.size() < kMaxCounterexamples) rep.counterexamples.push_back(std::move(*o));
  }
}

std::vector<std::int64_t> positive_discriminants(std::int64_t max_delta) {
  std::vector<std::int64_t> v;
  for (std::int64_t d = 5; d <= max_delta; ++d) {
    if (is_discriminant(d)) v.push_back(d);
  }
  return v;
}

bool odd(std::int64_t h) { return h % 2 != 0; }

std::shared_ptr<const intarith::FactorSieve> sieve_up_to(std::int64_t max_delta) {
  return intarith::FactorSieve::shared(static_cast<std::uint64_t>(max_delta / 4 + 1));
}

void verify_parity(const VerifyBounds& b, VerifyReport& rep) {
  const std::int64_t max_delta = b.max_delta ? b.max_delta : 100000;
  const auto sieve = sieve_up_to(max_delta);
  run_checks(
      positive_discriminants(max_delta),
      [&](std::int64_t d) -> std::optional<std::string> {
        const FormClassGroup g(d, sieve.get());
        const auto fac = intarith::factor_with(sieve.get(), d);
        const std::int64_t hp = g.narrow_class_number(), h = g.class_number();
        const UnitSummary us = unit_summary(d);
        if ((us.norm == -1) != g.has_unit_of_norm_minus_one()) return std::to_string(d) + ": unit norm mismatch";
        const Parity np = narrow_parity_predicate(d, fac);
        const Parity wp = wide_parity_predicate(d, fac);
        if ((np == Parity::odd) != odd(hp)) {
          return std::to_string(d) + ": narrow predicate " + std::string(to_string(np)) + ", h+ = " + std::to_string(hp);
        }
        if ((wp == Parity::odd) != odd(h)) {
          return std::to_string(d) + ": wide predicate " + std::string(to_string(wp)) + ", h = " + std::to_string(h);
        }
        if (np == Parity::odd && us.norm != -1) return std::to_string(d) + ": odd h+ but unit norm +1";
        if (is_fundamental_discriminant(d) && (fundamental_parity_predicate(d) == Parity::odd) != odd(h)) {
          return std::to_string(d) + ": fundamental predicate disagrees with h = " + std::to_string(h);
        }
        return std::nullopt;
      },
      b.jobs, rep);
  std::vector<std::int64_t> negatives;
  for (std::int64_t d = -3; d >= -std::min<std::int64_t>(max_delta, 20000); --d) {
    if (is_fundamental_discriminant(d)) negatives.push_back(d);
  }
  run_checks(
      negatives,
      [&](std::int64_t d) -> std::optional<std::string> {
        const std::int64_t h = FormClassGroup(d, sieve.get()).class_number();
        if ((fundamental_parity_predicate(d) == Parity::odd) != odd(h)) {
          return std::to_string(d) + ": fundamental predicate disagrees with h = " + std::to_string(h);
        }
        return std::nullopt;
      },
      b.jobs, rep);
}

void verify_genus(const VerifyBounds& b, VerifyReport& rep) {
  const std::int64_t max_delta = b.max_delta ? b.max_delta : 100000;
  const std::int64_t max_n = b.max_n ? b.max_n : 2000;
  const auto sieve = sieve_up_to(std::max(max_delta, max_n * max_n + 4));
  run_checks(
      positive_discriminants(max_delta),
      [&](std::int64_t d) -> std::optional<std::string> {
        const FormClassGroup g(d, sieve.get());
        const std::int64_t go = genus_group_order(d);
        const std::int64_t t2 = g.narrow_two_torsion();
        if (go != t2) return std::to_string(d) + ": genus order " + std::to_string(go) + " but |Cl+[2]| = " + std::to_string(t2);
        const ClassGroupStructure cs = g.narrow_structure();
        if (cs.two_rank_size() != t2) return std::to_string(d) + ": structure " + cs.to_string() + " has the wrong 2-rank";
        if (is_two_torsion(cs) != (g.narrow_class_number() == go)) return std::to_string(d) + ": one-class-per-genus mismatch";
        return std::nullopt;
      },
      b.jobs, rep);
  std::vector<std::int64_t> all;
  for (std::int64_t d = -max_delta; d <= max_delta; ++d) {
    if (is_discriminant(d)) all.push_back(d);
  }
  run_checks(
      all,
      [&](std::int64_t d) -> std::optional<std::string> {
        const auto fac = intarith::factor(d < 0 ? -d : d);
        if (mu(d, fac) - 1 > static_cast<int>(fac.factors.size())) return std::to_string(d) + ": mu - 1 > omega";
        return std::nullopt;
      },
      b.jobs, rep);
  // Encode (family, n) as +n for plus and -n for minus.
  std::vector<std::int64_t> params;
  for (std::int64_t n = 3; n <= max_n; ++n) params.push_back(n);
  for (std::int64_t n = 1; n <= max_n; ++n) params.push_back(-n);
  run_checks(
      params,
      [&](std::int64_t code) -> std::optional<std::string> {
        const UnitGeneratedParam p{code > 0 ? Family::plus : Family::minus, code > 0 ? code : -code};
        const auto forced = theorem_parity_checks(p.n, p.family);
        if (!forced) return std::nullopt;
        const std::int64_t d = unit_generated_discriminant(p);
        const std::int64_t h = FormClassGroup(d, sieve.get()).class_number();
        if (odd(h)) {
          return std::string(to_string(p.family)) + " n=" + std::to_string(p.n) + ": forced even but h = " + std::to_string(h);
        }
        return std::nullopt;
      },
      b.jobs, rep);
}

void verify_conductor(const VerifyBounds& b, VerifyReport& rep) {
  const std::int64_t max_delta = b.max_delta ? b.max_delta : 1000000;
  const auto sieve = sieve_up_to(max_delta);
  std::vector<std::int64_t> inputs;
  for (std::int64_t d = 5; d <= max_delta; ++d) {
    if (is_discriminant(d) && decompose(d).conductor > 1) inputs.push_back(d);
  }
  run_checks(
      inputs,
      [&](std::int64_t d) -> std::optional<std::string> {
        std::string diag;
        if (!verify_conductor_formula(d, &diag)) return diag;
        return std::nullopt;
      },
      b.jobs, rep);
}

void verify_cf(const VerifyBounds& b, VerifyReport& rep) {
  const std::int64_t max_n = b.max_n ? b.max_n : 500;
  std::vector<std::int64_t> params;
  for (std::int64_t n = 3; n <= max_n; ++n) params.push_back(n);
  for (std::int64_t n = 1; n <= max_n; ++n) params.push_back(-n);
  run_checks(
      params,
      [&](std::int64_t code) -> std::optional<std::string> {
        const UnitGeneratedParam p{code > 0 ? Family::plus : Family::minus, code > 0 ? code : -code};
        const std::string tag = std::string(to_string(p.family)) + " n=" + std::to_string(p.n);
        if (!verify_parametric_cf(p)) return tag + ": expansion differs from the parametric form";
        const std::int64_t d = unit_generated_discriminant(p);
        try {
          const QuadUnit eps = fundamental_unit(d);
          const intarith::i128 nm = eps.t * eps.t - eps.u * eps.u * d;
          if (nm != 4 * eps.norm) return tag + ": fundamental unit has norm " + intarith::to_string(nm / 4);
          if (eps.norm != unit_norm(d)) return tag + ": norm disagrees with period parity";
        } catch (const OverflowError&) {
          const UnitResidue r = fundamental_unit_mod(d, 1000003);
          const intarith::i128 lhs = intarith::floor_mod(
              static_cast<intarith::i128>(r.t) * r.t - static_cast<intarith::i128>(r.u) * r.u % 1000003 * (d % 1000003),
              1000003);
          const intarith::i128 rhs = intarith::floor_mod(std::int64_t{4} * unit_norm(d), std::int64_t{1000003});
          if (lhs != rhs) return tag + ": modular Pell check failed";
        }
        return std::nullopt;
      },
      b.jobs, rep);
}

void verify_group_axioms(const VerifyBounds& b, VerifyReport& rep) {
  const std::int64_t max_delta = b.max_delta ? b.max_delta : 10000;
  const std::int64_t max_n = b.max_n ? b.max_n : 2000;
  const auto sieve = sieve_up_to(std::max(max_delta, max_n * max_n + 4));
  std::vector<std::int64_t> inputs = positive_discriminants(max_delta);
  inputs.insert(inputs.begin(), {-4, -3});
  run_checks(
      inputs,
      [&](std::int64_t d) -> std::optional<std::string> {
        const FormClassGroup g(d, sieve.get());
        const std::string tag = std::to_string(d) + ": ";
        const auto h = static_cast<int>(g.narrow_class_number());
        if (d < 0 && (g.class_number() != 1 || h != 1)) return tag + "imaginary unit-generated order with h != 1";
        if (d > 0) {
          const bool minus_one = unit_norm(d) == -1;
          if (minus_one != g.has_unit_of_norm_minus_one()) return tag + "tau disagrees with the unit norm";
          const std::int64_t ratio = h / g.class_number();
          if (h % g.class_number() != 0 || (ratio != 1 && ratio != 2) || (ratio == 1) != minus_one) {
            return tag + "h+/h is not 1 or 2 as the unit norm requires";
          }
        }
        std::mt19937_64 rng(b.seed ^ static_cast<std::uint64_t>(d) * 0x9e3779b97f4a7c15ULL);
        std::uniform_int_distribution<int> pick(0, h - 1);
        const int e = g.principal();
        for (int s = 0; s < b.samples; ++s) {
          const int x = pick(rng), y = pick(rng), z = pick(rng);
          if (g.compose(e, x) != x) return tag + "identity fails";
          if (g.compose(x, g.inverse(x)) != e) return tag + "inverse fails";
          if (g.compose(x, y) != g.compose(y, x)) return tag + "commutativity fails";
          if (g.compose(g.compose(x, y), z) != g.compose(x, g.compose(y, z))) return tag + "associativity fails";
          // another representative of each class
          const auto cx = g.cycle(x), cy = g.cycle(y);
          const BQF fx = cx[std::uniform_int_distribution<std::size_t>(0, cx.size() - 1)(rng)];
          const BQF fy = cy[std::uniform_int_distribution<std::size_t>(0, cy.size() - 1)(rng)];
          const BQF comp = compose_forms(fx, fy, d);
          if (comp.discriminant() != d || !comp.is_primitive()) return tag + "composition left the discriminant";
          if (g.class_of(comp) != g.compose(x, y)) return tag + "composition depends on representatives";
        }
        return std::nullopt;
      },
      b.jobs, rep);
  std::vector<std::int64_t> params;
  for (std::int64_t n = 4; n <= max_n; ++n) params.push_back(n);
  for (std::int64_t n = 1; n <= max_n; ++n) params.push_back(-n);
  run_checks(
      params,
      [&](std::int64_t code) -> std::optional<std::string> {
        const UnitGeneratedParam p{code > 0 ? Family::plus : Family::minus, code > 0 ? code : -code};
        const FormClassGroup g(unit_generated_discriminant(p), sieve.get());
        const bool ok = p.family == Family::plus ? g.narrow_class_number() == 2 * g.class_number()
                                                 : g.narrow_class_number() == g.class_number();
        if (!ok) return std::string(to_string(p.family)) + " n=" + std::to_string(p.n) + ": family law fails";
        return std::nullopt;
      },
      b.jobs, rep);
}

}  // namespace

std::string_view to_string(VerifySuite s) {
  switch (s) {
    case VerifySuite::parity: return "parity";
    case VerifySuite::genus: return "genus";
    case VerifySuite::conductor: return "conductor";
    case VerifySuite::cf: return "cf";
    case VerifySuite::group_axioms: return "group-axioms";
  }
  return "?";
}

VerifySuite parse_verify_suite(std::string_view s) {
  for (VerifySuite v : {VerifySuite::parity, VerifySuite::genus, VerifySuite::conductor, VerifySuite::cf,
                        VerifySuite::group_axioms}) {
    if (to_string(v) == s) return v;
  }
  throw Error("unknown verify suite: " + std::string(s));
}

std::string VerifyReport::summary() const {
  std::string s = std::string(to_string(suite)) + ": " + (passed() ? "pass" : "FAIL") + " (" +
                  std::to_string(checked) + " checks, " + std::to_string(failures) + " failures)";
  for (const auto& c : counterexamples) s += "\n  " + c;
  return s;
}

VerifyReport run_verify(VerifySuite suite, const VerifyBounds& bounds) {
  VerifyReport rep;
  rep.suite = suite;
  switch (suite) {
    case VerifySuite::parity: verify_parity(bounds, rep); break;
    case VerifySuite::genus: verify_genus(bounds, rep); break;
    case VerifySuite::conductor: verify_conductor(bounds, rep); break;
    case VerifySuite::cf: verify_cf(bounds, rep); break;
    case VerifySuite::group_axioms: verify_group_axioms(bounds, rep); break;
  }
  return rep;
}

}  // namespace ugo
