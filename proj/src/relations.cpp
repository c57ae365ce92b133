#include "ugo/relations.hpp"

#include <algorithm>
#include <cmath>

#include "ugo/cfrac.hpp"
#include "ugo/errors.hpp"
#include "ugo/forms.hpp"

namespace ugo {

std::string ConductorFormulaReport::to_string() const {
  return "delta0=" + std::to_string(delta0) + " f=" + std::to_string(f) + " h0=" + std::to_string(h0) +
         " local_factor=" + std::to_string(local_factor) + " unit_index=" + std::to_string(unit_index) +
         " h_predicted=" + std::to_string(numerator) + "/" + std::to_string(unit_index);
}

ConductorFormulaReport class_number_via_conductor(std::int64_t delta0, std::int64_t f) {
  if (delta0 <= 0 || !is_fundamental_discriminant(delta0)) {
    throw ValidationError(std::to_string(delta0) + " is not a positive fundamental discriminant");
  }
  if (f < 1) throw DomainError("conductor must be positive");
  const intarith::i128 delta = intarith::checked_mul(intarith::checked_mul(f, f), delta0);
  if (delta > intarith::kMaxInput) throw OverflowError("f^2 delta0 exceeds 2^62");
  ConductorFormulaReport r;
  r.delta0 = delta0;
  r.f = f;
  r.h0 = class_number(delta0);
  r.local_factor = conductor_local_factor(delta0, f);
  r.unit_index = unit_index(delta0, static_cast<std::int64_t>(delta));
  r.numerator = intarith::narrow(intarith::checked_mul(r.h0, r.local_factor));
  r.remainder = r.numerator % r.unit_index;
  return r;
}

bool verify_conductor_formula(std::int64_t delta, std::string* diagnostic) {
  if (delta <= 0) throw DomainError("verify_conductor_formula needs delta > 0");
  const OrderDescriptor od = decompose(delta);
  const ConductorFormulaReport r = class_number_via_conductor(od.delta0, od.conductor);
  const std::int64_t h = class_number(delta);
  const bool ok = r.is_integral() && r.h_predicted() == h && r.h_predicted() >= 1;
  if (!ok && diagnostic) {
    *diagnostic = "delta=" + std::to_string(delta) + " enumerated h=" + std::to_string(h) + " but " + r.to_string();
  }
  return ok;
}

TrendSummary hua_trend(const std::vector<UnitGeneratedParam>& params, int jobs) {
  std::vector<UnitGeneratedParam> sorted = params;
  std::sort(sorted.begin(), sorted.end(), [](const auto& x, const auto& y) {
    return std::pair(x.family, x.n) < std::pair(y.family, y.n);
  });
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  TrendSummary out;
  out.samples.resize(sorted.size());
  for (const auto& p : sorted) {
    if (p.n < 3) throw DomainError("trend samples need n >= 3");
  }
  std::int64_t max_delta = 0;
  for (const auto& p : sorted) max_delta = std::max(max_delta, unit_generated_discriminant(p));
  const auto sieve = intarith::FactorSieve::shared(static_cast<std::uint64_t>(max_delta / 4 + 1));
  const auto count = static_cast<std::int64_t>(sorted.size());
#pragma omp parallel for schedule(dynamic, 4) num_threads(std::max(1, jobs))
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& p = sorted[static_cast<std::size_t>(i)];
    const FormClassGroup g(unit_generated_discriminant(p), sieve.get());
    TrendSample s;
    s.family = p.family;
    s.n = p.n;
    s.h = g.class_number();
    s.log_h_over_log_n = std::log(static_cast<double>(s.h)) / std::log(static_cast<double>(p.n));
    out.samples[static_cast<std::size_t>(i)] = s;
  }
  if (!out.samples.empty()) {
    double sum = 0;
    out.min = out.max = out.samples.front().log_h_over_log_n;
    for (const auto& s : out.samples) {
      sum += s.log_h_over_log_n;
      out.min = std::min(out.min, s.log_h_over_log_n);
      out.max = std::max(out.max, s.log_h_over_log_n);
    }
    out.mean = sum / static_cast<double>(out.samples.size());
  }
  return out;
}

BoundedSummary bounded_family_statistic(std::int64_t delta0_bound, std::int64_t n_min, std::int64_t n_max, int jobs) {
  if (delta0_bound < 5) throw DomainError("delta0 bound must be at least 5");
  if (n_min > n_max) throw DomainError("empty n range");
  std::vector<std::pair<UnitGeneratedParam, OrderDescriptor>> picked;
  for (Family fam : {Family::plus, Family::minus}) {
    for (std::int64_t n = std::max<std::int64_t>(n_min, fam == Family::plus ? 3 : 1); n <= n_max; ++n) {
      const UnitGeneratedParam p{fam, n};
      const OrderDescriptor od = decompose(unit_generated_discriminant(p));
      if (od.delta0 <= delta0_bound) picked.emplace_back(p, od);
    }
  }
  BoundedSummary out;
  out.samples.resize(picked.size());
  const auto count = static_cast<std::int64_t>(picked.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(std::max(1, jobs))
  for (std::int64_t i = 0; i < count; ++i) {
    const auto& [p, od] = picked[static_cast<std::size_t>(i)];
    BoundedSample s;
    s.family = p.family;
    s.n = p.n;
    s.delta0 = od.delta0;
    s.h = class_number(od.delta);
    const double nn = static_cast<double>(p.n);
    s.ratio = std::abs(std::log(static_cast<double>(s.h)) - std::log(nn)) / std::log(std::log(nn + 20));
    out.samples[static_cast<std::size_t>(i)] = s;
  }
  double sum = 0;
  for (const auto& s : out.samples) {
    sum += s.ratio;
    out.max = std::max(out.max, s.ratio);
  }
  if (!out.samples.empty()) out.mean = sum / static_cast<double>(out.samples.size());
  return out;
}

}  // namespace ugo
