#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ugo/orders.hpp"

namespace ugo {

/// h = h0 * local_factor / unit_index for delta = f^2 delta0.
struct ConductorFormulaReport {
  std::int64_t delta0 = 0;
  std::int64_t f = 1;
  std::int64_t h0 = 0;
  std::int64_t local_factor = 1;
  std::int64_t unit_index = 1;
  /// h0 * local_factor, and the remainder of its division by unit_index.
  std::int64_t numerator = 0;
  std::int64_t remainder = 0;

  bool is_integral() const { return remainder == 0; }
  std::int64_t h_predicted() const { return numerator / unit_index; }
  std::string to_string() const;
};

ConductorFormulaReport class_number_via_conductor(std::int64_t delta0, std::int64_t f);

/// Compares the conductor formula with the enumerated class number of
/// delta > 0. On mismatch returns false and fills `diagnostic`.
bool verify_conductor_formula(std::int64_t delta, std::string* diagnostic = nullptr);

struct TrendSample {
  Family family = Family::plus;
  std::int64_t n = 0;
  std::int64_t h = 0;
  double log_h_over_log_n = 0;
};

struct TrendSummary {
  std::vector<TrendSample> samples;
  double mean = 0;
  double min = 0;
  double max = 0;
};

/// log h / log n for each real parameter, computed concurrently, ordered by
/// (family, n).
TrendSummary hua_trend(const std::vector<UnitGeneratedParam>& params, int jobs = 1);

struct BoundedSample {
  Family family = Family::plus;
  std::int64_t n = 0;
  std::int64_t delta0 = 0;
  std::int64_t h = 0;
  /// |log h - log n| / log log (n + 20)
  double ratio = 0;
};

struct BoundedSummary {
  std::vector<BoundedSample> samples;
  double mean = 0;
  double max = 0;
};

/// Samples with n in [n_min, n_max] whose fundamental discriminant is at most delta0_bound.
BoundedSummary bounded_family_statistic(std::int64_t delta0_bound, std::int64_t n_min, std::int64_t n_max,
                                        int jobs = 1);

}  // namespace ugo
