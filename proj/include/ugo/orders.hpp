#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "ugo/quad_unit.hpp"

namespace ugo {

enum class OrderSign { real, imaginary };

/// delta = conductor^2 * delta0 with delta0 fundamental.
struct OrderDescriptor {
  std::int64_t delta = 0;
  std::int64_t delta0 = 0;
  std::int64_t conductor = 1;
  OrderSign sign = OrderSign::real;

  /// Squarefree D0 with delta0 = D0 or 4 D0.
  std::int64_t radicand() const { return delta0 % 4 == 0 ? delta0 / 4 : delta0; }
  bool is_maximal() const { return conductor == 1; }
  friend bool operator==(const OrderDescriptor&, const OrderDescriptor&) = default;
};

/// Family of a unit-generated order, named by the norm of its generating unit:
/// plus gives n^2 - 4, minus gives n^2 + 4.
enum class Family { plus, minus };

std::string_view to_string(Family f);

struct UnitGeneratedParam {
  Family family = Family::plus;
  std::int64_t n = 0;
  friend bool operator==(const UnitGeneratedParam&, const UnitGeneratedParam&) = default;
};

/// A row of the narrow Richaud-Degert table.
///   1: D0 = m^2 - 4, m odd   -> delta0 = n^2 - 4, n = m
///   2: D0 = m^2 - 1, m even  -> delta0 = n^2 - 4, n = 2m
///   3: D0 = m^2 + 1, m even  -> 4 delta0 = n^2 + 4, n = 2m
///   4: D0 = m^2 + 1, m odd   -> delta0 = n^2 + 4, n = 2m
///   5: D0 = m^2 + 4, m odd   -> delta0 = n^2 + 4, n = m
struct RDClass {
  int row = 0;
  std::int64_t m = 0;
  int conductor_of_ug_order = 1;
  friend bool operator==(const RDClass&, const RDClass&) = default;
};

bool is_discriminant(std::int64_t delta);
bool is_fundamental_discriminant(std::int64_t delta);

OrderDescriptor decompose(std::int64_t delta);

/// n^2 - 4 or n^2 + 4; throws ValidationError for plus n = 2 and minus n = 0.
std::int64_t unit_generated_discriminant(UnitGeneratedParam param);

/// Every (family, n) with the given discriminant, plus first. Only delta = 5
/// has two entries.
std::vector<UnitGeneratedParam> classify_unit_generated(std::int64_t delta);

/// (n + sqrt(n^2 -+ 4)) / 2 for a real parameter.
QuadUnit generating_unit(UnitGeneratedParam param);

/// Coefficients of eps^j = (t_j + f_j sqrt(delta0)) / 2 for the fundamental unit
/// eps of the maximal order.
struct UnitPower {
  intarith::i128 t = 0;
  intarith::i128 f = 0;
};
UnitPower fundamental_unit_power(std::int64_t delta0, int j);

/// Discriminant f_j^2 delta0 of Z[eps^j].
std::int64_t power_order(std::int64_t delta0, int j);

/// |(O_{delta0} / f O_{delta0})^x| / |(O_delta / f O_{delta0})^x|
///   = f * prod_{p | f} (1 - chi_{delta0}(p) / p), an exact integer.
std::int64_t conductor_local_factor(std::int64_t delta0, std::int64_t f);

std::optional<RDClass> richaud_degert_classify(std::int64_t delta0);
/// Every table row matched by delta0, in table order (several only for delta0 = 5).
std::vector<RDClass> richaud_degert_rows(std::int64_t delta0);
/// Discriminant of the unit-generated order the row predicts.
std::int64_t rd_unit_generated_discriminant(const RDClass& rd);

}  // namespace ugo
