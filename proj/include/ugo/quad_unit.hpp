#pragma once

#include <cstdint>
#include <string>

#include "ugo/intarith.hpp"

namespace ugo {

/// The unit (t + u sqrt(delta)) / 2 of the order of discriminant delta.
struct QuadUnit {
  intarith::i128 t = 0;
  intarith::i128 u = 0;
  std::int64_t delta = 0;
  int norm = 1;                ///< (t^2 - u^2 delta) / 4, always +1 or -1
  long double regulator = 0;   ///< log of the real embedding

  std::string to_string() const;
  friend bool operator==(const QuadUnit& x, const QuadUnit& y) {
    return x.t == y.t && x.u == y.u && x.delta == y.delta && x.norm == y.norm;
  }
};

}  // namespace ugo
