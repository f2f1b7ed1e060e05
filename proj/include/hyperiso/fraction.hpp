#pragma once

#include <utility>

#include "hyperiso/factor.hpp"
#include "hyperiso/series.hpp"

namespace hyperiso {

struct NoConvergence : MathError {
  using MathError::MathError;
};

/// Power-series expansion of N(t)/D(t) modulo t^prec; D(0) must be nonzero.
Series expand_fraction(const PolyF& num, const PolyF& den, int prec, const FieldCtx* F);

/// Continued-fraction reconstruction of s as N/D with deg N <= max_num, deg D <= max_den.
/// The denominator is normalised by D(0) = 1 and N/D is in lowest terms.
std::pair<PolyF, PolyF> reconstruct_fraction(const Series& s, int max_num, int max_den);

}  // namespace hyperiso
