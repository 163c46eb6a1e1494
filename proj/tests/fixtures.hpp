#pragma once

#include "procpolar/market.hpp"

namespace fixtures {

using procpolar::EventTree;
using procpolar::Rational;
using procpolar::Values;

inline Rational r(long n, long d = 1) { return Rational(n, d); }

/// Binomial 4 -> {8, 2}, p = (1/2, 1/2).
inline procpolar::Market m1() {
  return procpolar::Market(EventTree::uniform({2}), {Values{r(4), r(8), r(2)}});
}

/// Trinomial 4 -> {8, 4, 2}, uniform p.
inline procpolar::Market m2() {
  return procpolar::Market(EventTree::uniform({3}), {Values{r(4), r(8), r(4), r(2)}});
}

}  // namespace fixtures
