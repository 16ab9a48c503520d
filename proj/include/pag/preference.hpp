#pragma once

#include "pag/mechanics.hpp"

namespace pag {

// Decidable preference predicates over pairs of strategy matrices. These
// implement the stated sufficient conditions literally; they do not claim to
// exhaust the preference relation.

// U is weakly less preferred than V for country i: every friend of i is
// safe/precarious under V or unsafe under U, and every adversary of i is
// unsafe/precarious under V or safe under U.
bool weakly_prefers(CountryId i, const StrategyMatrix& U, const StrategyMatrix& V);

// Default reading compares each neighbor's state across the two matrices:
// x_j(U) = x_j(V) for all j in F_i ∪ A_i (which includes i). The literal
// printed condition compares x_i(U) against every x_j(V) instead; it is kept
// reachable behind `literal`.
bool indifferent(CountryId i, const StrategyMatrix& U, const StrategyMatrix& V,
                 bool literal = false);

// x_i(V) safe or precarious while x_i(U) is unsafe.
bool strongly_prefers(CountryId i, const StrategyMatrix& U, const StrategyMatrix& V);

}  // namespace pag
