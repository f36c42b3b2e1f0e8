#pragma once

#include <cstdint>

#include "gramtrans/grammar.hpp"
#include "gramtrans/tree.hpp"

namespace gramtrans {

/// Random derivation from start. At each nonterminal the choice is uniform
/// among the productions whose minimal completion depth fits the remaining
/// budget, so derivations always finish within max_depth. Deterministic for
/// a given seed; class-terminal leaves get pattern-checked pseudo-lexemes.
/// Throws GrammarError when no production of start fits the budget.
SyntaxTree sample(const Grammar& g, int max_depth, uint64_t seed);

}  // namespace gramtrans
