#pragma once

#include <variant>
#include <vector>

#include "gramtrans/grammar.hpp"
#include "gramtrans/lexer.hpp"
#include "gramtrans/tree.hpp"

namespace gramtrans {

struct Reject {
    size_t position = 0;                // token index that could not be consumed
    std::vector<SymbolId> expected;     // terminals viable at that position, sorted
};

struct Ambiguous {
    SyntaxTree first;
    SyntaxTree second;
};

using ParseOutcome = std::variant<SyntaxTree, Ambiguous, Reject>;

inline bool is_tree(const ParseOutcome& o) { return std::holds_alternative<SyntaxTree>(o); }
inline bool is_ambiguous(const ParseOutcome& o) { return std::holds_alternative<Ambiguous>(o); }
inline bool is_reject(const ParseOutcome& o) { return std::holds_alternative<Reject>(o); }

/// General CFG parser (handles left recursion and epsilon rules). Returns the
/// unique tree, or two distinct trees as an ambiguity witness, or a reject
/// with the furthest reached position and its viable-terminal set.
ParseOutcome earley_parse(const Grammar& g, const std::vector<Token>& tokens);

}  // namespace gramtrans
