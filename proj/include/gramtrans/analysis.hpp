#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "gramtrans/grammar.hpp"

namespace gramtrans {

// --- expansion trees ---------------------------------------------------------

struct LeadingSymbol {
    int production_id;
    SymbolId symbol;  // rhs[0]
};

/// Leading symbol of each production of nt, in production order. Requires an
/// epsilon-free grammar (normalize first).
std::vector<LeadingSymbol> leading_symbols(const Grammar& g, SymbolId nt);

/// Expansion tree of one production: the root is the rule's leading symbol;
/// each level expands every leaf nonterminal into the leading symbols of its
/// rules. A child that repeats a symbol already on its root path becomes a
/// repetition leaf: it is kept, its siblings from the same node are dropped,
/// and the rule that produced it is recorded as left-recursive.
struct ExpansionTree {
    struct Node {
        SymbolId symbol;
        int depth;
        int parent;              // index into nodes, -1 for root
        int via_production;      // rule whose leading symbol created this node (-1 for root)
        bool repetition = false;
        std::vector<int> children;
    };
    int production_id = 0;
    std::vector<Node> nodes;     // nodes[0] is the root

    std::set<SymbolId> symbol_set() const;
};

ExpansionTree expand(const Grammar& g, int production_id, int depth);

// --- conflicts ---------------------------------------------------------------

struct Conflict {
    enum class Kind { SharedLeading, LeftRecursion };
    Kind kind;
    SymbolId lhs;                     // nonterminal whose rules conflict
    SymbolId witness = -1;            // SharedLeading: symbol present in every tree
    std::vector<int> production_ids;  // sorted; LeftRecursion: exactly one id
    std::vector<SymbolId> path;       // LeftRecursion: root path ending in the repeat
};

/// Conflicts visible at exactly this expansion depth: rule groups of one
/// nonterminal whose depth-limited trees share a symbol, plus left-recursive
/// rules whose repetition shows up at this depth. Deterministic order:
/// (lhs, witness, ids). Pre: depths below have been resolved.
std::vector<Conflict> detect_conflicts(const Grammar& g, int depth);

// --- lookahead classification --------------------------------------------------

using TerminalString = std::vector<SymbolId>;  // length <= k; -1 marks end-of-input

/// Exact FIRST_k of a sentential form (k in {1,2}), nullable-aware.
std::set<TerminalString> first_k(const Grammar& g, int k, const std::vector<SymbolId>& form);

struct LlWitness {
    int production_a;
    int production_b;
    TerminalString clash;
};

struct LlResult {
    bool holds = false;
    std::optional<LlWitness> witness;
};

/// Strong-LL(k) test: for every pair of distinct rules of one nonterminal,
/// FIRST_k(rhs . FOLLOW_k(lhs)) must be disjoint.
LlResult is_ll_k(const Grammar& g, int k);

struct LrResult {
    bool holds = false;
    int states = 0;
    std::string conflict;  // first conflicting state, rendered
};

/// Canonical LR(1) construction with shift/reduce and reduce/reduce detection.
LrResult is_lr1(const Grammar& g, int state_cap = 100000);

struct LeftRecursionInfo {
    bool present = false;
    std::vector<SymbolId> cycle;  // A, B, ..., A
};

LeftRecursionInfo find_left_recursion(const Grammar& g);

// --- combined report -----------------------------------------------------------

struct ClassReport {
    std::string grammar;
    LlResult ll1;
    LlResult ll2;
    LrResult lr1;
    LeftRecursionInfo left_recursion;
    std::vector<std::string> notes;
};

ClassReport classify(const Grammar& g, int state_cap = 100000);
std::string report_text(const ClassReport& r, const Grammar& g);

}  // namespace gramtrans
