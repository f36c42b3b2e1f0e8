#pragma once

#include <map>
#include <set>

#include "gramtrans/earley.hpp"
#include "gramtrans/grammar.hpp"

namespace gramtrans {

/// Table-driven predictive parser. Construction fails (GrammarError) unless
/// the grammar is strong-LL(1). On LL(1) grammars it returns the same trees
/// and the same rejects as earley_parse.
class Ll1Parser {
public:
    explicit Ll1Parser(const Grammar& g);

    ParseOutcome parse(const std::vector<Token>& tokens) const;

    /// Chosen production for (nonterminal, lookahead); lookahead -1 is end of input.
    const std::map<std::pair<SymbolId, SymbolId>, int>& table() const { return table_; }

private:
    const Grammar* g_;
    std::map<std::pair<SymbolId, SymbolId>, int> table_;
    std::map<SymbolId, std::set<SymbolId>> first1_;
    std::set<SymbolId> nullable_;
};

ParseOutcome ll1_parse(const Grammar& g, const std::vector<Token>& tokens);

}  // namespace gramtrans
