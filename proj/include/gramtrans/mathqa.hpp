#pragma once

#include <stdexcept>
#include <string>

#include "gramtrans/grammar.hpp"
#include "gramtrans/transform.hpp"
#include "gramtrans/tree.hpp"

namespace gramtrans {

/// The non-context-free representation is a codec over base-grammar trees:
/// each assignment statement's variable is repeated after the statement.
struct NcfgConfig {
    int assignment_rule_id = 0;        // rule shaped: lhs -> variable '=' expression
    SymbolId variable_terminal = -1;   // the identifier class terminal
};

/// Four-representation fixture suite around one assignment-sequence DSL:
/// the LR(1) base, its full-transform LL(1) form, the categorize-then-select
/// LL(2) variant, and the NCFG codec configuration.
struct DslSuite {
    Grammar base;
    Grammar ll1;
    Grammar ll2;
    RuleMap map_ll1;
    RuleMap map_ll2;
    TransformTrace trace_ll1;
    NcfgConfig ncfg;
};

/// Source text of the base grammar, in the grammar file format.
const char* mathqa_grammar_text();

/// Build and class-check the suite: base is LR(1) but not LL(2), the LL(1)
/// variant passes the strong-LL(1) test, the LL(2) variant is LL(2) and
/// LR(1) but not LL(1). Throws GrammarError when a check fails.
DslSuite build_dsl_suite();

class NcfgError : public std::runtime_error {
public:
    explicit NcfgError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Linearize, repeating each assignment's variable after its statement.
std::string ncfg_encode(const SyntaxTree& t, const Grammar& base, const NcfgConfig& cfg);

/// Inverse of ncfg_encode: verifies each statement's trailing repetition
/// against the assigned variable (NcfgError on mismatch), strips it, and
/// parses the remainder with the base grammar.
SyntaxTree ncfg_decode(const std::string& text, const Grammar& base, const NcfgConfig& cfg);

}  // namespace gramtrans
