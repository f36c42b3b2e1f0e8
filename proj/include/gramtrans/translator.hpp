#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "gramtrans/grammar.hpp"
#include "gramtrans/transform.hpp"
#include "gramtrans/tree.hpp"

namespace gramtrans {

/// A source grammar, its transformed counterpart and the rule map tying the
/// two together. Forward runs original -> transformed; backward inverts.
struct TranslationBundle {
    const Grammar& source;
    const Grammar& target;
    const RuleMap& map;
    bool backward = false;
};

class TranslateError : public std::runtime_error {
public:
    enum class Kind { Lex, Parse, Ambiguous, Map };
    TranslateError(Kind kind, std::string msg, size_t position = 0, std::string details = "")
        : std::runtime_error(std::move(msg)),
          kind(kind),
          position(position),
          details(std::move(details)) {}
    Kind kind;
    size_t position;      // byte offset (lex) or token index (parse)
    std::string details;  // e.g. the two witness trees of an ambiguous parse
};

/// Tree-to-tree translation. Interior nodes keep their production ids;
/// leaves are rewritten per the rule map: inserted terminals materialize,
/// deleted ones are reconstructed on the way back, aligned ones carry their
/// lexemes across. Throws TranslateError(Map) on lineage mismatch.
SyntaxTree translate_tree(const SyntaxTree& t, const TranslationBundle& bundle);

/// lex + parse (rejecting ambiguity) + translate_tree + linearize.
std::string translate_program(const std::string& text, const TranslationBundle& bundle);

struct CorpusReport {
    int total = 0;
    int translated = 0;
    int lex_failed = 0;
    int parse_failed = 0;
    int ambiguous = 0;
    int malformed = 0;  // bad JSONL line or missing/non-string code field
    std::string output;    // JSONL of the translated records, input order
    std::string failures;  // JSONL sidecar: {"schema",,"line","kind","message"}
    int failed() const { return lex_failed + parse_failed + ambiguous + malformed; }
};

/// Translate the `field` entry of every JSONL record. Failures are skipped
/// and reported, never fatal; record order is preserved.
CorpusReport translate_corpus(const std::string& jsonl, const TranslationBundle& bundle,
                              const std::string& field = "code");

/// Sum over the tree's rule applications of (insertions - deletions): the
/// exact frontier-length change forward translation will apply.
int frontier_delta(const SyntaxTree& t, const RuleMap& map);

}  // namespace gramtrans
