#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace gramtrans {

using SymbolId = int;

enum class SymbolKind { Nonterminal, LiteralTerminal, ClassTerminal };

struct Symbol {
    SymbolKind kind = SymbolKind::Nonterminal;
    std::string name;     // unique across the grammar
    std::string lexeme;   // literal terminals: exact surface text
    std::string pattern;  // class terminals: anchored regex
    bool content_bearing = false;
};

enum class RuleOrigin { User, EpsilonMarker, TransformInserted };

struct Production {
    int id = 0;  // 1-based, stable across transform lineages
    SymbolId lhs = -1;
    std::vector<SymbolId> rhs;  // empty = epsilon
    RuleOrigin origin = RuleOrigin::User;
};

struct LexicalConfig {
    std::vector<std::string> skip_patterns;
    bool newline_significant = false;
    std::vector<std::string> tight_punctuation;  // lexemes that glue to the previous token
};

/// Error raised by the grammar file parser and related input checks.
class GrammarError : public std::runtime_error {
public:
    GrammarError(std::string msg, int line = 0, int column = 0)
        : std::runtime_error(std::move(msg)), line(line), column(column) {}
    int line;
    int column;
};

class Grammar {
public:
    std::string name = "grammar";

    SymbolId add_symbol(Symbol sym);
    /// Find-or-create the literal terminal with this exact lexeme.
    SymbolId intern_literal(const std::string& lexeme);
    int add_production(SymbolId lhs, std::vector<SymbolId> rhs,
                       RuleOrigin origin = RuleOrigin::User);
    void set_start(SymbolId s) { start_ = s; }

    const std::vector<Symbol>& symbols() const { return symbols_; }
    const Symbol& symbol(SymbolId id) const { return symbols_.at(static_cast<size_t>(id)); }
    std::optional<SymbolId> find_symbol(std::string_view name) const;
    std::optional<SymbolId> find_literal(std::string_view lexeme) const;

    const std::vector<Production>& productions() const { return productions_; }
    std::vector<Production>& productions_mut() { return productions_; }
    const Production& production_by_id(int id) const;
    Production& production_by_id_mut(int id);
    /// Production ids with this lhs, in grammar order.
    std::vector<int> productions_of(SymbolId nt) const;

    SymbolId start() const { return start_; }
    LexicalConfig& lexical() { return lexical_; }
    const LexicalConfig& lexical() const { return lexical_; }

    bool is_terminal(SymbolId id) const { return symbol(id).kind != SymbolKind::Nonterminal; }
    bool is_nonterminal(SymbolId id) const { return symbol(id).kind == SymbolKind::Nonterminal; }

    /// Human-readable symbol reference: literals quoted, everything else by name.
    std::string display(SymbolId id) const;

private:
    std::vector<Symbol> symbols_;
    std::vector<Production> productions_;
    std::unordered_map<std::string, SymbolId> by_name_;
    std::unordered_map<std::string, SymbolId> literal_by_lexeme_;
    LexicalConfig lexical_;
    SymbolId start_ = -1;
};

struct Diagnostic {
    std::string code;     // "unreachable", "nonproductive", "duplicate-production", ...
    std::string message;
};

struct ValidationReport {
    std::vector<Diagnostic> errors;
    std::vector<Diagnostic> warnings;
    bool ok() const { return errors.empty(); }
};

inline constexpr const char* kEpsilonLexeme = "<eps>";
inline constexpr const char* kNewlineName = "NEWLINE";

Grammar parse_grammar(std::string_view text);
Grammar parse_grammar(std::string_view text, std::string name);
std::string serialize_grammar(const Grammar& g);
ValidationReport validate(const Grammar& g);

/// Rewrite every epsilon production to derive the shared <eps> literal instead.
/// Idempotent; fails if a distinct symbol already owns the <eps> lexeme.
Grammar epsilon_normalize(const Grammar& g);

/// Structural equality: start, symbol set, production sequence and ids,
/// lexical config. Internal symbol numbering does not participate.
bool structural_equal(const Grammar& a, const Grammar& b);

}  // namespace gramtrans
