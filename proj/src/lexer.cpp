#include "gramtrans/lexer.hpp"

#include <algorithm>
#include <regex>

namespace gramtrans {

namespace {

struct CompiledLexer {
    struct ClassRule { SymbolId id; std::regex re; };
    std::vector<std::pair<std::string, SymbolId>> literals;  // longest first
    std::vector<ClassRule> classes;
    std::vector<std::regex> skips;
    SymbolId newline = -1;
};

CompiledLexer compile(const Grammar& g) {
    CompiledLexer out;
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id) {
        const Symbol& s = g.symbol(id);
        if (s.kind == SymbolKind::LiteralTerminal) {
            if (s.name == kNewlineName) out.newline = id;
            else out.literals.emplace_back(s.lexeme, id);
        } else if (s.kind == SymbolKind::ClassTerminal) {
            out.classes.push_back({id, std::regex(s.pattern, std::regex::ECMAScript)});
        }
    }
    std::stable_sort(out.literals.begin(), out.literals.end(),
                     [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
    for (const auto& p : g.lexical().skip_patterns)
        out.skips.emplace_back(p, std::regex::ECMAScript);
    return out;
}

}  // namespace

std::vector<Token> lex(std::string_view text, const Grammar& g) {
    CompiledLexer lx = compile(g);
    bool nl_significant = g.lexical().newline_significant && lx.newline >= 0;

    std::vector<Token> tokens;
    size_t pos = 0;
    while (pos < text.size()) {
        // Skip patterns first, then insignificant whitespace.
        bool skipped = false;
        for (const auto& re : lx.skips) {
            std::cmatch m;
            if (std::regex_search(text.data() + pos, text.data() + text.size(), m, re,
                                  std::regex_constants::match_continuous) &&
                m.length(0) > 0) {
                pos += static_cast<size_t>(m.length(0));
                skipped = true;
                break;
            }
        }
        if (skipped) continue;

        char c = text[pos];
        if (c == '\n') {
            if (nl_significant)
                tokens.push_back({lx.newline, "\n", pos, pos + 1});
            ++pos;
            continue;
        }
        if (!nl_significant && (c == ' ' || c == '\t' || c == '\r')) { ++pos; continue; }
        if (c == ' ' || c == '\t' || c == '\r') { ++pos; continue; }

        size_t best_len = 0;
        SymbolId best = -1;
        bool best_is_literal = false;
        for (const auto& [lexeme, id] : lx.literals) {
            if (lexeme.size() >= best_len && lexeme.size() <= text.size() - pos &&
                text.compare(pos, lexeme.size(), lexeme) == 0) {
                if (lexeme.size() > best_len || !best_is_literal) {
                    best_len = lexeme.size();
                    best = id;
                    best_is_literal = true;
                }
            }
        }
        for (const auto& rule : lx.classes) {
            std::cmatch m;
            if (std::regex_search(text.data() + pos, text.data() + text.size(), m, rule.re,
                                  std::regex_constants::match_continuous)) {
                auto len = static_cast<size_t>(m.length(0));
                if (len > best_len) {  // ties go to literals
                    best_len = len;
                    best = rule.id;
                    best_is_literal = false;
                }
            }
        }
        if (best_len == 0) {
            std::string context(text.substr(pos, std::min<size_t>(12, text.size() - pos)));
            throw LexError("no terminal matches input at offset " + std::to_string(pos) +
                           " near \"" + context + "\"", pos);
        }
        tokens.push_back({best, std::string(text.substr(pos, best_len)), pos, pos + best_len});
        pos += best_len;
    }

    if (nl_significant && !tokens.empty() && tokens.back().terminal != lx.newline)
        tokens.push_back({lx.newline, "\n", text.size(), text.size()});
    return tokens;
}

}  // namespace gramtrans
