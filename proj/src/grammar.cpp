#include "gramtrans/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <regex>
#include <set>
#include <sstream>

namespace gramtrans {

SymbolId Grammar::add_symbol(Symbol sym) {
    if (by_name_.count(sym.name))
        throw GrammarError("duplicate symbol name '" + sym.name + "'");
    SymbolId id = static_cast<SymbolId>(symbols_.size());
    by_name_.emplace(sym.name, id);
    if (sym.kind == SymbolKind::LiteralTerminal) {
        if (literal_by_lexeme_.count(sym.lexeme))
            throw GrammarError("duplicate literal lexeme '" + sym.lexeme + "'");
        literal_by_lexeme_.emplace(sym.lexeme, id);
    }
    symbols_.push_back(std::move(sym));
    return id;
}

SymbolId Grammar::intern_literal(const std::string& lexeme) {
    auto it = literal_by_lexeme_.find(lexeme);
    if (it != literal_by_lexeme_.end()) return it->second;
    Symbol sym;
    sym.kind = SymbolKind::LiteralTerminal;
    sym.lexeme = lexeme;
    sym.name = "'" + lexeme + "'";
    if (by_name_.count(sym.name))
        throw GrammarError("literal lexeme '" + lexeme + "' collides with symbol " + sym.name);
    return add_symbol(std::move(sym));
}

int Grammar::add_production(SymbolId lhs, std::vector<SymbolId> rhs, RuleOrigin origin) {
    Production p;
    p.id = static_cast<int>(productions_.size()) + 1;
    p.lhs = lhs;
    p.rhs = std::move(rhs);
    p.origin = origin;
    productions_.push_back(std::move(p));
    return productions_.back().id;
}

std::optional<SymbolId> Grammar::find_symbol(std::string_view name) const {
    auto it = by_name_.find(std::string(name));
    if (it == by_name_.end()) return std::nullopt;
    return it->second;
}

std::optional<SymbolId> Grammar::find_literal(std::string_view lexeme) const {
    auto it = literal_by_lexeme_.find(std::string(lexeme));
    if (it == literal_by_lexeme_.end()) return std::nullopt;
    return it->second;
}

const Production& Grammar::production_by_id(int id) const {
    for (const auto& p : productions_)
        if (p.id == id) return p;
    throw GrammarError("no production with id " + std::to_string(id));
}

Production& Grammar::production_by_id_mut(int id) {
    for (auto& p : productions_)
        if (p.id == id) return p;
    throw GrammarError("no production with id " + std::to_string(id));
}

std::vector<int> Grammar::productions_of(SymbolId nt) const {
    std::vector<int> ids;
    for (const auto& p : productions_)
        if (p.lhs == nt) ids.push_back(p.id);
    return ids;
}

std::string Grammar::display(SymbolId id) const {
    const Symbol& s = symbol(id);
    if (s.kind == SymbolKind::LiteralTerminal) return "'" + s.lexeme + "'";
    return s.name;
}

// --- file format -----------------------------------------------------------
//
//   start S ;
//   terminal identifier /[A-Za-z_][A-Za-z0-9_]*/ content ;
//   skip /[ \t]+/ ;
//   newline significant ;
//   tight ',' ')' ;
//   S -> 'a' B | ;           # '|' separates alternatives, empty rhs = epsilon
//
// '#' starts a comment that runs to end of line.

namespace {

struct FileToken {
    enum Kind { Name, Literal, Regex, Arrow, Pipe, Semi, End } kind;
    std::string text;
    int line;
    int column;
};

class FileLexer {
public:
    explicit FileLexer(std::string_view text) : text_(text) {}

    FileToken next() {
        skip_space();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {FileToken::End, "", line, col};
        char c = text_[pos_];
        if (c == ';') { advance(); return {FileToken::Semi, ";", line, col}; }
        if (c == '|') { advance(); return {FileToken::Pipe, "|", line, col}; }
        if (c == '-' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '>') {
            advance(); advance();
            return {FileToken::Arrow, "->", line, col};
        }
        if (c == '\'') return lex_quoted(line, col);
        if (c == '/') return lex_regex(line, col);
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '_')
            return lex_name(line, col);
        throw GrammarError(std::string("unexpected character '") + c + "' in grammar file",
                           line, col);
    }

private:
    void advance() {
        if (text_[pos_] == '\n') { ++line_; col_ = 1; } else { ++col_; }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    FileToken lex_quoted(int line, int col) {
        advance();  // opening quote
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '\'') {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size()) {
                advance();
                char e = text_[pos_];
                if (e == 'n') out.push_back('\n');
                else if (e == 't') out.push_back('\t');
                else out.push_back(e);  // \' and \\ and anything else literally
            } else if (c == '\n') {
                throw GrammarError("unterminated literal", line, col);
            } else {
                out.push_back(c);
            }
            advance();
        }
        if (pos_ >= text_.size()) throw GrammarError("unterminated literal", line, col);
        advance();  // closing quote
        if (out.empty()) throw GrammarError("empty literal", line, col);
        return {FileToken::Literal, out, line, col};
    }

    FileToken lex_regex(int line, int col) {
        advance();  // opening slash
        std::string out;
        while (pos_ < text_.size() && text_[pos_] != '/') {
            char c = text_[pos_];
            if (c == '\\' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
                out.push_back('/');
                advance();
            } else if (c == '\n') {
                throw GrammarError("unterminated pattern", line, col);
            } else {
                out.push_back(c);
            }
            advance();
        }
        if (pos_ >= text_.size()) throw GrammarError("unterminated pattern", line, col);
        advance();  // closing slash
        return {FileToken::Regex, out, line, col};
    }

    FileToken lex_name(int line, int col) {
        std::string out;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') {
                out.push_back(c);
                advance();
            } else {
                break;
            }
        }
        return {FileToken::Name, out, line, col};
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_ = 1;
    int col_ = 1;
};

struct RawProduction {
    std::string lhs;
    // Each rhs element is either a bare name or a quoted literal.
    struct Element { bool is_literal; std::string text; int line; int column; };
    std::vector<std::vector<Element>> alternatives;
    int line;
};

void check_pattern(const std::string& pattern, int line, int col) {
    try {
        std::regex re(pattern, std::regex::ECMAScript);
        (void)re;
    } catch (const std::regex_error& e) {
        throw GrammarError("invalid pattern /" + pattern + "/: " + e.what(), line, col);
    }
}

}  // namespace

Grammar parse_grammar(std::string_view text) {
    FileLexer lexer(text);
    FileToken tok = lexer.next();

    auto expect = [&](FileToken::Kind kind, const char* what) {
        if (tok.kind != kind)
            throw GrammarError(std::string("expected ") + what + ", found '" + tok.text + "'",
                               tok.line, tok.column);
        FileToken out = tok;
        tok = lexer.next();
        return out;
    };

    Grammar g;
    std::string start_name;
    int start_line = 0;
    std::vector<RawProduction> raw;
    std::vector<std::pair<std::string, int>> tight;

    while (tok.kind != FileToken::End) {
        if (tok.kind != FileToken::Name)
            throw GrammarError("expected declaration or production, found '" + tok.text + "'",
                               tok.line, tok.column);

        if (tok.text == "start") {
            if (!start_name.empty())
                throw GrammarError("duplicate start declaration", tok.line, tok.column);
            tok = lexer.next();
            FileToken name = expect(FileToken::Name, "start nonterminal");
            start_name = name.text;
            start_line = name.line;
            expect(FileToken::Semi, "';'");
            continue;
        }
        if (tok.text == "terminal") {
            tok = lexer.next();
            FileToken name = expect(FileToken::Name, "terminal name");
            FileToken pattern = expect(FileToken::Regex, "pattern");
            bool content = false;
            if (tok.kind == FileToken::Name && tok.text == "content") {
                content = true;
                tok = lexer.next();
            }
            expect(FileToken::Semi, "';'");
            check_pattern(pattern.text, pattern.line, pattern.column);
            Symbol sym;
            sym.kind = SymbolKind::ClassTerminal;
            sym.name = name.text;
            sym.pattern = pattern.text;
            sym.content_bearing = content;
            try {
                g.add_symbol(std::move(sym));
            } catch (const GrammarError& e) {
                throw GrammarError(e.what(), name.line, name.column);
            }
            continue;
        }
        if (tok.text == "skip") {
            tok = lexer.next();
            FileToken pattern = expect(FileToken::Regex, "pattern");
            expect(FileToken::Semi, "';'");
            check_pattern(pattern.text, pattern.line, pattern.column);
            g.lexical().skip_patterns.push_back(pattern.text);
            continue;
        }
        if (tok.text == "newline") {
            tok = lexer.next();
            FileToken kw = expect(FileToken::Name, "'significant'");
            if (kw.text != "significant")
                throw GrammarError("expected 'significant' after 'newline'", kw.line, kw.column);
            expect(FileToken::Semi, "';'");
            g.lexical().newline_significant = true;
            continue;
        }
        if (tok.text == "tight") {
            tok = lexer.next();
            while (tok.kind == FileToken::Literal) {
                tight.emplace_back(tok.text, tok.line);
                tok = lexer.next();
            }
            expect(FileToken::Semi, "';'");
            continue;
        }

        // Production: Name -> alternatives ;
        RawProduction rp;
        rp.lhs = tok.text;
        rp.line = tok.line;
        tok = lexer.next();
        expect(FileToken::Arrow, "'->'");
        std::vector<RawProduction::Element> alt;
        while (true) {
            if (tok.kind == FileToken::Name) {
                alt.push_back({false, tok.text, tok.line, tok.column});
                tok = lexer.next();
            } else if (tok.kind == FileToken::Literal) {
                alt.push_back({true, tok.text, tok.line, tok.column});
                tok = lexer.next();
            } else if (tok.kind == FileToken::Pipe) {
                rp.alternatives.push_back(std::move(alt));
                alt.clear();
                tok = lexer.next();
            } else if (tok.kind == FileToken::Semi) {
                rp.alternatives.push_back(std::move(alt));
                tok = lexer.next();
                break;
            } else {
                throw GrammarError("unexpected '" + tok.text + "' in production",
                                   tok.line, tok.column);
            }
        }
        raw.push_back(std::move(rp));
    }

    if (start_name.empty()) throw GrammarError("missing start declaration");

    if (g.lexical().newline_significant) {
        Symbol nl;
        nl.kind = SymbolKind::LiteralTerminal;
        nl.name = kNewlineName;
        nl.lexeme = "\n";
        g.add_symbol(std::move(nl));
    }

    // Every name that appears as an lhs is a nonterminal.
    for (const auto& rp : raw) {
        if (g.find_symbol(rp.lhs)) {
            if (g.symbol(*g.find_symbol(rp.lhs)).kind != SymbolKind::Nonterminal)
                throw GrammarError("'" + rp.lhs + "' is a terminal and cannot have productions",
                                   rp.line, 1);
            continue;
        }
        Symbol nt;
        nt.kind = SymbolKind::Nonterminal;
        nt.name = rp.lhs;
        g.add_symbol(std::move(nt));
    }

    for (const auto& rp : raw) {
        SymbolId lhs = *g.find_symbol(rp.lhs);
        for (const auto& alt : rp.alternatives) {
            std::vector<SymbolId> rhs;
            for (const auto& el : alt) {
                if (el.is_literal) {
                    rhs.push_back(g.intern_literal(el.text));
                } else {
                    auto id = g.find_symbol(el.text);
                    if (!id)
                        throw GrammarError("undeclared symbol '" + el.text + "'",
                                           el.line, el.column);
                    rhs.push_back(*id);
                }
            }
            g.add_production(lhs, std::move(rhs));
        }
    }

    auto start_id = g.find_symbol(start_name);
    if (!start_id || g.symbol(*start_id).kind != SymbolKind::Nonterminal)
        throw GrammarError("start symbol '" + start_name + "' has no productions",
                           start_line, 1);
    g.set_start(*start_id);

    for (const auto& [lexeme, line] : tight) {
        if (!g.find_literal(lexeme))
            throw GrammarError("tight lexeme '" + lexeme + "' is not a literal of this grammar",
                               line, 1);
        g.lexical().tight_punctuation.push_back(lexeme);
    }
    return g;
}

namespace {

std::string quote_literal(const std::string& lexeme) {
    std::string out = "'";
    for (char c : lexeme) {
        if (c == '\\' || c == '\'') { out.push_back('\\'); out.push_back(c); }
        else if (c == '\n') out += "\\n";
        else if (c == '\t') out += "\\t";
        else out.push_back(c);
    }
    out.push_back('\'');
    return out;
}

std::string quote_pattern(const std::string& pattern) {
    std::string out = "/";
    for (char c : pattern) {
        if (c == '/') out += "\\/";
        else out.push_back(c);
    }
    out.push_back('/');
    return out;
}

}  // namespace

Grammar parse_grammar(std::string_view text, std::string name) {
    Grammar g = parse_grammar(text);
    g.name = std::move(name);
    return g;
}

std::string serialize_grammar(const Grammar& g) {
    for (size_t i = 0; i < g.productions().size(); ++i)
        if (g.productions()[i].id != static_cast<int>(i) + 1)
            throw GrammarError("serialize requires contiguous production ids");

    std::ostringstream out;
    out << "start " << g.symbol(g.start()).name << " ;\n";
    for (const auto& sym : g.symbols()) {
        if (sym.kind != SymbolKind::ClassTerminal) continue;
        out << "terminal " << sym.name << " " << quote_pattern(sym.pattern);
        if (sym.content_bearing) out << " content";
        out << " ;\n";
    }
    for (const auto& pattern : g.lexical().skip_patterns)
        out << "skip " << quote_pattern(pattern) << " ;\n";
    if (g.lexical().newline_significant) out << "newline significant ;\n";
    if (!g.lexical().tight_punctuation.empty()) {
        out << "tight";
        for (const auto& lexeme : g.lexical().tight_punctuation)
            out << " " << quote_literal(lexeme);
        out << " ;\n";
    }
    for (const auto& p : g.productions()) {
        out << g.symbol(p.lhs).name << " ->";
        for (SymbolId s : p.rhs) {
            const Symbol& sym = g.symbol(s);
            if (sym.kind == SymbolKind::LiteralTerminal && sym.name != kNewlineName)
                out << " " << quote_literal(sym.lexeme);
            else
                out << " " << sym.name;
        }
        out << " ;\n";
    }
    return out.str();
}

ValidationReport validate(const Grammar& g) {
    ValidationReport report;
    if (g.start() < 0 || g.is_terminal(g.start())) {
        report.errors.push_back({"missing-start", "grammar has no start nonterminal"});
        return report;
    }

    // Nonterminals without productions.
    std::set<SymbolId> with_rules;
    for (const auto& p : g.productions()) with_rules.insert(p.lhs);
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.is_nonterminal(id) && !with_rules.count(id))
            report.errors.push_back({"no-production",
                                     "nonterminal " + g.symbol(id).name + " has no production"});

    // Productive = derives some terminal-only string.
    std::set<SymbolId> productive;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (productive.count(p.lhs)) continue;
            bool all = true;
            for (SymbolId s : p.rhs)
                if (g.is_nonterminal(s) && !productive.count(s)) { all = false; break; }
            if (all) { productive.insert(p.lhs); changed = true; }
        }
    }
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.is_nonterminal(id) && with_rules.count(id) && !productive.count(id))
            report.errors.push_back({"nonproductive",
                                     "nonterminal " + g.symbol(id).name +
                                     " derives no terminal string"});

    // Reachable from start.
    std::set<SymbolId> reachable{g.start()};
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (!reachable.count(p.lhs)) continue;
            for (SymbolId s : p.rhs)
                if (g.is_nonterminal(s) && reachable.insert(s).second) changed = true;
        }
    }
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.is_nonterminal(id) && !reachable.count(id))
            report.warnings.push_back({"unreachable",
                                       "nonterminal " + g.symbol(id).name +
                                       " is unreachable from start"});

    // Duplicate productions (same lhs, same rhs).
    std::map<std::pair<SymbolId, std::vector<SymbolId>>, int> seen;
    for (const auto& p : g.productions()) {
        auto key = std::make_pair(p.lhs, p.rhs);
        auto it = seen.find(key);
        if (it != seen.end())
            report.warnings.push_back({"duplicate-production",
                                       "production " + std::to_string(p.id) +
                                       " duplicates production " + std::to_string(it->second)});
        else
            seen.emplace(std::move(key), p.id);
    }
    return report;
}

Grammar epsilon_normalize(const Grammar& g) {
    bool any = false;
    for (const auto& p : g.productions())
        if (p.rhs.empty()) { any = true; break; }
    if (!any) return g;

    Grammar out = g;
    if (auto existing = out.find_literal(kEpsilonLexeme); existing) {
        // Already normalized grammars reuse their own marker; anything else collides.
        bool used_as_marker = false;
        for (const auto& p : out.productions())
            if (p.rhs.size() == 1 && p.rhs[0] == *existing &&
                p.origin == RuleOrigin::EpsilonMarker)
                used_as_marker = true;
        if (!used_as_marker)
            throw GrammarError(std::string("lexeme ") + kEpsilonLexeme +
                               " already taken; cannot normalize epsilon productions");
    }
    SymbolId eps = out.intern_literal(kEpsilonLexeme);
    for (auto& p : out.productions_mut()) {
        if (p.rhs.empty()) {
            p.rhs.push_back(eps);
            p.origin = RuleOrigin::EpsilonMarker;
        }
    }
    return out;
}

bool structural_equal(const Grammar& a, const Grammar& b) {
    if (a.symbol(a.start()).name != b.symbol(b.start()).name) return false;

    auto symbol_key = [](const Grammar& g) {
        std::map<std::string, std::tuple<SymbolKind, std::string, std::string, bool>> out;
        for (const auto& s : g.symbols())
            out[s.name] = {s.kind, s.lexeme, s.pattern, s.content_bearing};
        return out;
    };
    if (symbol_key(a) != symbol_key(b)) return false;

    if (a.productions().size() != b.productions().size()) return false;
    for (size_t i = 0; i < a.productions().size(); ++i) {
        const auto& pa = a.productions()[i];
        const auto& pb = b.productions()[i];
        if (pa.id != pb.id) return false;
        if (a.symbol(pa.lhs).name != b.symbol(pb.lhs).name) return false;
        if (pa.rhs.size() != pb.rhs.size()) return false;
        for (size_t j = 0; j < pa.rhs.size(); ++j)
            if (a.symbol(pa.rhs[j]).name != b.symbol(pb.rhs[j]).name) return false;
    }

    const auto& la = a.lexical();
    const auto& lb = b.lexical();
    return la.skip_patterns == lb.skip_patterns &&
           la.newline_significant == lb.newline_significant &&
           la.tight_punctuation == lb.tight_punctuation;
}

}  // namespace gramtrans
