#include "gramtrans/translator.hpp"

#include <map>
#include <sstream>

#include <json.hpp>

#include "gramtrans/earley.hpp"

namespace gramtrans {

using nlohmann::json;

namespace {

SyntaxTree remap_leaf(const Token& tok, const Grammar& from, const Grammar& to) {
    const Symbol& sym = from.symbol(tok.terminal);
    std::optional<SymbolId> id = sym.kind == SymbolKind::LiteralTerminal
                                     ? to.find_literal(sym.lexeme)
                                     : to.find_symbol(sym.name);
    if (!id)
        throw TranslateError(TranslateError::Kind::Map,
                             "terminal " + from.display(tok.terminal) +
                                 " does not exist in the other grammar");
    Token out = tok;
    out.terminal = *id;
    return SyntaxTree::make_leaf(std::move(out));
}

SyntaxTree forward_tree(const SyntaxTree& t, const Grammar& src, const Grammar& dst,
                        const RuleMap& map) {
    if (t.is_leaf()) return remap_leaf(t.leaf().token, src, dst);

    const auto& in = t.interior();
    auto it = map.entries.find(in.production_id);
    if (it == map.entries.end())
        throw TranslateError(TranslateError::Kind::Map,
                             "production " + std::to_string(in.production_id) +
                                 " is not covered by the rule map");
    const RuleMapEntry& e = it->second;
    if (in.children.size() != e.original_rhs.size())
        throw TranslateError(TranslateError::Kind::Map,
                             "tree node for production " + std::to_string(in.production_id) +
                                 " does not match the source grammar");

    std::vector<SyntaxTree> children;
    children.reserve(e.slots.size());
    for (size_t j = 0; j < e.slots.size(); ++j) {
        if (e.slots[j] == -1) {
            const Symbol& sym = dst.symbol(e.transformed_rhs[j]);
            children.push_back(SyntaxTree::make_leaf(Token{e.transformed_rhs[j], sym.lexeme}));
            continue;
        }
        const SyntaxTree& child = in.children[static_cast<size_t>(e.slots[j])];
        children.push_back(child.is_leaf() ? remap_leaf(child.leaf().token, src, dst)
                                           : forward_tree(child, src, dst, map));
    }
    return SyntaxTree::make_interior(in.production_id, std::move(children));
}

SyntaxTree backward_tree(const SyntaxTree& t, const Grammar& src, const Grammar& dst,
                         const RuleMap& map) {
    if (t.is_leaf()) return remap_leaf(t.leaf().token, dst, src);

    const auto& in = t.interior();
    auto it = map.entries.find(in.production_id);
    if (it == map.entries.end())
        throw TranslateError(TranslateError::Kind::Map,
                             "production " + std::to_string(in.production_id) +
                                 " is not covered by the rule map");
    const RuleMapEntry& e = it->second;
    if (in.children.size() != e.transformed_rhs.size())
        throw TranslateError(TranslateError::Kind::Map,
                             "tree node for production " + std::to_string(in.production_id) +
                                 " does not match the transformed grammar");

    std::map<int, size_t> slot_of;
    for (size_t j = 0; j < e.slots.size(); ++j)
        if (e.slots[j] >= 0) slot_of[e.slots[j]] = j;

    std::vector<SyntaxTree> children;
    children.reserve(e.original_rhs.size());
    for (int i = 0; i < static_cast<int>(e.original_rhs.size()); ++i) {
        auto at = slot_of.find(i);
        if (at == slot_of.end()) {
            const Symbol& sym = src.symbol(e.original_rhs[static_cast<size_t>(i)]);
            if (sym.kind != SymbolKind::LiteralTerminal)
                throw TranslateError(TranslateError::Kind::Map,
                                     "cannot reconstruct deleted class terminal " + sym.name);
            children.push_back(SyntaxTree::make_leaf(
                Token{e.original_rhs[static_cast<size_t>(i)], sym.lexeme}));
            continue;
        }
        const SyntaxTree& child = in.children[at->second];
        children.push_back(child.is_leaf() ? remap_leaf(child.leaf().token, dst, src)
                                           : backward_tree(child, src, dst, map));
    }
    return SyntaxTree::make_interior(in.production_id, std::move(children));
}

}  // namespace

SyntaxTree translate_tree(const SyntaxTree& t, const TranslationBundle& bundle) {
    return bundle.backward ? backward_tree(t, bundle.source, bundle.target, bundle.map)
                           : forward_tree(t, bundle.source, bundle.target, bundle.map);
}

std::string translate_program(const std::string& text, const TranslationBundle& bundle) {
    const Grammar& in_g = bundle.backward ? bundle.target : bundle.source;
    const Grammar& out_g = bundle.backward ? bundle.source : bundle.target;

    std::vector<Token> tokens;
    try {
        tokens = lex(text, in_g);
    } catch (const LexError& err) {
        throw TranslateError(TranslateError::Kind::Lex, err.what(), err.offset);
    }

    ParseOutcome outcome = earley_parse(in_g, tokens);
    if (is_reject(outcome)) {
        const Reject& r = std::get<Reject>(outcome);
        std::ostringstream msg;
        msg << "parse failed at token " << r.position;
        if (r.position < tokens.size()) msg << " (" << in_g.display(tokens[r.position].terminal) << ")";
        if (!r.expected.empty()) {
            msg << ", expected";
            for (size_t i = 0; i < r.expected.size(); ++i)
                msg << (i ? ", " : " ") << in_g.display(r.expected[i]);
        }
        throw TranslateError(TranslateError::Kind::Parse, msg.str(), r.position);
    }
    if (is_ambiguous(outcome)) {
        const Ambiguous& a = std::get<Ambiguous>(outcome);
        throw TranslateError(TranslateError::Kind::Ambiguous,
                             "input parses ambiguously; refusing to translate", 0,
                             to_sexpr(a.first) + "\n" + to_sexpr(a.second));
    }
    SyntaxTree out = translate_tree(std::get<SyntaxTree>(outcome), bundle);
    return linearize(out, out_g);
}

CorpusReport translate_corpus(const std::string& jsonl, const TranslationBundle& bundle,
                              const std::string& field) {
    CorpusReport report;
    std::ostringstream out, failures;
    std::istringstream lines(jsonl);
    std::string line;
    int lineno = 0;

    auto fail = [&](const std::string& kind, const std::string& message) {
        json entry{{"schema", 1}, {"line", lineno}, {"kind", kind}, {"message", message}};
        failures << entry.dump() << "\n";
    };

    while (std::getline(lines, line)) {
        ++lineno;
        if (line.empty()) continue;
        ++report.total;

        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.is_object()) {
            ++report.malformed;
            fail("malformed", "line is not a JSON object");
            continue;
        }
        if (!record.contains(field) || !record[field].is_string()) {
            ++report.malformed;
            fail("missing-field", "record lacks a string \"" + field + "\" field");
            continue;
        }
        try {
            record[field] = translate_program(record[field].get<std::string>(), bundle);
        } catch (const TranslateError& err) {
            switch (err.kind) {
                case TranslateError::Kind::Lex: ++report.lex_failed; fail("lex", err.what()); break;
                case TranslateError::Kind::Ambiguous:
                    ++report.ambiguous;
                    fail("ambiguous", err.what());
                    break;
                default: ++report.parse_failed; fail("parse", err.what()); break;
            }
            continue;
        }
        ++report.translated;
        out << record.dump() << "\n";
    }
    report.output = out.str();
    report.failures = failures.str();
    return report;
}

int frontier_delta(const SyntaxTree& t, const RuleMap& map) {
    if (t.is_leaf()) return 0;
    const auto& in = t.interior();
    auto it = map.entries.find(in.production_id);
    if (it == map.entries.end())
        throw TranslateError(TranslateError::Kind::Map,
                             "production " + std::to_string(in.production_id) +
                                 " is not covered by the rule map");
    const RuleMapEntry& e = it->second;
    int delta = e.insertion_count() - static_cast<int>(e.deleted_originals().size());
    for (const SyntaxTree& child : in.children)
        if (!child.is_leaf()) delta += frontier_delta(child, map);
    return delta;
}

}  // namespace gramtrans
