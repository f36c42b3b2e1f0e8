#include "gramtrans/tree.hpp"

#include <algorithm>
#include <sstream>

namespace gramtrans {

namespace {

void collect_frontier(const SyntaxTree& t, std::vector<Token>& out) {
    if (t.is_leaf()) {
        out.push_back(t.leaf().token);
        return;
    }
    for (const auto& child : t.interior().children) collect_frontier(child, out);
}

}  // namespace

std::vector<Token> frontier(const SyntaxTree& t) {
    std::vector<Token> out;
    collect_frontier(t, out);
    return out;
}

bool tree_equal(const SyntaxTree& a, const SyntaxTree& b) {
    if (a.is_leaf() != b.is_leaf()) return false;
    if (a.is_leaf())
        return a.leaf().token.terminal == b.leaf().token.terminal &&
               a.leaf().token.lexeme == b.leaf().token.lexeme;
    const auto& ia = a.interior();
    const auto& ib = b.interior();
    if (ia.production_id != ib.production_id) return false;
    if (ia.children.size() != ib.children.size()) return false;
    for (size_t i = 0; i < ia.children.size(); ++i)
        if (!tree_equal(ia.children[i], ib.children[i])) return false;
    return true;
}

std::string linearize_tokens(const std::vector<Token>& tokens, const Grammar& g) {
    const auto& tight = g.lexical().tight_punctuation;
    std::string out;
    bool after_newline = true;  // suppresses the leading separator too
    for (const auto& tok : tokens) {
        const Symbol& sym = g.symbol(tok.terminal);
        bool is_newline = sym.name == kNewlineName;
        if (is_newline) {
            out.push_back('\n');
            after_newline = true;
            continue;
        }
        bool glue = std::find(tight.begin(), tight.end(), tok.lexeme) != tight.end();
        if (!after_newline && !glue) out.push_back(' ');
        out += tok.lexeme;
        after_newline = false;
    }
    return out;
}

std::string linearize(const SyntaxTree& t, const Grammar& g) {
    return linearize_tokens(frontier(t), g);
}

namespace {

void sexpr(const SyntaxTree& t, std::ostringstream& out) {
    if (t.is_leaf()) {
        out << '"';
        for (char c : t.leaf().token.lexeme) {
            if (c == '"' || c == '\\') out << '\\';
            if (c == '\n') { out << "\\n"; continue; }
            out << c;
        }
        out << '"';
        return;
    }
    out << "(p" << t.interior().production_id;
    for (const auto& child : t.interior().children) {
        out << ' ';
        sexpr(child, out);
    }
    out << ')';
}

}  // namespace

std::string to_sexpr(const SyntaxTree& t) {
    std::ostringstream out;
    sexpr(t, out);
    return out.str();
}

void check_tree(const SyntaxTree& t, const Grammar& g) {
    if (t.is_leaf()) {
        if (!g.is_terminal(t.leaf().token.terminal))
            throw GrammarError("leaf token is not a terminal of this grammar");
        return;
    }
    const auto& node = t.interior();
    const Production& p = g.production_by_id(node.production_id);
    if (node.children.size() != p.rhs.size())
        throw GrammarError("production " + std::to_string(p.id) + " expects " +
                           std::to_string(p.rhs.size()) + " children, tree has " +
                           std::to_string(node.children.size()));
    for (size_t i = 0; i < p.rhs.size(); ++i) {
        const SyntaxTree& child = node.children[i];
        SymbolId expected = p.rhs[i];
        if (g.is_terminal(expected)) {
            if (!child.is_leaf() || child.leaf().token.terminal != expected)
                throw GrammarError("child " + std::to_string(i) + " of production " +
                                   std::to_string(p.id) + " should be terminal " +
                                   g.display(expected));
        } else {
            if (child.is_leaf())
                throw GrammarError("child " + std::to_string(i) + " of production " +
                                   std::to_string(p.id) + " should derive " +
                                   g.display(expected));
            const Production& cp = g.production_by_id(child.interior().production_id);
            if (cp.lhs != expected)
                throw GrammarError("child " + std::to_string(i) + " of production " +
                                   std::to_string(p.id) + " derives the wrong nonterminal");
        }
        check_tree(child, g);
    }
}

}  // namespace gramtrans
