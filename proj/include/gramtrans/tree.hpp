#pragma once

#include <string>
#include <variant>
#include <vector>

#include "gramtrans/grammar.hpp"
#include "gramtrans/lexer.hpp"

namespace gramtrans {

/// Concrete syntax tree. Interior nodes carry the production that derived
/// them; leaves carry tokens. An epsilon production yields an interior node
/// with no children.
struct SyntaxTree {
    struct Leaf { Token token; };
    struct Interior {
        int production_id = 0;
        std::vector<SyntaxTree> children;
    };
    std::variant<Interior, Leaf> node;

    SyntaxTree() : node(Interior{}) {}
    explicit SyntaxTree(Leaf l) : node(std::move(l)) {}
    explicit SyntaxTree(Interior i) : node(std::move(i)) {}

    bool is_leaf() const { return std::holds_alternative<Leaf>(node); }
    const Leaf& leaf() const { return std::get<Leaf>(node); }
    const Interior& interior() const { return std::get<Interior>(node); }
    Interior& interior() { return std::get<Interior>(node); }

    static SyntaxTree make_leaf(Token t) { return SyntaxTree(Leaf{std::move(t)}); }
    static SyntaxTree make_interior(int production_id, std::vector<SyntaxTree> children) {
        return SyntaxTree(Interior{production_id, std::move(children)});
    }
};

/// Left-to-right leaf tokens.
std::vector<Token> frontier(const SyntaxTree& t);

/// Equality on structure, production ids, terminal ids and lexemes.
bool tree_equal(const SyntaxTree& a, const SyntaxTree& b);

/// Surface text: lexemes joined by single spaces, except no space before a
/// tight-punctuation lexeme and a newline (no surrounding spaces) for
/// NEWLINE tokens. lex(linearize(t), g) reproduces the frontier exactly.
std::string linearize(const SyntaxTree& t, const Grammar& g);
std::string linearize_tokens(const std::vector<Token>& tokens, const Grammar& g);

/// Debug form: (p<id> child child ...), leaves as "lexeme".
std::string to_sexpr(const SyntaxTree& t);

/// Throws if any interior node's children don't match its production's rhs.
void check_tree(const SyntaxTree& t, const Grammar& g);

}  // namespace gramtrans
