#include "doctest.h"

#include "gramtrans/earley.hpp"
#include "gramtrans/mathqa.hpp"
#include "gramtrans/tree.hpp"
#include "test_util.hpp"

using namespace gramtrans;

namespace {

SyntaxTree parse_one(const Grammar& g, const std::string& text) {
    auto outcome = earley_parse(g, lex(text, g));
    REQUIRE(is_tree(outcome));
    return std::get<SyntaxTree>(outcome);
}

}  // namespace

TEST_CASE("frontier lists leaf tokens left to right") {
    Grammar g = parse_grammar(mathqa_grammar_text(), "mathqa");
    SyntaxTree t = parse_one(g, "x = a + 1\n");
    auto leaves = frontier(t);
    std::string joined;
    for (const auto& tok : leaves) joined += tok.lexeme + "|";
    CHECK(joined == "x|=|a|+|1|\n|");
}

TEST_CASE("linearize round-trips through the lexer") {
    Grammar g = parse_grammar(mathqa_grammar_text(), "mathqa");
    for (const char* text : {"x = a + 1\n", "y = f(a, b) * 2\n", "z = m.sqrt(k)\n"}) {
        CAPTURE(text);
        SyntaxTree t = parse_one(g, text);
        std::string rendered = linearize(t, g);
        auto again = lex(rendered, g);
        auto original = frontier(t);
        REQUIRE(again.size() == original.size());
        for (size_t i = 0; i < again.size(); ++i) {
            CHECK(again[i].terminal == original[i].terminal);
            CHECK(again[i].lexeme == original[i].lexeme);
        }
    }
}

TEST_CASE("tight punctuation suppresses the leading space") {
    Grammar g = parse_grammar(
        "start S ;\n"
        "terminal word /[a-z]+/ content ;\n"
        "skip /[ ]+/ ;\n"
        "tight ',' ;\n"
        "S -> word ',' word ;\n");
    SyntaxTree t = parse_one(g, "a , b");
    CHECK(linearize(t, g) == "a, b");
}

TEST_CASE("mathqa renders with canonical single spaces") {
    Grammar g = parse_grammar(mathqa_grammar_text(), "mathqa");
    SyntaxTree t = parse_one(g, "y = f(a, b)\n");
    CHECK(linearize(t, g) == "y = f ( a , b )\n");
}

TEST_CASE("tree_equal distinguishes lexemes and shapes") {
    Grammar g = parse_grammar(mathqa_grammar_text(), "mathqa");
    SyntaxTree a = parse_one(g, "x = 1\n");
    SyntaxTree b = parse_one(g, "x = 1\n");
    SyntaxTree c = parse_one(g, "x = 2\n");
    SyntaxTree d = parse_one(g, "x = 1 + 1\n");
    CHECK(tree_equal(a, b));
    CHECK(!tree_equal(a, c));
    CHECK(!tree_equal(a, d));
}

TEST_CASE("to_sexpr names productions and quotes leaves") {
    Grammar g = parse_grammar("start S ;\nS -> 'a' ;\n");
    SyntaxTree t = parse_one(g, "a");
    CHECK(to_sexpr(t) == "(p1 \"a\")");
}

TEST_CASE("check_tree accepts parser output and rejects a tampered node") {
    Grammar g = parse_grammar(mathqa_grammar_text(), "mathqa");
    SyntaxTree t = parse_one(g, "x = 1 * 2\n");
    CHECK_NOTHROW(check_tree(t, g));

    SyntaxTree broken = t;
    broken.interior().children.pop_back();
    CHECK_THROWS_AS(check_tree(broken, g), GrammarError);
}
