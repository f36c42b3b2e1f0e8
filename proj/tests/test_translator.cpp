#include "doctest.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "gramtrans/earley.hpp"
#include "gramtrans/mathqa.hpp"
#include "gramtrans/sampler.hpp"
#include "gramtrans/transform.hpp"
#include "gramtrans/translator.hpp"
#include "gramtrans/tree.hpp"
#include "test_util.hpp"

namespace gt = gramtrans;
using gt::Grammar;
using gt::TranslationBundle;

namespace {

struct Pipeline {
    Grammar source;
    gt::TransformResult result;

    explicit Pipeline(const std::string& text, gt::TransformOptions opt = {})
        : source(gt::parse_grammar(text, "src")), result(gt::gramtrans(source, opt)) {}

    TranslationBundle forward() const { return {source, result.grammar, result.map, false}; }
    TranslationBundle backward() const { return {source, result.grammar, result.map, true}; }
};

}  // namespace

TEST_CASE("a simple program translates forward and back to the same text") {
    Pipeline p(gt::mathqa_grammar_text());
    std::string text = "n0 = 2 + 3\nn1 = n0 * n0\n";
    std::string there = gt::translate_program(text, p.forward());
    CHECK(there != text);
    std::string back = gt::translate_program(there, p.backward());
    CHECK(back == text);
}

TEST_CASE("forward translation inserts markers and fronts operators") {
    Pipeline p(gt::mathqa_grammar_text());
    std::string there = gt::translate_program("x = a + b\n", p.forward());
    CHECK(there.find("+ a b") != std::string::npos);
}

TEST_CASE("tree-level translation preserves structure both ways") {
    Pipeline p(gt::mathqa_grammar_text());
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        gt::SyntaxTree t;
        try {
            t = gt::sample(p.source, 14, seed);
        } catch (const gt::GrammarError&) {
            continue;
        }
        auto there = gt::translate_tree(t, p.forward());
        gt::check_tree(there, p.result.grammar);
        auto back = gt::translate_tree(there, p.backward());
        gt::check_tree(back, p.source);
        CHECK(gt::tree_equal(t, back));
    }
}

TEST_CASE("round trips hold for the layered transform too") {
    gt::TransformOptions opt;
    opt.mode = gt::TransformMode::Layers;
    opt.layers = 1;
    Pipeline p(gt::mathqa_grammar_text(), opt);
    std::string text = "a = f ( 1 , 2 ) ** g . h\n";
    std::string there = gt::translate_program(text, p.forward());
    std::string back = gt::translate_program(there, p.backward());
    CHECK(back == text);
}

TEST_CASE("translating an unparsable program reports the failing token") {
    Pipeline p(gt::mathqa_grammar_text());
    try {
        gt::translate_program("x = = 1\n", p.forward());
        FAIL("expected a translate error");
    } catch (const gt::TranslateError& e) {
        CHECK(e.kind == gt::TranslateError::Kind::Parse);
        CHECK(e.position == 2);
    }
}

TEST_CASE("translating text that does not lex reports the offset") {
    Pipeline p(gt::mathqa_grammar_text());
    try {
        gt::translate_program("x = `weird`\n", p.forward());
        FAIL("expected a translate error");
    } catch (const gt::TranslateError& e) {
        CHECK(e.kind == gt::TranslateError::Kind::Lex);
    }
}

TEST_CASE("ambiguous inputs are refused with two witness trees in the details") {
    Grammar amb = gt::parse_grammar("start S ;\nS -> S S ;\nS -> 'a' ;\n", "amb");
    auto result = gt::gramtrans(amb);
    TranslationBundle fwd{amb, result.grammar, result.map, false};
    try {
        gt::translate_program("a a a", fwd);
        FAIL("expected a translate error");
    } catch (const gt::TranslateError& e) {
        CHECK(e.kind == gt::TranslateError::Kind::Ambiguous);
        CHECK(e.details.find("(p") != std::string::npos);
    }
}

TEST_CASE("backward translation reconstructs deleted punctuation") {
    Pipeline p(gt::mathqa_grammar_text());
    // The rule-name baseline deletes non-content terminals outright, so a
    // backward pass has to resynthesize '=' and '(' ')' from the map alone.
    auto base = gt::grammar_rule_transform(p.source);
    TranslationBundle fwd{p.source, base.grammar, base.map, false};
    TranslationBundle bwd{p.source, base.grammar, base.map, true};
    std::string text = "y = f ( a , 1 )\n";
    std::string there = gt::translate_program(text, fwd);
    for (const auto& tok : gt::lex(there, base.grammar)) {
        CHECK(tok.lexeme != "=");
        CHECK(tok.lexeme != ",");
    }
    std::string back = gt::translate_program(there, bwd);
    CHECK(back == text);
}

TEST_CASE("frontier_delta matches the map's bookkeeping on whole programs") {
    Pipeline p(gt::mathqa_grammar_text());
    std::string text = "x = a + b * c\n";
    auto tokens = gt::lex(text, p.source);
    auto outcome = gt::earley_parse(p.source, tokens);
    REQUIRE(gt::is_tree(outcome));
    const auto& tree = std::get<gt::SyntaxTree>(outcome);

    auto there = gt::translate_tree(tree, p.forward());
    long delta = gt::frontier_delta(tree, p.result.map);
    CHECK(static_cast<long>(gt::frontier(there).size()) -
              static_cast<long>(gt::frontier(tree).size()) == delta);
}

TEST_CASE("corpus translation skips malformed records and reports counts") {
    Pipeline p(gt::mathqa_grammar_text());
    std::string jsonl = testutil::slurp(testutil::fixture_path("corpus_small.jsonl"));
    auto report = gt::translate_corpus(jsonl, p.forward());

    CHECK(report.total == 5);
    CHECK(report.translated == 3);
    CHECK(report.parse_failed == 1);
    CHECK(report.malformed == 1);
    CHECK(report.failed() == 2);

    // Output holds one line per successful record, in input order.
    int lines = 0;
    for (char c : report.output)
        if (c == '\n') ++lines;
    CHECK(lines == 3);
    CHECK(report.failures.find("\"line\"") != std::string::npos);
}

TEST_CASE("corpus output round-trips back to the original programs") {
    Pipeline p(gt::mathqa_grammar_text());
    std::string jsonl = testutil::slurp(testutil::fixture_path("corpus_small.jsonl"));
    auto fwd = gt::translate_corpus(jsonl, p.forward());
    auto bwd = gt::translate_corpus(fwd.output, p.backward());
    CHECK(bwd.total == 3);
    CHECK(bwd.translated == 3);

    // The surviving records' code fields must equal the originals exactly.
    auto codes = [](const std::string& text) {
        std::vector<std::string> out;
        std::istringstream in(text);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty()) continue;
            auto record = nlohmann::json::parse(line, nullptr, false);
            if (record.is_object() && record.contains("code") && record["code"].is_string())
                out.push_back(record["code"].get<std::string>());
        }
        return out;
    };
    // Translation canonicalizes spacing, so compare against linearize of the
    // original parse rather than the raw source text.
    auto canonical = [&](const std::string& text) {
        auto outcome = gt::earley_parse(p.source, gt::lex(text, p.source));
        REQUIRE(gt::is_tree(outcome));
        return gt::linearize(std::get<gt::SyntaxTree>(outcome), p.source);
    };
    auto original = codes(jsonl);
    auto returned = codes(bwd.output);
    REQUIRE(returned.size() == 3);
    REQUIRE(original.size() >= 3);
    for (size_t i = 0; i < 3; ++i) CHECK(returned[i] == canonical(original[i]));
}
