#include "gramtrans/mathqa.hpp"

#include <sstream>

#include "gramtrans/analysis.hpp"
#include "gramtrans/earley.hpp"
#include "gramtrans/lexer.hpp"

namespace gramtrans {

const char* mathqa_grammar_text() {
    return R"(# Assignment-sequence DSL: arithmetic over identifiers, numbers, calls
# and attributes, one statement per line.
start program ;

terminal identifier /[A-Za-z_][A-Za-z0-9_]*/ content ;
terminal number /[0-9]+(\.[0-9]+)?/ content ;
skip /[ \t]+/ ;
newline significant ;

program -> statement_list ;
statement_list -> statement_list statement | statement ;
statement -> assignment NEWLINE ;
assignment -> identifier '=' expression ;
expression -> binary_operator | term ;
binary_operator -> expression '+' term | expression '-' term ;
term -> term '*' power | term '/' power | power ;
power -> primary_expression '**' power | primary_expression ;
primary_expression -> call | attribute | identifier | number | '(' expression ')' ;
call -> primary_expression argument_list ;
attribute -> primary_expression '.' identifier ;
argument_list -> '(' arguments ')' | '(' ')' ;
arguments -> arguments ',' expression | expression ;
)";
}

DslSuite build_dsl_suite() {
    DslSuite suite;
    suite.base = parse_grammar(mathqa_grammar_text());
    suite.base.name = "mathqa";

    LrResult base_lr = is_lr1(suite.base);
    if (!base_lr.holds)
        throw GrammarError("suite class check failed: base grammar is not LR(1): " +
                           base_lr.conflict);
    if (is_ll_k(suite.base, 2).holds)
        throw GrammarError("suite class check failed: base grammar is unexpectedly LL(2)");

    TransformOptions options;
    TransformResult full = gramtrans(suite.base, options);
    suite.ll1 = std::move(full.grammar);
    suite.map_ll1 = std::move(full.map);
    suite.trace_ll1 = std::move(full.trace);
    if (!is_ll_k(suite.ll1, 1).holds)
        throw GrammarError("suite class check failed: transformed grammar is not LL(1)");

    // Categorize-then-select variant: every primary-expression rule first
    // announces the category with a shared terminal, pushing the
    // distinguishing token to the second position.
    suite.ll2 = suite.ll1;
    if (suite.ll2.find_literal("<exp>"))
        throw GrammarError("suite construction: the <exp> lexeme is already taken");
    SymbolId exp = suite.ll2.intern_literal("<exp>");
    auto prim = suite.ll2.find_symbol("primary_expression");
    if (!prim) throw GrammarError("suite construction: primary_expression missing");

    suite.map_ll2 = suite.map_ll1;
    for (int id : suite.ll2.productions_of(*prim)) {
        Production& p = suite.ll2.production_by_id_mut(id);
        p.rhs.insert(p.rhs.begin(), exp);
        p.origin = RuleOrigin::TransformInserted;
        RuleMapEntry& e = suite.map_ll2.entries.at(id);
        e.transformed_rhs = p.rhs;
        e.slots.insert(e.slots.begin(), -1);
    }
    suite.ll2.name = "mathqa.ll2";
    suite.map_ll2.target = suite.ll2.name;
    check_rule_map(suite.map_ll2, suite.base, suite.ll2);

    if (is_ll_k(suite.ll2, 1).holds)
        throw GrammarError("suite class check failed: LL(2) variant is unexpectedly LL(1)");
    if (!is_ll_k(suite.ll2, 2).holds)
        throw GrammarError("suite class check failed: LL(2) variant fails the LL(2) test");
    LrResult ll2_lr = is_lr1(suite.ll2);
    if (!ll2_lr.holds)
        throw GrammarError("suite class check failed: LL(2) variant is not LR(1): " +
                           ll2_lr.conflict);

    const Production& assign = suite.base.production_by_id(5);
    auto ident = suite.base.find_symbol("identifier");
    if (suite.base.symbol(assign.lhs).name != "assignment" || !ident ||
        assign.rhs.empty() || assign.rhs[0] != *ident)
        throw GrammarError("suite construction: assignment rule moved");
    suite.ncfg.assignment_rule_id = assign.id;
    suite.ncfg.variable_terminal = *ident;
    return suite;
}

namespace {

void collect_ncfg_tokens(const SyntaxTree& t, const NcfgConfig& cfg, std::vector<Token>& out) {
    if (t.is_leaf()) {
        out.push_back(t.leaf().token);
        return;
    }
    const auto& in = t.interior();
    for (const SyntaxTree& child : in.children) collect_ncfg_tokens(child, cfg, out);
    if (in.production_id == cfg.assignment_rule_id) {
        if (in.children.empty() || !in.children.front().is_leaf())
            throw NcfgError("assignment node does not start with its variable");
        Token var = in.children.front().leaf().token;
        out.push_back(Token{var.terminal, var.lexeme});
    }
}

}  // namespace

std::string ncfg_encode(const SyntaxTree& t, const Grammar& base, const NcfgConfig& cfg) {
    std::vector<Token> tokens;
    collect_ncfg_tokens(t, cfg, tokens);
    return linearize_tokens(tokens, base);
}

SyntaxTree ncfg_decode(const std::string& text, const Grammar& base, const NcfgConfig& cfg) {
    std::vector<Token> tokens;
    try {
        tokens = lex(text, base);
    } catch (const LexError& err) {
        throw NcfgError(std::string("cannot tokenize: ") + err.what());
    }
    auto newline = base.find_symbol(kNewlineName);
    if (!newline) throw NcfgError("base grammar has no NEWLINE terminal");

    std::vector<Token> stripped;
    std::vector<Token> segment;
    int statement = 0;
    auto flush = [&](const Token& nl) {
        if (segment.empty()) {
            stripped.push_back(nl);
            return;
        }
        ++statement;
        if (segment.size() < 2)
            throw NcfgError("statement " + std::to_string(statement) +
                            " is too short to carry its repeated variable");
        const Token& var = segment.front();
        const Token& rep = segment.back();
        if (rep.terminal != cfg.variable_terminal || var.lexeme != rep.lexeme)
            throw NcfgError("statement " + std::to_string(statement) + " assigns \"" +
                            var.lexeme + "\" but repeats \"" + rep.lexeme + "\"");
        segment.pop_back();
        stripped.insert(stripped.end(), segment.begin(), segment.end());
        stripped.push_back(nl);
        segment.clear();
    };
    for (const Token& tok : tokens) {
        if (tok.terminal == *newline)
            flush(tok);
        else
            segment.push_back(tok);
    }
    if (!segment.empty()) flush(Token{*newline, "\n"});

    ParseOutcome outcome = earley_parse(base, stripped);
    if (is_reject(outcome)) {
        const Reject& r = std::get<Reject>(outcome);
        throw NcfgError("stripped program does not parse at token " +
                        std::to_string(r.position));
    }
    if (is_ambiguous(outcome)) throw NcfgError("stripped program parses ambiguously");
    return std::get<SyntaxTree>(outcome);
}

}  // namespace gramtrans
