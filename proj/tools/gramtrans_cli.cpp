#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gramtrans/analysis.hpp"
#include "gramtrans/earley.hpp"
#include "gramtrans/ll1.hpp"
#include "gramtrans/transform.hpp"
#include "gramtrans/translator.hpp"

namespace gt = gramtrans;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitGrammar = 2;
constexpr int kExitTransform = 3;
constexpr int kExitParse = 4;

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw gt::GrammarError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void spit(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw gt::GrammarError("cannot write " + path);
    out << text;
}

gt::Grammar load_grammar(const std::string& path) {
    gt::Grammar g = gt::parse_grammar(slurp(path));
    g.name = std::filesystem::path(path).stem().string();
    return g;
}

uint64_t seed_from_env() {
    if (const char* env = std::getenv("GRAMTRANS_SEED")) {
        try {
            return std::stoull(env);
        } catch (...) {
            throw gt::GrammarError("GRAMTRANS_SEED is not a number");
        }
    }
    return 42;
}

json witness_json(const gt::LlResult& r, const gt::Grammar& g) {
    json out{{"holds", r.holds}};
    if (!r.holds && r.witness) {
        json clash = json::array();
        for (gt::SymbolId s : r.witness->clash) clash.push_back(s < 0 ? "$" : g.display(s));
        out["witness"] = {{"rule_a", r.witness->production_a},
                         {"rule_b", r.witness->production_b},
                         {"clash", clash}};
    }
    return out;
}

int cmd_check(const std::string& path, bool as_json) {
    gt::Grammar g = load_grammar(path);
    gt::ClassReport report = gt::classify(g);
    if (!as_json) {
        std::cout << gt::report_text(report, g);
        return kExitOk;
    }
    json cycle = json::array();
    for (gt::SymbolId id : report.left_recursion.cycle) cycle.push_back(g.symbol(id).name);
    json notes = json::array();
    for (const std::string& n : report.notes) notes.push_back(n);
    json out{{"schema", 1},
             {"grammar", report.grammar},
             {"ll1", witness_json(report.ll1, g)},
             {"ll2", witness_json(report.ll2, g)},
             {"lr1",
              {{"holds", report.lr1.holds},
               {"states", report.lr1.states},
               {"conflict", report.lr1.conflict}}},
             {"left_recursion", {{"present", report.left_recursion.present}, {"cycle", cycle}}},
             {"notes", notes}};
    std::cout << out.dump(2) << "\n";
    return kExitOk;
}

json trace_to_json(const gt::TransformTrace& trace) {
    json iterations = json::array();
    for (const auto& it : trace.iterations) {
        json rounds = json::array();
        for (const auto& r : it.rounds) {
            json conflicts = json::array();
            for (const auto& c : r.conflicts)
                conflicts.push_back({{"kind", c.kind},
                                     {"lhs", c.lhs},
                                     {"witness", c.witness},
                                     {"rules", c.rules}});
            json inserted = json::array();
            for (const auto& [rule, terminal] : r.inserted)
                inserted.push_back({{"rule", rule}, {"terminal", terminal}});
            rounds.push_back({{"conflicts", conflicts},
                              {"hitting_set", r.hitting_set},
                              {"inserted", inserted}});
        }
        iterations.push_back({{"depth", it.depth}, {"rounds", rounds}});
    }
    json reorder = json::array();
    for (const auto& e : trace.reorder)
        reorder.push_back({{"rule", e.production_id},
                           {"terminal", e.terminal},
                           {"from_position", e.from_position},
                           {"removed_marker", e.removed_marker},
                           {"applied", e.applied},
                           {"note", e.note}});
    return json{{"schema", 1},
                {"mode", trace.mode},
                {"iterations", iterations},
                {"reorder", reorder},
                {"introduced_before_reorder", trace.introduced_before_reorder},
                {"introduced_after_reorder", trace.introduced_after_reorder},
                {"depth_reached", trace.depth_reached}};
}

std::string trace_to_text(const gt::TransformTrace& trace) {
    std::ostringstream out;
    out << "mode: " << trace.mode << "\n";
    for (const auto& it : trace.iterations) {
        out << "depth " << it.depth << ":\n";
        int n = 0;
        for (const auto& r : it.rounds) {
            out << "  round " << ++n << ":\n";
            for (const auto& c : r.conflicts) {
                out << "    conflict " << c.kind << " in " << c.lhs << " on " << c.witness
                    << ": rules";
                for (size_t i = 0; i < c.rules.size(); ++i)
                    out << (i ? ", " : " ") << c.rules[i];
                out << "\n";
            }
            out << "    hitting set:";
            for (size_t i = 0; i < r.hitting_set.size(); ++i)
                out << (i ? ", " : " ") << r.hitting_set[i];
            out << "\n";
            for (const auto& [rule, terminal] : r.inserted)
                out << "    inserted '" << terminal << "' into rule " << rule << "\n";
        }
    }
    if (!trace.reorder.empty()) {
        out << "reorder:\n";
        for (const auto& e : trace.reorder) {
            if (e.applied)
                out << "  rule " << e.production_id << ": moved " << e.terminal
                    << " from position " << e.from_position << " to front, removing '"
                    << e.removed_marker << "' (" << e.note << ")\n";
            else
                out << "  rule " << e.production_id << ": move of " << e.terminal << " "
                    << e.note << "\n";
        }
    }
    out << "introduced terminals: " << trace.introduced_before_reorder
        << " before reordering, " << trace.introduced_after_reorder << " after\n";
    out << "depth reached: " << trace.depth_reached << "\n";
    return out.str();
}

struct TransformArgs {
    std::string grammar_path;
    std::string mode = "full";
    bool no_reorder = false;
    int depth_cap = 32;
    std::string out_grammar, out_map, out_trace;
    bool as_json = false;
};

int cmd_transform(const TransformArgs& args) {
    gt::Grammar g = load_grammar(args.grammar_path);

    gt::TransformOptions options;
    options.seed = seed_from_env();
    options.depth_cap = args.depth_cap;
    options.reorder = !args.no_reorder;
    std::string suffix = "ll1";
    if (args.mode == "full") {
        options.mode = gt::TransformMode::Full;
    } else if (args.mode.rfind("layers=", 0) == 0) {
        options.mode = gt::TransformMode::Layers;
        options.layers = std::stoi(args.mode.substr(7));
        if (options.layers < 1) throw gt::GrammarError("--mode layers=K needs K >= 1");
        suffix = "layers" + std::to_string(options.layers);
    } else {
        throw gt::GrammarError("unknown --mode (expected full or layers=K)");
    }

    gt::TransformResult result;
    try {
        result = gt::gramtrans(g, options);
    } catch (const gt::TransformError& err) {
        std::cerr << "transform failed: " << err.what() << "\n";
        for (const auto& c : err.live_conflicts) {
            std::cerr << "  live conflict in rule set:";
            for (int id : c.production_ids) std::cerr << " " << id;
            std::cerr << "\n";
        }
        return kExitTransform;
    }

    std::filesystem::path base(args.grammar_path);
    base.replace_extension();
    std::string stem = base.string() + "." + suffix;
    std::string grammar_path = args.out_grammar.empty() ? stem + ".g" : args.out_grammar;
    std::string map_path = args.out_map.empty() ? stem + ".map.json" : args.out_map;
    std::string trace_path = args.out_trace.empty()
                                 ? stem + (args.as_json ? ".trace.json" : ".trace.txt")
                                 : args.out_trace;

    std::string header = "# " + result.grammar.name + ": derived from " +
                         std::filesystem::path(args.grammar_path).filename().string() +
                         " (mode " + args.mode + ")\n";
    spit(grammar_path, header + gt::serialize_grammar(result.grammar));
    spit(map_path, gt::rule_map_to_json(result.map, g, result.grammar));
    spit(trace_path, args.as_json ? trace_to_json(result.trace).dump(2) + "\n"
                                  : trace_to_text(result.trace));

    std::cout << "wrote " << grammar_path << ", " << map_path << ", " << trace_path << "\n";
    std::cout << "introduced terminals: " << result.trace.introduced_before_reorder
              << " before reordering, " << result.trace.introduced_after_reorder << " after\n";
    return kExitOk;
}

struct TranslateArgs {
    std::string src_path, dst_path, map_path;
    bool backward = false;
    bool corpus = false;
    std::string field = "code";
    std::string in_path, out_path;
    bool as_json = false;
};

int cmd_translate(const TranslateArgs& args) {
    gt::Grammar src = load_grammar(args.src_path);
    gt::Grammar dst = load_grammar(args.dst_path);
    gt::RuleMap map = gt::rule_map_from_json(slurp(args.map_path), src, dst);
    gt::TranslationBundle bundle{src, dst, map, args.backward};

    if (!args.corpus) {
        std::string text = slurp(args.in_path);
        try {
            spit(args.out_path, gt::translate_program(text, bundle));
        } catch (const gt::TranslateError& err) {
            std::cerr << "translate failed: " << err.what() << "\n";
            if (!err.details.empty()) std::cerr << err.details << "\n";
            return kExitParse;
        }
        std::cout << "wrote " << args.out_path << "\n";
        return kExitOk;
    }

    gt::CorpusReport report = gt::translate_corpus(slurp(args.in_path), bundle, args.field);
    spit(args.out_path, report.output);
    std::string sidecar = args.out_path + ".failures.jsonl";
    spit(sidecar, report.failures);
    if (args.as_json) {
        json out{{"schema", 1},
                 {"total", report.total},
                 {"translated", report.translated},
                 {"lex_failed", report.lex_failed},
                 {"parse_failed", report.parse_failed},
                 {"ambiguous", report.ambiguous},
                 {"malformed", report.malformed},
                 {"output", args.out_path},
                 {"failures", sidecar}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "translated " << report.translated << "/" << report.total
                  << " records (lex " << report.lex_failed << ", parse " << report.parse_failed
                  << ", ambiguous " << report.ambiguous << ", malformed " << report.malformed
                  << " failures)\n";
        std::cout << "wrote " << args.out_path << " and " << sidecar << "\n";
    }
    return kExitOk;
}

struct StatsArgs {
    std::string src_path;
    std::string corpus_path;
    std::string field = "code";
    std::vector<std::string> bundles;  // grammar.g:map.json
    bool as_json = false;
};

int cmd_stats(const StatsArgs& args) {
    gt::Grammar src = load_grammar(args.src_path);

    struct Entry {
        std::string name;
        gt::Grammar grammar;
        gt::RuleMap map;
        long long tokens = 0;
    };
    std::vector<Entry> entries;
    for (const std::string& spec : args.bundles) {
        size_t colon = spec.find(':');
        if (colon == std::string::npos)
            throw gt::GrammarError("--vs wants grammar-file:map-file, got " + spec);
        Entry e;
        e.grammar = load_grammar(spec.substr(0, colon));
        e.map = gt::rule_map_from_json(slurp(spec.substr(colon + 1)), src, e.grammar);
        e.name = e.grammar.name;
        entries.push_back(std::move(e));
    }

    long long original_tokens = 0;
    int ok = 0, failed = 0;
    std::istringstream lines(slurp(args.corpus_path));
    std::string line;
    while (std::getline(lines, line)) {
        if (line.empty()) continue;
        json record = json::parse(line, nullptr, false);
        if (record.is_discarded() || !record.contains(args.field) ||
            !record[args.field].is_string()) {
            ++failed;
            continue;
        }
        std::vector<gt::Token> tokens;
        gt::ParseOutcome outcome;
        try {
            tokens = gt::lex(record[args.field].get<std::string>(), src);
            outcome = gt::earley_parse(src, tokens);
        } catch (const gt::LexError&) {
            ++failed;
            continue;
        }
        if (!gt::is_tree(outcome)) {
            ++failed;
            continue;
        }
        const gt::SyntaxTree& tree = std::get<gt::SyntaxTree>(outcome);
        ++ok;
        original_tokens += static_cast<long long>(tokens.size());
        for (Entry& e : entries) {
            gt::TranslationBundle bundle{src, e.grammar, e.map, false};
            e.tokens += static_cast<long long>(gt::frontier(gt::translate_tree(tree, bundle)).size());
        }
    }
    if (ok == 0) throw gt::GrammarError("no corpus record parsed; nothing to report");

    auto avg = [&](long long total) { return static_cast<double>(total) / ok; };
    auto ratio = [&](long long total) {
        return 100.0 * static_cast<double>(total) / static_cast<double>(original_tokens);
    };

    bool monotone = true;
    for (size_t i = 0; i + 1 < entries.size(); ++i)
        if (entries[i].tokens > entries[i + 1].tokens) monotone = false;

    if (args.as_json) {
        json reps = json::array();
        reps.push_back({{"name", src.name}, {"avg_tokens", avg(original_tokens)}, {"ratio", 100.0}});
        for (const Entry& e : entries)
            reps.push_back(
                {{"name", e.name}, {"avg_tokens", avg(e.tokens)}, {"ratio", ratio(e.tokens)}});
        json out{{"schema", 1},
                 {"unit", "grammar terminals (not subword tokens)"},
                 {"records_ok", ok},
                 {"records_failed", failed},
                 {"monotone_in_listed_order", monotone},
                 {"representations", reps}};
        std::cout << out.dump(2) << "\n";
        return kExitOk;
    }

    std::cout << "token unit: grammar terminals (not subword tokens)\n";
    std::cout << "records: " << ok << " ok, " << failed << " failed (excluded)\n";
    char buf[160];
    std::snprintf(buf, sizeof buf, "%-24s avg %8.2f tokens  ratio %6.1f%%", src.name.c_str(),
                  avg(original_tokens), 100.0);
    std::cout << buf << "\n";
    for (const Entry& e : entries) {
        std::snprintf(buf, sizeof buf, "%-24s avg %8.2f tokens  ratio %6.1f%%", e.name.c_str(),
                      avg(e.tokens), ratio(e.tokens));
        std::cout << buf << "\n";
    }
    if (entries.size() > 1)
        std::cout << (monotone ? "note: token counts are monotone in the listed order\n"
                               : "note: token counts are NOT monotone in the listed order\n");
    return kExitOk;
}

struct ParseArgs {
    std::string grammar_path, input_path;
    bool use_ll1 = false;
    bool ambiguity = false;
    bool as_json = false;
};

int report_reject(const gt::Grammar& g, const gt::Reject& reject, bool as_json) {
    if (as_json) {
        json expected = json::array();
        for (gt::SymbolId s : reject.expected) expected.push_back(g.display(s));
        json out{{"schema", 1},
                 {"status", "reject"},
                 {"position", reject.position},
                 {"expected", expected}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::cerr << "reject at token " << reject.position;
        if (!reject.expected.empty()) {
            std::cerr << ", expected";
            for (size_t i = 0; i < reject.expected.size(); ++i)
                std::cerr << (i ? ", " : " ") << g.display(reject.expected[i]);
        }
        std::cerr << "\n";
    }
    return kExitParse;
}

int cmd_parse(const ParseArgs& args) {
    gt::Grammar g = load_grammar(args.grammar_path);
    std::vector<gt::Token> tokens;
    try {
        tokens = gt::lex(slurp(args.input_path), g);
    } catch (const gt::LexError& err) {
        std::cerr << "lex error at offset " << err.offset << ": " << err.what() << "\n";
        return kExitParse;
    }

    if (args.use_ll1) {
        gt::ParseOutcome outcome = gt::ll1_parse(g, tokens);
        if (gt::is_reject(outcome))
            return report_reject(g, std::get<gt::Reject>(outcome), args.as_json);
        const auto& tree = std::get<gt::SyntaxTree>(outcome);
        if (args.as_json)
            std::cout << json{{"schema", 1}, {"status", "ok"}, {"tree", gt::to_sexpr(tree)}}.dump(2)
                      << "\n";
        else
            std::cout << gt::to_sexpr(tree) << "\n";
        return kExitOk;
    }

    gt::ParseOutcome outcome = gt::earley_parse(g, tokens);
    if (gt::is_reject(outcome))
        return report_reject(g, std::get<gt::Reject>(outcome), args.as_json);
    if (gt::is_ambiguous(outcome)) {
        const auto& amb = std::get<gt::Ambiguous>(outcome);
        if (!args.ambiguity) {
            std::cerr << "input parses ambiguously (rerun with --ambiguity for witnesses)\n";
            return kExitParse;
        }
        if (args.as_json)
            std::cout << json{{"schema", 1},
                              {"status", "ambiguous"},
                              {"first", gt::to_sexpr(amb.first)},
                              {"second", gt::to_sexpr(amb.second)}}
                             .dump(2)
                      << "\n";
        else
            std::cout << "ambiguous:\n"
                      << gt::to_sexpr(amb.first) << "\n"
                      << gt::to_sexpr(amb.second) << "\n";
        return kExitOk;
    }
    const auto& tree = std::get<gt::SyntaxTree>(outcome);
    if (args.as_json)
        std::cout << json{{"schema", 1}, {"status", "ok"}, {"tree", gt::to_sexpr(tree)}}.dump(2)
                  << "\n";
    else
        std::cout << gt::to_sexpr(tree) << "\n";
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"grammar toolkit: classify CFGs, make them LL(1), translate programs"};
    app.require_subcommand(1);

    std::string check_path;
    bool check_json = false;
    CLI::App* check = app.add_subcommand("check", "classify a grammar in the LL/LR hierarchy");
    check->add_option("grammar", check_path, "grammar file")->required();
    check->add_flag("--json", check_json, "machine-readable report");

    TransformArgs tr;
    CLI::App* transform =
        app.add_subcommand("transform", "eliminate LL(1) conflicts with marker terminals");
    transform->add_option("grammar", tr.grammar_path, "grammar file")->required();
    transform->add_option("--mode", tr.mode, "full (default) or layers=K");
    transform->add_flag("--no-reorder", tr.no_reorder, "keep every inserted marker");
    transform->add_option("--depth-cap", tr.depth_cap, "expansion depth limit");
    transform->add_option("--out-grammar", tr.out_grammar, "transformed grammar path");
    transform->add_option("--out-map", tr.out_map, "rule map path");
    transform->add_option("--out-trace", tr.out_trace, "trace path");
    transform->add_flag("--json", tr.as_json, "JSON trace");

    TranslateArgs tl;
    CLI::App* translate =
        app.add_subcommand("translate", "translate programs along a rule map");
    translate->add_option("--grammar-src", tl.src_path, "original grammar")->required();
    translate->add_option("--grammar-dst", tl.dst_path, "transformed grammar")->required();
    translate->add_option("--map", tl.map_path, "rule map file")->required();
    translate->add_flag("--backward", tl.backward, "translate transformed -> original");
    translate->add_flag("--corpus", tl.corpus, "treat input as JSONL records");
    translate->add_option("--field", tl.field, "JSONL code field (default: code)");
    translate->add_option("input", tl.in_path, "program or JSONL file")->required();
    translate->add_option("output", tl.out_path, "output file")->required();
    translate->add_flag("--json", tl.as_json, "JSON report");

    StatsArgs st;
    CLI::App* stats = app.add_subcommand("stats", "token counts per representation");
    stats->add_option("--grammar-src", st.src_path, "original grammar")->required();
    stats->add_option("--corpus", st.corpus_path, "JSONL corpus")->required();
    stats->add_option("--field", st.field, "JSONL code field (default: code)");
    stats->add_option("--vs", st.bundles, "transformed grammar:map to compare")
        ->expected(-1);
    stats->add_flag("--json", st.as_json, "JSON report");

    ParseArgs pa;
    CLI::App* parse = app.add_subcommand("parse", "parse a program and print its tree");
    parse->add_option("grammar", pa.grammar_path, "grammar file")->required();
    parse->add_option("input", pa.input_path, "program file")->required();
    parse->add_flag("--ll1", pa.use_ll1, "use the predictive parser");
    parse->add_flag("--ambiguity", pa.ambiguity, "print both trees on ambiguity");
    parse->add_flag("--json", pa.as_json, "JSON report");

    CLI11_PARSE(app, argc, argv);

    try {
        if (check->parsed()) return cmd_check(check_path, check_json);
        if (transform->parsed()) return cmd_transform(tr);
        if (translate->parsed()) return cmd_translate(tl);
        if (stats->parsed()) return cmd_stats(st);
        if (parse->parsed()) return cmd_parse(pa);
    } catch (const gt::TransformError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitTransform;
    } catch (const gt::TranslateError& err) {
        std::cerr << "error: " << err.what() << "\n";
        return kExitParse;
    } catch (const gt::GrammarError& err) {
        std::cerr << "error: " << err.what();
        if (err.line > 0) std::cerr << " (line " << err.line << ", column " << err.column << ")";
        std::cerr << "\n";
        return kExitGrammar;
    } catch (const gt::LexError& err) {
        std::cerr << "error: " << err.what() << " (offset " << err.offset << ")\n";
        return kExitGrammar;
    } catch (const std::exception& err) {
        std::cerr << "error: " << err.what() << "\n";
        return 1;
    }
    return kExitOk;
}
