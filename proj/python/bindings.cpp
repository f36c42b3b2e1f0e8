#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "gramtrans/analysis.hpp"
#include "gramtrans/earley.hpp"
#include "gramtrans/ll1.hpp"
#include "gramtrans/mathqa.hpp"
#include "gramtrans/sampler.hpp"
#include "gramtrans/transform.hpp"
#include "gramtrans/translator.hpp"

namespace py = pybind11;
namespace gt = gramtrans;

namespace {

std::string parse_to_sexpr(const gt::Grammar& g, const std::string& text, bool use_ll1) {
    std::vector<gt::Token> tokens = gt::lex(text, g);
    gt::ParseOutcome outcome = use_ll1 ? gt::ll1_parse(g, tokens) : gt::earley_parse(g, tokens);
    if (gt::is_reject(outcome)) {
        const gt::Reject& r = std::get<gt::Reject>(outcome);
        throw py::value_error("reject at token " + std::to_string(r.position));
    }
    if (gt::is_ambiguous(outcome)) throw py::value_error("input parses ambiguously");
    return gt::to_sexpr(std::get<gt::SyntaxTree>(outcome));
}

void bind_grammar(py::module_& m) {
    py::class_<gt::Grammar>(m, "Grammar")
        .def_readwrite("name", &gt::Grammar::name)
        .def_property_readonly(
            "production_count",
            [](const gt::Grammar& g) { return g.productions().size(); })
        .def("serialize", [](const gt::Grammar& g) { return gt::serialize_grammar(g); })
        .def("__repr__", [](const gt::Grammar& g) {
            return "<Grammar " + g.name + ", " + std::to_string(g.productions().size()) +
                   " productions>";
        });

    m.def("parse_grammar", [](const std::string& text, const std::string& name) {
        gt::Grammar g = gt::parse_grammar(text);
        if (!name.empty()) g.name = name;
        return g;
    }, py::arg("text"), py::arg("name") = "");
    m.def("mathqa_grammar", [] {
        gt::Grammar g = gt::parse_grammar(gt::mathqa_grammar_text());
        g.name = "mathqa";
        return g;
    });
}

void bind_analysis(py::module_& m) {
    m.def("classify", [](const gt::Grammar& g) {
        gt::ClassReport r = gt::classify(g);
        py::dict out;
        out["grammar"] = r.grammar;
        out["ll1"] = r.ll1.holds;
        out["ll2"] = r.ll2.holds;
        out["lr1"] = r.lr1.holds;
        out["lr1_states"] = r.lr1.states;
        out["left_recursion"] = r.left_recursion.present;
        return out;
    });
    m.def("report_text",
          [](const gt::Grammar& g) { return gt::report_text(gt::classify(g), g); });
    m.def("is_ll_k",
          [](const gt::Grammar& g, int k) { return gt::is_ll_k(g, k).holds; },
          py::arg("grammar"), py::arg("k"));
    m.def("parse_to_sexpr", &parse_to_sexpr, py::arg("grammar"), py::arg("text"),
          py::arg("ll1") = false);
    m.def("sample_program",
          [](const gt::Grammar& g, int max_depth, uint64_t seed) {
              return gt::linearize(gt::sample(g, max_depth, seed), g);
          },
          py::arg("grammar"), py::arg("max_depth") = 12, py::arg("seed") = 42);
}

void bind_transform(py::module_& m) {
    py::class_<gt::TransformResult>(m, "TransformResult")
        .def_readonly("grammar", &gt::TransformResult::grammar)
        .def_property_readonly("introduced_before_reorder",
                               [](const gt::TransformResult& r) {
                                   return r.trace.introduced_before_reorder;
                               })
        .def_property_readonly("introduced_after_reorder",
                               [](const gt::TransformResult& r) {
                                   return r.trace.introduced_after_reorder;
                               })
        .def_property_readonly("mode",
                               [](const gt::TransformResult& r) { return r.trace.mode; });

    m.def("transform",
          [](const gt::Grammar& g, const std::string& mode, int layers, bool reorder,
             int depth_cap, uint64_t seed) {
              gt::TransformOptions options;
              options.layers = layers;
              options.reorder = reorder;
              options.depth_cap = depth_cap;
              options.seed = seed;
              if (mode == "full")
                  options.mode = gt::TransformMode::Full;
              else if (mode == "layers")
                  options.mode = gt::TransformMode::Layers;
              else
                  throw py::value_error("mode must be 'full' or 'layers'");
              return gt::gramtrans(g, options);
          },
          py::arg("grammar"), py::arg("mode") = "full", py::arg("layers") = 1,
          py::arg("reorder") = true, py::arg("depth_cap") = 32, py::arg("seed") = 42);

    m.def("rule_map_json", [](const gt::TransformResult& r, const gt::Grammar& source) {
        return gt::rule_map_to_json(r.map, source, r.grammar);
    });
}

void bind_translate(py::module_& m) {
    m.def("translate_program",
          [](const std::string& text, const gt::Grammar& src, const gt::Grammar& dst,
             const std::string& map_json, bool backward) {
              gt::RuleMap map = gt::rule_map_from_json(map_json, src, dst);
              gt::TranslationBundle bundle{src, dst, map, backward};
              return gt::translate_program(text, bundle);
          },
          py::arg("text"), py::arg("source"), py::arg("target"), py::arg("map_json"),
          py::arg("backward") = false);

    m.def("translate_with_result",
          [](const std::string& text, const gt::Grammar& src, const gt::TransformResult& r,
             bool backward) {
              gt::TranslationBundle bundle{src, r.grammar, r.map, backward};
              return gt::translate_program(text, bundle);
          },
          py::arg("text"), py::arg("source"), py::arg("result"), py::arg("backward") = false);

    m.def("ncfg_encode", [](const std::string& program) {
        static gt::DslSuite suite = gt::build_dsl_suite();
        gt::ParseOutcome outcome = gt::earley_parse(suite.base, gt::lex(program, suite.base));
        if (!gt::is_tree(outcome)) throw py::value_error("program does not parse");
        return gt::ncfg_encode(std::get<gt::SyntaxTree>(outcome), suite.base, suite.ncfg);
    });
    m.def("ncfg_decode", [](const std::string& text) {
        static gt::DslSuite suite = gt::build_dsl_suite();
        gt::SyntaxTree tree = gt::ncfg_decode(text, suite.base, suite.ncfg);
        return gt::linearize(tree, suite.base);
    });
}

}  // namespace

PYBIND11_MODULE(_gramtrans, m) {
    m.doc() = "grammar toolkit: classify CFGs, eliminate LL(1) conflicts, translate programs";

    py::register_exception<gt::GrammarError>(m, "GrammarError");
    py::register_exception<gt::TransformError>(m, "TransformError");
    py::register_exception<gt::TranslateError>(m, "TranslateError");
    py::register_exception<gt::NcfgError>(m, "NcfgError");

    bind_grammar(m);
    bind_analysis(m);
    bind_transform(m);
    bind_translate(m);
}
