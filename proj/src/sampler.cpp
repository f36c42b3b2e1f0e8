#include "gramtrans/sampler.hpp"

#include <limits>
#include <functional>
#include <map>
#include <random>
#include <regex>

namespace gramtrans {

namespace {

constexpr int kInfinity = std::numeric_limits<int>::max() / 2;

// Minimal derivation depth per nonterminal and per production.
struct DepthInfo {
    std::map<SymbolId, int> nt;
    std::map<int, int> production;
};

DepthInfo min_depths(const Grammar& g) {
    DepthInfo info;
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.is_nonterminal(id)) info.nt[id] = kInfinity;

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            int deepest = 0;
            for (SymbolId s : p.rhs)
                if (g.is_nonterminal(s)) deepest = std::max(deepest, info.nt[s]);
            int depth = deepest >= kInfinity ? kInfinity : deepest + 1;
            info.production[p.id] = depth;
            if (depth < info.nt[p.lhs]) {
                info.nt[p.lhs] = depth;
                changed = true;
            }
        }
    }
    return info;
}

const std::vector<std::string>& lexeme_candidates() {
    static const std::vector<std::string> pool = [] {
        std::vector<std::string> out;
        for (char c = 'a'; c <= 'z'; ++c) out.push_back(std::string(1, c));
        for (int i = 0; i < 10; ++i) out.push_back("v" + std::to_string(i));
        for (int i = 0; i <= 20; ++i) out.push_back(std::to_string(i));
        out.push_back("100");
        out.push_back("0.5");
        out.push_back("3.5");
        out.push_back("12.25");
        out.push_back("answer");
        out.push_back("t_0");
        return out;
    }();
    return pool;
}

}  // namespace

SyntaxTree sample(const Grammar& g, int max_depth, uint64_t seed) {
    DepthInfo depths = min_depths(g);
    std::mt19937_64 rng(seed);

    std::map<SymbolId, std::vector<std::string>> pools;
    auto pseudo_lexeme = [&](SymbolId id) -> const std::string& {
        auto it = pools.find(id);
        if (it == pools.end()) {
            std::vector<std::string> pool;
            std::regex re(g.symbol(id).pattern, std::regex::ECMAScript);
            for (const auto& cand : lexeme_candidates())
                if (std::regex_match(cand, re)) pool.push_back(cand);
            if (pool.empty())
                throw GrammarError("no pseudo-lexeme matches class terminal " +
                                   g.symbol(id).name);
            it = pools.emplace(id, std::move(pool)).first;
        }
        const auto& pool = it->second;
        return pool[static_cast<size_t>(rng() % pool.size())];
    };

    std::function<SyntaxTree(SymbolId, int)> build = [&](SymbolId nt, int budget) {
        std::vector<const Production*> fits;
        for (const auto& p : g.productions())
            if (p.lhs == nt && depths.production[p.id] <= budget) fits.push_back(&p);
        if (fits.empty())
            throw GrammarError("no production of " + g.symbol(nt).name +
                               " completes within depth " + std::to_string(budget));
        const Production& p = *fits[static_cast<size_t>(rng() % fits.size())];
        std::vector<SyntaxTree> children;
        children.reserve(p.rhs.size());
        for (SymbolId s : p.rhs) {
            if (g.is_nonterminal(s)) {
                children.push_back(build(s, budget - 1));
            } else {
                const Symbol& sym = g.symbol(s);
                std::string lexeme =
                    sym.kind == SymbolKind::LiteralTerminal ? sym.lexeme : pseudo_lexeme(s);
                children.push_back(SyntaxTree::make_leaf({s, std::move(lexeme), 0, 0}));
            }
        }
        return SyntaxTree::make_interior(p.id, std::move(children));
    };

    return build(g.start(), max_depth);
}

}  // namespace gramtrans
