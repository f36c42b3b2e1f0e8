#include "gramtrans/earley.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

namespace gramtrans {

namespace {

struct Item {
    int rule;    // index into Grammar::productions()
    int dot;
    int origin;  // chart index where this item started
};

struct ItemSet {
    std::vector<Item> items;
    std::set<std::tuple<int, int, int>> seen;
    std::map<SymbolId, std::vector<int>> awaiting;  // next symbol -> item indices

    bool add(Item it) {
        if (!seen.insert({it.rule, it.dot, it.origin}).second) return false;
        items.push_back(it);
        return true;
    }
};

struct Chart {
    const Grammar* g = nullptr;
    std::vector<ItemSet> sets;

    const Production& prod(int rule) const { return g->productions()[static_cast<size_t>(rule)]; }
    bool complete(const Item& it) const {
        return it.dot == static_cast<int>(prod(it.rule).rhs.size());
    }
    SymbolId next_symbol(const Item& it) const {
        const auto& rhs = prod(it.rule).rhs;
        return it.dot < static_cast<int>(rhs.size()) ? rhs[static_cast<size_t>(it.dot)] : -1;
    }
};

// Nonterminals that derive the empty string.
std::set<SymbolId> nullable_set(const Grammar& g) {
    std::set<SymbolId> nullable;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (nullable.count(p.lhs)) continue;
            bool all = true;
            for (SymbolId s : p.rhs)
                if (g.is_terminal(s) || !nullable.count(s)) { all = false; break; }
            if (all) { nullable.insert(p.lhs); changed = true; }
        }
    }
    return nullable;
}

void run_chart(Chart& chart, const Grammar& g, const std::vector<Token>& tokens) {
    const size_t n = tokens.size();
    chart.g = &g;
    chart.sets.resize(n + 1);

    std::map<SymbolId, std::vector<int>> rules_of;
    for (size_t r = 0; r < g.productions().size(); ++r)
        rules_of[g.productions()[r].lhs].push_back(static_cast<int>(r));
    std::set<SymbolId> nullable = nullable_set(g);

    for (int r : rules_of[g.start()])
        chart.sets[0].add({r, 0, 0});

    for (size_t i = 0; i <= n; ++i) {
        ItemSet& set = chart.sets[i];
        for (size_t idx = 0; idx < set.items.size(); ++idx) {
            Item it = set.items[idx];
            if (chart.complete(it)) {
                // Complete: advance items in the origin set awaiting our lhs.
                SymbolId lhs = chart.prod(it.rule).lhs;
                ItemSet& from = chart.sets[static_cast<size_t>(it.origin)];
                auto waiting = from.awaiting.find(lhs);
                if (waiting != from.awaiting.end()) {
                    // Copy: completing into the same set may grow the vector.
                    std::vector<int> targets = waiting->second;
                    for (int t : targets) {
                        Item parent = from.items[static_cast<size_t>(t)];
                        set.add({parent.rule, parent.dot + 1, parent.origin});
                    }
                }
                continue;
            }
            SymbolId sym = chart.next_symbol(it);
            set.awaiting[sym].push_back(static_cast<int>(idx));
            if (g.is_nonterminal(sym)) {
                for (int r : rules_of[sym]) set.add({r, 0, static_cast<int>(i)});
                // Nullable prediction: also step over the symbol now, since a
                // same-set completion may already have been processed.
                if (nullable.count(sym)) set.add({it.rule, it.dot + 1, it.origin});
            } else if (i < n && tokens[i].terminal == sym) {
                chart.sets[i + 1].add({it.rule, it.dot + 1, it.origin});
            }
        }
    }
}

std::vector<SymbolId> scannable(const Chart& chart, size_t i) {
    std::set<SymbolId> out;
    for (const auto& [sym, _] : chart.sets[i].awaiting)
        if (chart.g->is_terminal(sym)) out.insert(sym);
    return {out.begin(), out.end()};
}

// --- derivation counting and extraction -------------------------------------

using SpanKey = std::tuple<SymbolId, int, int>;  // (nonterminal, from, to)

struct Forest {
    const Grammar* g = nullptr;
    const std::vector<Token>* tokens = nullptr;
    // Productions completed over each span, and span ends per (nt, from).
    std::map<SpanKey, std::vector<int>> completed;
    std::map<std::pair<SymbolId, int>, std::vector<int>> ends;
    std::map<SpanKey, int> count;  // parse trees, saturated at 2

    static int sat_add(int a, int b) { return std::min(2, a + b); }
    static int sat_mul(int a, int b) { return std::min(2, a * b); }

    int count_of(const SpanKey& key) const {
        auto it = count.find(key);
        return it == count.end() ? 0 : it->second;
    }

    // Trees for rhs[pos..] spanning (from, to), given current counts.
    int count_rhs(const std::vector<SymbolId>& rhs, size_t pos, int from, int to) const {
        if (pos == rhs.size()) return from == to ? 1 : 0;
        SymbolId sym = rhs[pos];
        if (g->is_terminal(sym)) {
            if (from < to && (*tokens)[static_cast<size_t>(from)].terminal == sym)
                return count_rhs(rhs, pos + 1, from + 1, to);
            return 0;
        }
        int total = 0;
        auto it = ends.find({sym, from});
        if (it == ends.end()) return 0;
        for (int e : it->second) {
            if (e > to) break;
            int left = count_of({sym, from, e});
            if (left == 0) continue;
            total = sat_add(total, sat_mul(left, count_rhs(rhs, pos + 1, e, to)));
            if (total >= 2) return total;
        }
        return total;
    }
};

Forest build_forest(const Chart& chart, const Grammar& g, const std::vector<Token>& tokens) {
    Forest f;
    f.g = &g;
    f.tokens = &tokens;
    for (size_t j = 0; j < chart.sets.size(); ++j) {
        for (const Item& it : chart.sets[j].items) {
            if (!chart.complete(it)) continue;
            SymbolId lhs = chart.prod(it.rule).lhs;
            f.completed[{lhs, it.origin, static_cast<int>(j)}].push_back(it.rule);
        }
    }
    for (auto& [key, rules] : f.completed) {
        std::sort(rules.begin(), rules.end());
        f.ends[{std::get<0>(key), std::get<1>(key)}].push_back(std::get<2>(key));
    }
    for (auto& [_, e] : f.ends) std::sort(e.begin(), e.end());

    // Tree counts grow monotonically; iterate to the (capped) fixpoint.
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& [key, rules] : f.completed) {
            int old = f.count_of(key);
            if (old >= 2) continue;
            int total = 0;
            for (int r : rules) {
                const Production& p = g.productions()[static_cast<size_t>(r)];
                total = Forest::sat_add(
                    total, f.count_rhs(p.rhs, 0, std::get<1>(key), std::get<2>(key)));
                if (total >= 2) break;
            }
            if (total != old) {
                f.count[key] = total;
                changed = true;
            }
        }
    }
    return f;
}

// Enumerates up to `limit` distinct trees for a span. A span may re-enter
// itself through cyclic unit rules; each path allows a bounded number of
// revisits so one-level wraps still surface as witnesses.
struct Extractor {
    const Forest* f;
    std::map<SpanKey, int> visiting;
    static constexpr int kMaxRevisits = 2;

    std::vector<SyntaxTree> trees_for(const SpanKey& key, int limit) {
        std::vector<SyntaxTree> out;
        if (limit <= 0 || f->count_of(key) == 0) return out;
        int& depth = visiting[key];
        if (depth >= kMaxRevisits) return out;
        ++depth;
        auto rules = f->completed.find(key);
        if (rules != f->completed.end()) {
            for (int r : rules->second) {
                const Production& p = f->g->productions()[static_cast<size_t>(r)];
                std::vector<SyntaxTree> prefix;
                fill_rhs(p, 0, std::get<1>(key), std::get<2>(key), prefix, out, limit);
                if (static_cast<int>(out.size()) >= limit) break;
            }
        }
        --depth;
        return out;
    }

    void fill_rhs(const Production& p, size_t pos, int from, int to,
                  std::vector<SyntaxTree>& prefix, std::vector<SyntaxTree>& out, int limit) {
        if (static_cast<int>(out.size()) >= limit) return;
        if (pos == p.rhs.size()) {
            if (from == to)
                out.push_back(SyntaxTree::make_interior(p.id, prefix));
            return;
        }
        SymbolId sym = p.rhs[pos];
        if (f->g->is_terminal(sym)) {
            if (from < to && (*f->tokens)[static_cast<size_t>(from)].terminal == sym) {
                prefix.push_back(SyntaxTree::make_leaf((*f->tokens)[static_cast<size_t>(from)]));
                fill_rhs(p, pos + 1, from + 1, to, prefix, out, limit);
                prefix.pop_back();
            }
            return;
        }
        auto it = f->ends.find({sym, from});
        if (it == f->ends.end()) return;
        for (int e : it->second) {
            if (e > to) break;
            if (f->count_of({sym, from, e}) == 0) continue;
            // Only descend into splits whose suffix can still close; otherwise a
            // failed split rebuilds whole subtrees per candidate end, which goes
            // exponential on deeply nested inputs.
            if (f->count_rhs(p.rhs, pos + 1, e, to) == 0) continue;
            for (auto& sub : trees_for({sym, from, e}, limit)) {
                prefix.push_back(std::move(sub));
                fill_rhs(p, pos + 1, e, to, prefix, out, limit);
                prefix.pop_back();
                if (static_cast<int>(out.size()) >= limit) return;
            }
        }
    }
};

}  // namespace

ParseOutcome earley_parse(const Grammar& g, const std::vector<Token>& tokens) {
    Chart chart;
    run_chart(chart, g, tokens);
    const size_t n = tokens.size();

    size_t furthest = 0;
    for (size_t i = 0; i <= n; ++i)
        if (!chart.sets[i].items.empty()) furthest = i;

    if (furthest < n)
        return Reject{furthest, scannable(chart, furthest)};

    bool accepted = false;
    for (const Item& it : chart.sets[n].items)
        if (chart.complete(it) && it.origin == 0 && chart.prod(it.rule).lhs == g.start())
            accepted = true;
    if (!accepted)
        return Reject{n, scannable(chart, n)};

    Forest forest = build_forest(chart, g, tokens);
    SpanKey root{g.start(), 0, static_cast<int>(n)};
    Extractor ex{&forest, {}};
    if (forest.count_of(root) >= 2) {
        std::vector<SyntaxTree> two = ex.trees_for(root, 2);
        if (two.size() >= 2)
            return Ambiguous{std::move(two[0]), std::move(two[1])};
    }
    std::vector<SyntaxTree> one = ex.trees_for(root, 1);
    if (one.empty())  // unreachable if the chart accepted
        return Reject{n, scannable(chart, n)};
    return std::move(one[0]);
}

}  // namespace gramtrans
