#include "gramtrans/analysis.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

namespace gramtrans {

std::vector<LeadingSymbol> leading_symbols(const Grammar& g, SymbolId nt) {
    std::vector<LeadingSymbol> out;
    for (const auto& p : g.productions()) {
        if (p.lhs != nt) continue;
        if (p.rhs.empty())
            throw GrammarError("production " + std::to_string(p.id) +
                               " is an epsilon rule; normalize before expansion");
        out.push_back({p.id, p.rhs[0]});
    }
    return out;
}

std::set<SymbolId> ExpansionTree::symbol_set() const {
    std::set<SymbolId> out;
    for (const auto& n : nodes) out.insert(n.symbol);
    return out;
}

ExpansionTree expand(const Grammar& g, int production_id, int depth) {
    const Production& p = g.production_by_id(production_id);
    if (p.rhs.empty())
        throw GrammarError("production " + std::to_string(production_id) +
                           " is an epsilon rule; normalize before expansion");
    ExpansionTree tree;
    tree.production_id = production_id;
    tree.nodes.push_back({p.rhs[0], 0, -1, -1, false, {}});

    std::vector<int> frontier{0};
    for (int level = 0; level < depth; ++level) {
        std::vector<int> next;
        for (int idx : frontier) {
            // Copy: appending nodes may invalidate references into the arena.
            const ExpansionTree::Node node = tree.nodes[static_cast<size_t>(idx)];
            if (node.repetition || !g.is_nonterminal(node.symbol)) continue;

            std::set<SymbolId> path;
            for (int a = idx; a != -1; a = tree.nodes[static_cast<size_t>(a)].parent)
                path.insert(tree.nodes[static_cast<size_t>(a)].symbol);

            auto leads = leading_symbols(g, node.symbol);
            std::vector<ExpansionTree::Node> children;
            bool any_repetition = false;
            for (const auto& lead : leads) {
                bool rep = path.count(lead.symbol) > 0;
                any_repetition |= rep;
                children.push_back({lead.symbol, level + 1, idx, lead.production_id, rep, {}});
            }
            // A repetition ends this branch: only the repeating leaves are
            // kept, so the loop itself is what the tree exposes.
            if (any_repetition) {
                children.erase(std::remove_if(children.begin(), children.end(),
                                              [](const auto& c) { return !c.repetition; }),
                               children.end());
            }
            for (auto& child : children) {
                int cidx = static_cast<int>(tree.nodes.size());
                tree.nodes.push_back(std::move(child));
                tree.nodes[static_cast<size_t>(idx)].children.push_back(cidx);
                if (!tree.nodes.back().repetition) next.push_back(cidx);
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;
    }
    return tree;
}

std::vector<Conflict> detect_conflicts(const Grammar& g, int depth) {
    std::vector<Conflict> out;

    std::map<SymbolId, std::vector<int>> groups;
    for (const auto& p : g.productions()) groups[p.lhs].push_back(p.id);

    std::set<int> left_recursive;                    // production ids
    std::map<int, std::vector<SymbolId>> rep_paths;  // id -> root path of the repetition

    for (const auto& [nt, ids] : groups) {
        std::vector<ExpansionTree> trees;
        trees.reserve(ids.size());
        for (int id : ids) trees.push_back(expand(g, id, depth));

        for (const auto& tree : trees) {
            for (const auto& node : tree.nodes) {
                if (!node.repetition) continue;
                if (left_recursive.insert(node.via_production).second) {
                    std::vector<SymbolId> path;
                    for (int a = node.parent; a != -1;
                         a = tree.nodes[static_cast<size_t>(a)].parent)
                        path.push_back(tree.nodes[static_cast<size_t>(a)].symbol);
                    std::reverse(path.begin(), path.end());
                    path.push_back(node.symbol);
                    rep_paths[node.via_production] = std::move(path);
                }
            }
        }

        if (ids.size() < 2) continue;
        std::vector<std::set<SymbolId>> sets;
        sets.reserve(trees.size());
        for (const auto& t : trees) sets.push_back(t.symbol_set());

        std::set<SymbolId> witnesses;
        for (const auto& s : sets) witnesses.insert(s.begin(), s.end());

        std::set<std::vector<int>> reported;
        for (SymbolId w : witnesses) {
            std::vector<int> sharing;
            for (size_t i = 0; i < ids.size(); ++i)
                if (sets[i].count(w)) sharing.push_back(ids[i]);
            if (sharing.size() < 2) continue;
            if (!reported.insert(sharing).second) continue;
            Conflict c;
            c.kind = Conflict::Kind::SharedLeading;
            c.lhs = nt;
            c.witness = w;
            c.production_ids = std::move(sharing);
            out.push_back(std::move(c));
        }
    }

    for (int id : left_recursive) {
        Conflict c;
        c.kind = Conflict::Kind::LeftRecursion;
        c.lhs = g.production_by_id(id).lhs;
        c.production_ids = {id};
        c.path = rep_paths[id];
        out.push_back(std::move(c));
    }

    std::sort(out.begin(), out.end(), [](const Conflict& a, const Conflict& b) {
        if (a.lhs != b.lhs) return a.lhs < b.lhs;
        if (a.production_ids != b.production_ids) return a.production_ids < b.production_ids;
        return a.witness < b.witness;
    });
    return out;
}

// --- FIRST_k / strong-LL(k) ----------------------------------------------------

namespace {

constexpr SymbolId kEndMarker = -1;

using StringSet = std::set<TerminalString>;

TerminalString truncate_k(TerminalString s, int k) {
    if (static_cast<int>(s.size()) > k) s.resize(static_cast<size_t>(k));
    return s;
}

StringSet concat_k(const StringSet& a, const StringSet& b, int k) {
    StringSet out;
    for (const auto& u : a) {
        if (static_cast<int>(u.size()) >= k) {
            out.insert(u);
            continue;
        }
        for (const auto& v : b) {
            TerminalString w = u;
            w.insert(w.end(), v.begin(), v.end());
            out.insert(truncate_k(std::move(w), k));
        }
    }
    return out;
}

struct FirstTable {
    int k;
    std::map<SymbolId, StringSet> per_symbol;

    StringSet of_form(const Grammar& g, const std::vector<SymbolId>& form) const {
        StringSet acc{TerminalString{}};
        for (SymbolId s : form) {
            StringSet sym = s == kEndMarker ? StringSet{{kEndMarker}} : per_symbol.at(s);
            acc = concat_k(acc, sym, k);
        }
        return acc;
    }
};

FirstTable build_first(const Grammar& g, int k) {
    FirstTable table{k, {}};
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id) {
        if (g.is_terminal(id))
            table.per_symbol[id] = {{id}};
        else
            table.per_symbol[id] = {};
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            StringSet add = table.of_form(g, p.rhs);
            StringSet& dst = table.per_symbol[p.lhs];
            for (auto& s : add)
                if (dst.insert(s).second) changed = true;
        }
    }
    return table;
}

std::map<SymbolId, StringSet> build_follow(const Grammar& g, const FirstTable& first, int k) {
    std::map<SymbolId, StringSet> follow;
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.is_nonterminal(id)) follow[id] = {};
    follow[g.start()].insert(TerminalString(static_cast<size_t>(k), kEndMarker));

    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            for (size_t i = 0; i < p.rhs.size(); ++i) {
                SymbolId s = p.rhs[i];
                if (!g.is_nonterminal(s)) continue;
                std::vector<SymbolId> beta(p.rhs.begin() + static_cast<long>(i) + 1,
                                           p.rhs.end());
                StringSet tail = concat_k(first.of_form(g, beta), follow[p.lhs], k);
                StringSet& dst = follow[s];
                for (auto& str : tail)
                    if (dst.insert(str).second) changed = true;
            }
        }
    }
    return follow;
}

}  // namespace

std::set<TerminalString> first_k(const Grammar& g, int k, const std::vector<SymbolId>& form) {
    return build_first(g, k).of_form(g, form);
}

LlResult is_ll_k(const Grammar& g, int k) {
    FirstTable first = build_first(g, k);
    auto follow = build_follow(g, first, k);

    std::map<SymbolId, std::vector<const Production*>> groups;
    for (const auto& p : g.productions()) groups[p.lhs].push_back(&p);

    for (const auto& [nt, rules] : groups) {
        std::vector<StringSet> lookaheads;
        lookaheads.reserve(rules.size());
        for (const Production* p : rules)
            lookaheads.push_back(concat_k(first.of_form(g, p->rhs), follow[nt], k));
        for (size_t i = 0; i < rules.size(); ++i) {
            for (size_t j = i + 1; j < rules.size(); ++j) {
                std::vector<TerminalString> clash;
                std::set_intersection(lookaheads[i].begin(), lookaheads[i].end(),
                                      lookaheads[j].begin(), lookaheads[j].end(),
                                      std::back_inserter(clash));
                if (!clash.empty()) {
                    LlResult r;
                    r.holds = false;
                    r.witness = LlWitness{rules[i]->id, rules[j]->id, clash.front()};
                    return r;
                }
            }
        }
    }
    return {true, std::nullopt};
}

LeftRecursionInfo find_left_recursion(const Grammar& g) {
    // Nullable-aware: A can begin with B if everything before B can vanish.
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

    std::map<SymbolId, std::set<SymbolId>> begins;
    for (const auto& p : g.productions()) {
        for (SymbolId s : p.rhs) {
            if (g.is_terminal(s)) break;
            begins[p.lhs].insert(s);
            if (!nullable.count(s)) break;
        }
    }

    // DFS for a cycle in the begins-with relation.
    std::map<SymbolId, int> state;  // 0 new, 1 on stack, 2 done
    std::vector<SymbolId> stack;
    LeftRecursionInfo info;

    std::function<bool(SymbolId)> dfs = [&](SymbolId a) -> bool {
        state[a] = 1;
        stack.push_back(a);
        for (SymbolId b : begins[a]) {
            if (state[b] == 1) {
                auto it = std::find(stack.begin(), stack.end(), b);
                info.present = true;
                info.cycle.assign(it, stack.end());
                info.cycle.push_back(b);
                return true;
            }
            if (state[b] == 0 && dfs(b)) return true;
        }
        stack.pop_back();
        state[a] = 2;
        return false;
    };

    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.is_nonterminal(id) && state[id] == 0 && dfs(id)) break;
    return info;
}

ClassReport classify(const Grammar& g, int state_cap) {
    ClassReport r;
    r.grammar = g.name;
    r.ll1 = is_ll_k(g, 1);
    r.ll2 = is_ll_k(g, 2);
    r.lr1 = is_lr1(g, state_cap);
    r.left_recursion = find_left_recursion(g);
    r.notes.push_back("LL(2) verdict uses the strong-LL(2) test");
    return r;
}

namespace {

std::string render_lookahead(const TerminalString& s, const Grammar& g) {
    std::string out;
    for (SymbolId id : s) {
        if (!out.empty()) out += " ";
        out += id == kEndMarker ? "$" : g.display(id);
    }
    return out.empty() ? "<empty>" : out;
}

std::string render_ll(const LlResult& r, const Grammar& g) {
    if (r.holds) return "yes";
    if (!r.witness) return "no";
    return "no (rules " + std::to_string(r.witness->production_a) + " and " +
           std::to_string(r.witness->production_b) + " clash on " +
           render_lookahead(r.witness->clash, g) + ")";
}

}  // namespace

std::string report_text(const ClassReport& r, const Grammar& g) {
    std::ostringstream out;
    out << "grammar: " << r.grammar << "\n";
    out << "LL(1): " << render_ll(r.ll1, g) << "\n";
    out << "LL(2): " << render_ll(r.ll2, g) << "\n";
    out << "LR(1): " << (r.lr1.holds ? "yes" : "no") << " (" << r.lr1.states << " states";
    if (!r.lr1.holds) out << "; " << r.lr1.conflict;
    out << ")\n";
    out << "left recursion: ";
    if (r.left_recursion.present) {
        out << "yes (";
        for (size_t i = 0; i < r.left_recursion.cycle.size(); ++i) {
            if (i) out << " -> ";
            out << g.symbol(r.left_recursion.cycle[i]).name;
        }
        out << ")\n";
    } else {
        out << "no\n";
    }
    for (const auto& note : r.notes) out << "note: " << note << "\n";
    return out.str();
}

}  // namespace gramtrans
