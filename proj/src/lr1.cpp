#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "gramtrans/analysis.hpp"

namespace gramtrans {

namespace {

constexpr SymbolId kEnd = -1;

// LR(1) item: rule index (kStartRule is the synthetic start' -> start),
// dot position, lookahead terminal.
constexpr int kStartRule = -1;

struct Item {
    int rule;
    int dot;
    SymbolId lookahead;
    auto operator<=>(const Item&) const = default;
};

using State = std::set<Item>;

struct Builder {
    const Grammar& g;
    std::map<SymbolId, std::vector<int>> rules_of;
    std::map<SymbolId, std::set<SymbolId>> first1;
    std::set<SymbolId> nullable;

    explicit Builder(const Grammar& grammar) : g(grammar) {
        for (size_t r = 0; r < g.productions().size(); ++r)
            rules_of[g.productions()[r].lhs].push_back(static_cast<int>(r));

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
        for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
            if (g.is_terminal(id)) first1[id] = {id};
        changed = true;
        while (changed) {
            changed = false;
            for (const auto& p : g.productions()) {
                auto& dst = first1[p.lhs];
                size_t before = dst.size();
                for (SymbolId s : p.rhs) {
                    const auto& src = first1[s];
                    dst.insert(src.begin(), src.end());
                    if (g.is_terminal(s) || !nullable.count(s)) break;
                }
                if (dst.size() != before) changed = true;
            }
        }
    }

    // The item's rhs; the synthetic rule behaves as [start].
    std::vector<SymbolId> rhs_of(int rule) const {
        if (rule == kStartRule) return {g.start()};
        return g.productions()[static_cast<size_t>(rule)].rhs;
    }

    std::set<SymbolId> first_after(const std::vector<SymbolId>& rhs, int from,
                                   SymbolId lookahead) const {
        std::set<SymbolId> out;
        for (size_t i = static_cast<size_t>(from); i < rhs.size(); ++i) {
            SymbolId s = rhs[i];
            const auto& f = first1.at(s);
            out.insert(f.begin(), f.end());
            if (g.is_terminal(s) || !nullable.count(s)) return out;
        }
        out.insert(lookahead);
        return out;
    }

    State closure(State state) const {
        std::vector<Item> queue(state.begin(), state.end());
        while (!queue.empty()) {
            Item it = queue.back();
            queue.pop_back();
            std::vector<SymbolId> rhs = rhs_of(it.rule);
            if (it.dot >= static_cast<int>(rhs.size())) continue;
            SymbolId next = rhs[static_cast<size_t>(it.dot)];
            if (!g.is_nonterminal(next)) continue;
            auto lookaheads = first_after(rhs, it.dot + 1, it.lookahead);
            for (int r : rules_of.at(next))
                for (SymbolId la : lookaheads)
                    if (state.insert({r, 0, la}).second) queue.push_back({r, 0, la});
        }
        return state;
    }

    std::string render_item(const Item& it) const {
        std::ostringstream out;
        if (it.rule == kStartRule) {
            out << "start' ->" << (it.dot == 0 ? " ." : "") << " "
                << g.symbol(g.start()).name << (it.dot == 1 ? " ." : "");
            out << " , $";
            return out.str();
        }
        const Production& p = g.productions()[static_cast<size_t>(it.rule)];
        out << g.symbol(p.lhs).name << " ->";
        for (int i = 0; i <= static_cast<int>(p.rhs.size()); ++i) {
            if (i == it.dot) out << " .";
            if (i < static_cast<int>(p.rhs.size()))
                out << " " << g.display(p.rhs[static_cast<size_t>(i)]);
        }
        out << " , " << (it.lookahead == kEnd ? "$" : g.display(it.lookahead));
        return out.str();
    }
};

}  // namespace

LrResult is_lr1(const Grammar& g, int state_cap) {
    Builder b(g);

    State initial = b.closure({Item{kStartRule, 0, kEnd}});
    std::map<State, int> ids;
    std::vector<State> states{initial};
    ids[initial] = 0;

    LrResult result;
    result.holds = true;

    for (size_t s = 0; s < states.size(); ++s) {
        const State& state = states[s];

        std::map<SymbolId, State> moves;
        std::map<SymbolId, std::vector<int>> reduces;  // lookahead -> rules (accept included)
        std::set<SymbolId> shifts;
        for (const Item& it : state) {
            std::vector<SymbolId> rhs = b.rhs_of(it.rule);
            if (it.dot == static_cast<int>(rhs.size())) {
                reduces[it.lookahead].push_back(it.rule);
                continue;
            }
            SymbolId next = rhs[static_cast<size_t>(it.dot)];
            moves[next].insert({it.rule, it.dot + 1, it.lookahead});
            if (g.is_terminal(next)) shifts.insert(next);
        }

        for (auto& [la, rules] : reduces) {
            std::sort(rules.begin(), rules.end());
            rules.erase(std::unique(rules.begin(), rules.end()), rules.end());
            std::string kind;
            if (rules.size() > 1) kind = "reduce/reduce";
            else if (shifts.count(la)) kind = "shift/reduce";
            if (kind.empty()) continue;
            result.holds = false;
            if (result.conflict.empty()) {
                std::ostringstream out;
                out << kind << " conflict in state " << s << " on "
                    << (la == kEnd ? "$" : g.display(la)) << ": ";
                bool first = true;
                for (const Item& it : state) {
                    std::vector<SymbolId> rhs = b.rhs_of(it.rule);
                    bool relevant =
                        (it.dot == static_cast<int>(rhs.size()) && it.lookahead == la) ||
                        (it.dot < static_cast<int>(rhs.size()) &&
                         rhs[static_cast<size_t>(it.dot)] == la);
                    if (!relevant) continue;
                    if (!first) out << " | ";
                    out << b.render_item(it);
                    first = false;
                }
                result.conflict = out.str();
            }
        }

        for (auto& [sym, kernel] : moves) {
            State next = b.closure(std::move(kernel));
            auto it = ids.find(next);
            if (it == ids.end()) {
                if (static_cast<int>(states.size()) >= state_cap)
                    throw GrammarError("LR(1) construction exceeded the state cap of " +
                                       std::to_string(state_cap));
                ids.emplace(next, static_cast<int>(states.size()));
                states.push_back(std::move(next));
            }
        }
    }

    result.states = static_cast<int>(states.size());
    return result;
}

}  // namespace gramtrans
