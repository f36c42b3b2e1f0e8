#include "gramtrans/ll1.hpp"

#include <algorithm>
#include <functional>

#include "gramtrans/analysis.hpp"

namespace gramtrans {

namespace {
constexpr SymbolId kEnd = -1;
}

Ll1Parser::Ll1Parser(const Grammar& g) : g_(&g) {
    bool changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            if (nullable_.count(p.lhs)) continue;
            bool all = true;
            for (SymbolId s : p.rhs)
                if (g.is_terminal(s) || !nullable_.count(s)) { all = false; break; }
            if (all) { nullable_.insert(p.lhs); changed = true; }
        }
    }
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.is_terminal(id)) first1_[id] = {id};
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            auto& dst = first1_[p.lhs];
            size_t before = dst.size();
            for (SymbolId s : p.rhs) {
                const auto& src = first1_[s];
                dst.insert(src.begin(), src.end());
                if (g.is_terminal(s) || !nullable_.count(s)) break;
            }
            if (dst.size() != before) changed = true;
        }
    }

    // FOLLOW1 for table rows of nullable alternatives.
    std::map<SymbolId, std::set<SymbolId>> follow;
    follow[g.start()].insert(kEnd);
    changed = true;
    while (changed) {
        changed = false;
        for (const auto& p : g.productions()) {
            for (size_t i = 0; i < p.rhs.size(); ++i) {
                SymbolId s = p.rhs[i];
                if (!g.is_nonterminal(s)) continue;
                auto& dst = follow[s];
                size_t before = dst.size();
                bool suffix_nullable = true;
                for (size_t j = i + 1; j < p.rhs.size() && suffix_nullable; ++j) {
                    SymbolId t = p.rhs[j];
                    const auto& f = first1_[t];
                    dst.insert(f.begin(), f.end());
                    suffix_nullable = g.is_nonterminal(t) && nullable_.count(t);
                }
                if (suffix_nullable) {
                    const auto& f = follow[p.lhs];
                    dst.insert(f.begin(), f.end());
                }
                if (dst.size() != before) changed = true;
            }
        }
    }

    for (const auto& p : g.productions()) {
        std::set<SymbolId> lookaheads;
        bool rhs_nullable = true;
        for (SymbolId s : p.rhs) {
            const auto& f = first1_[s];
            lookaheads.insert(f.begin(), f.end());
            if (g.is_terminal(s) || !nullable_.count(s)) { rhs_nullable = false; break; }
        }
        if (rhs_nullable) {
            const auto& f = follow[p.lhs];
            lookaheads.insert(f.begin(), f.end());
        }
        for (SymbolId la : lookaheads) {
            auto [it, inserted] = table_.emplace(std::make_pair(p.lhs, la), p.id);
            if (!inserted && it->second != p.id)
                throw GrammarError("grammar is not LL(1): rules " +
                                   std::to_string(it->second) + " and " +
                                   std::to_string(p.id) + " collide on lookahead " +
                                   (la == kEnd ? std::string("$") : g.display(la)));
        }
    }
}

namespace {

struct Frame {
    const Production* production;
    size_t next;  // index of the rhs symbol to consume next
};

}  // namespace

ParseOutcome Ll1Parser::parse(const std::vector<Token>& tokens) const {
    const Grammar& g = *g_;
    size_t pos = 0;
    std::vector<Frame> frames;

    // Viable terminals at the failure point: FIRST of the remaining stack.
    auto expected = [&](std::vector<SymbolId> pending) {
        std::set<SymbolId> out;
        auto push = [&](SymbolId s) {
            const auto it = first1_.find(s);
            if (it != first1_.end()) out.insert(it->second.begin(), it->second.end());
            return g.is_nonterminal(s) && nullable_.count(s);
        };
        bool open = true;
        for (SymbolId s : pending)
            if (open) open = push(s);
        for (auto frame = frames.rbegin(); open && frame != frames.rend(); ++frame)
            for (size_t i = frame->next; open && i < frame->production->rhs.size(); ++i)
                open = push(frame->production->rhs[i]);
        out.erase(kEnd);
        return std::vector<SymbolId>(out.begin(), out.end());
    };

    std::function<std::optional<Reject>(SymbolId, SyntaxTree&)> parse_nt =
        [&](SymbolId nt, SyntaxTree& out) -> std::optional<Reject> {
        SymbolId la = pos < tokens.size() ? tokens[pos].terminal : kEnd;
        auto cell = table_.find({nt, la});
        if (cell == table_.end())
            return Reject{pos, expected({nt})};
        const Production& p = g.production_by_id(cell->second);
        std::vector<SyntaxTree> children;
        children.reserve(p.rhs.size());
        frames.push_back({&p, 0});
        for (size_t i = 0; i < p.rhs.size(); ++i) {
            frames.back().next = i + 1;
            SymbolId sym = p.rhs[i];
            if (g.is_terminal(sym)) {
                if (pos >= tokens.size() || tokens[pos].terminal != sym) {
                    Reject r{pos, expected({sym})};
                    frames.pop_back();
                    return r;
                }
                children.push_back(SyntaxTree::make_leaf(tokens[pos]));
                ++pos;
            } else {
                SyntaxTree sub;
                if (auto r = parse_nt(sym, sub)) {
                    frames.pop_back();
                    return r;
                }
                children.push_back(std::move(sub));
            }
        }
        frames.pop_back();
        out = SyntaxTree::make_interior(p.id, std::move(children));
        return std::nullopt;
    };

    SyntaxTree tree;
    if (auto r = parse_nt(g.start(), tree)) return *r;
    if (pos < tokens.size())
        return Reject{pos, {}};
    return tree;
}

ParseOutcome ll1_parse(const Grammar& g, const std::vector<Token>& tokens) {
    return Ll1Parser(g).parse(tokens);
}

}  // namespace gramtrans
