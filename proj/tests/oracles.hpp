#pragma once

// Independent reference implementations the tests check the library against.
// Everything here is deliberately written from scratch, favoring obvious
// brute force over sharing code with the implementation under test.

#include <algorithm>
#include <cstdint>
#include <map>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "gramtrans/grammar.hpp"

namespace oracles {

using gramtrans::Grammar;
using gramtrans::Production;
using gramtrans::SymbolId;

using Word = std::vector<SymbolId>;  // terminal string

/// Every terminal string of length <= max_len derivable from start, by BFS
/// over sentential forms. Forms longer than the bound on terminals already
/// emitted are pruned, so this is exact for the returned lengths.
inline std::set<Word> language(const Grammar& g, size_t max_len) {
    std::set<Word> words;
    std::set<Word> seen;
    std::queue<Word> work;
    work.push({g.start()});
    seen.insert({g.start()});
    while (!work.empty()) {
        Word form = work.front();
        work.pop();
        size_t i = 0;
        while (i < form.size() && g.is_terminal(form[i])) ++i;
        if (i > max_len) continue;
        if (i == form.size()) {
            words.insert(form);
            continue;
        }
        for (const Production& p : g.productions()) {
            if (p.lhs != form[i]) continue;
            Word next(form.begin(), form.begin() + static_cast<long>(i));
            next.insert(next.end(), p.rhs.begin(), p.rhs.end());
            next.insert(next.end(), form.begin() + static_cast<long>(i) + 1, form.end());
            size_t terminals = 0;
            for (SymbolId s : next)
                if (g.is_terminal(s)) ++terminals;
            if (terminals > max_len) continue;
            if (next.size() > 4 * (max_len + 2)) continue;
            if (seen.insert(next).second) work.push(next);
        }
    }
    return words;
}

/// Number of distinct leftmost derivations of exactly `word`, capped at
/// `cap`. A value >= 2 certifies ambiguity of that input.
inline int count_derivations(const Grammar& g, const Word& word, int cap = 3,
                             int budget = 200000) {
    std::set<SymbolId> nullable;
    bool grew = true;
    while (grew) {
        grew = false;
        for (const Production& p : g.productions()) {
            if (nullable.count(p.lhs)) continue;
            bool all = true;
            for (SymbolId s : p.rhs)
                if (g.is_terminal(s) || !nullable.count(s)) { all = false; break; }
            if (all) {
                nullable.insert(p.lhs);
                grew = true;
            }
        }
    }

    struct Rec {
        const Grammar& g;
        const Word& word;
        const std::set<SymbolId>& nullable;
        int cap;
        int budget;
        int steps = 0;
        int run(const Word& form, size_t matched, int depth) {
            if (++steps > budget || depth > 4096) return 0;
            size_t m = matched;
            size_t needed = 0;
            for (SymbolId s : form)
                if (g.is_terminal(s) || !nullable.count(s)) ++needed;
            if (needed > word.size() - m) return 0;
            if (form.empty()) return m == word.size() ? 1 : 0;
            SymbolId head = form.front();
            if (g.is_terminal(head)) {
                if (m >= word.size() || word[m] != head) return 0;
                Word next(form.begin() + 1, form.end());
                return run(next, m + 1, depth + 1);
            }
            int total = 0;
            for (const Production& p : g.productions()) {
                if (p.lhs != head) continue;
                Word next = p.rhs;
                next.insert(next.end(), form.begin() + 1, form.end());
                total += run(next, m, depth + 1);
                if (total >= cap) return cap;
            }
            return total;
        }
    };
    Rec rec{g, word, nullable, cap, budget};
    return rec.run({g.start()}, 0, 0);
}

/// Strong-LL(1) table check, written independently of the library's
/// analysis code: iterative NULLABLE/FIRST/FOLLOW to a fixed point, then one
/// table cell per (nonterminal, lookahead). SymbolId -1 stands for end of
/// input. Returns false as soon as two rules want the same cell.
inline bool strong_ll1_table_ok(const Grammar& g) {
    std::set<SymbolId> nullable;
    bool changed = true;
    while (changed) {
        changed = false;
        for (const Production& p : g.productions()) {
            if (nullable.count(p.lhs)) continue;
            bool all = true;
            for (SymbolId s : p.rhs)
                if (g.is_terminal(s) || !nullable.count(s)) { all = false; break; }
            if (all) {
                nullable.insert(p.lhs);
                changed = true;
            }
        }
    }
    std::map<SymbolId, std::set<SymbolId>> first;
    changed = true;
    while (changed) {
        changed = false;
        for (const Production& p : g.productions()) {
            auto& dst = first[p.lhs];
            size_t before = dst.size();
            for (SymbolId s : p.rhs) {
                if (g.is_terminal(s)) {
                    dst.insert(s);
                    break;
                }
                const auto& src = first[s];
                dst.insert(src.begin(), src.end());
                if (!nullable.count(s)) break;
            }
            if (dst.size() != before) changed = true;
        }
    }
    auto first_of_tail = [&](const std::vector<SymbolId>& rhs, size_t from,
                             bool& all_nullable) {
        std::set<SymbolId> out;
        all_nullable = true;
        for (size_t i = from; i < rhs.size(); ++i) {
            SymbolId s = rhs[i];
            if (g.is_terminal(s)) {
                out.insert(s);
                all_nullable = false;
                break;
            }
            out.insert(first[s].begin(), first[s].end());
            if (!nullable.count(s)) {
                all_nullable = false;
                break;
            }
        }
        return out;
    };
    std::map<SymbolId, std::set<SymbolId>> follow;
    follow[g.start()].insert(-1);
    changed = true;
    while (changed) {
        changed = false;
        for (const Production& p : g.productions()) {
            for (size_t i = 0; i < p.rhs.size(); ++i) {
                SymbolId s = p.rhs[i];
                if (g.is_terminal(s)) continue;
                auto& dst = follow[s];
                size_t before = dst.size();
                bool tail_nullable;
                auto tail = first_of_tail(p.rhs, i + 1, tail_nullable);
                dst.insert(tail.begin(), tail.end());
                if (tail_nullable) {
                    const auto& f = follow[p.lhs];
                    dst.insert(f.begin(), f.end());
                }
                if (dst.size() != before) changed = true;
            }
        }
    }
    std::map<std::pair<SymbolId, SymbolId>, int> table;
    for (const Production& p : g.productions()) {
        bool all_nullable;
        std::set<SymbolId> lookaheads = first_of_tail(p.rhs, 0, all_nullable);
        if (all_nullable) {
            const auto& f = follow[p.lhs];
            lookaheads.insert(f.begin(), f.end());
        }
        for (SymbolId la : lookaheads) {
            auto [it, fresh] = table.emplace(std::make_pair(p.lhs, la), p.id);
            if (!fresh && it->second != p.id) return false;
        }
    }
    return true;
}

/// Exhaustive minimum hitting set for small universes: tries subsets in
/// order of increasing size. Returns the minimum cardinality.
inline int min_hitting_set_size(const std::vector<std::vector<int>>& sets) {
    std::set<int> universe_set;
    for (const auto& s : sets) universe_set.insert(s.begin(), s.end());
    std::vector<int> universe(universe_set.begin(), universe_set.end());
    const size_t n = universe.size();
    if (sets.empty()) return 0;
    for (size_t size = 1; size <= n; ++size) {
        std::vector<bool> pick(n, false);
        std::fill(pick.end() - static_cast<long>(size), pick.end(), true);
        do {
            bool all_hit = true;
            for (const auto& s : sets) {
                bool hit = false;
                for (int x : s) {
                    auto at = std::lower_bound(universe.begin(), universe.end(), x);
                    if (at != universe.end() && *at == x &&
                        pick[static_cast<size_t>(at - universe.begin())]) {
                        hit = true;
                        break;
                    }
                }
                if (!hit) { all_hit = false; break; }
            }
            if (all_hit) return static_cast<int>(size);
        } while (std::next_permutation(pick.begin(), pick.end()));
    }
    return static_cast<int>(n);
}

/// Exact FIRST_k of a sentential form of an epsilon-free grammar, by closure
/// over k-truncated forms.
inline std::set<Word> first_k_bruteforce(const Grammar& g, int k, const Word& form0) {
    auto truncate = [&](const Word& w) {
        return Word(w.begin(), w.begin() + std::min<size_t>(w.size(), static_cast<size_t>(k)));
    };
    std::set<Word> seen;
    std::queue<Word> work;
    std::set<Word> out;
    Word start = truncate(form0);
    work.push(start);
    seen.insert(start);
    while (!work.empty()) {
        Word form = work.front();
        work.pop();
        size_t i = 0;
        while (i < form.size() && g.is_terminal(form[i])) ++i;
        if (i == form.size()) {
            out.insert(form);  // all-terminal: the whole (truncated) prefix
            continue;
        }
        for (const Production& p : g.productions()) {
            if (p.lhs != form[i]) continue;
            Word next(form.begin(), form.begin() + static_cast<long>(i));
            next.insert(next.end(), p.rhs.begin(), p.rhs.end());
            next.insert(next.end(), form.begin() + static_cast<long>(i) + 1, form.end());
            next = truncate(next);
            if (seen.insert(next).second) work.push(next);
        }
    }
    return out;
}

/// Seeded random CFG: <= max_nts nonterminals, <= max_prods productions,
/// productive by construction (every nonterminal's first rule is all
/// terminals). Occasional epsilon rules exercise normalization.
inline Grammar random_cfg(uint64_t seed, int max_nts = 8, int max_prods = 20) {
    std::mt19937_64 rng(seed);
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<uint64_t>(hi - lo + 1));
    };
    Grammar g;
    g.name = "random" + std::to_string(seed);
    int nts = pick(2, max_nts);
    int terminals = pick(2, 6);
    std::vector<SymbolId> nt_ids, t_ids;
    for (int i = 0; i < nts; ++i) {
        gramtrans::Symbol sym;
        sym.kind = gramtrans::SymbolKind::Nonterminal;
        sym.name = "N" + std::to_string(i);
        nt_ids.push_back(g.add_symbol(sym));
    }
    for (int i = 0; i < terminals; ++i)
        t_ids.push_back(g.intern_literal(std::string(1, static_cast<char>('a' + i))));

    int remaining = pick(nts, max_prods) - nts;
    for (int i = 0; i < nts; ++i) {
        std::vector<SymbolId> rhs;
        int len = pick(1, 3);
        for (int j = 0; j < len; ++j)
            rhs.push_back(t_ids[static_cast<size_t>(pick(0, terminals - 1))]);
        g.add_production(nt_ids[static_cast<size_t>(i)], std::move(rhs));
    }
    for (int i = 0; i < remaining; ++i) {
        SymbolId lhs = nt_ids[static_cast<size_t>(pick(0, nts - 1))];
        std::vector<SymbolId> rhs;
        if (pick(0, 9) == 0) {
            g.add_production(lhs, {});
            continue;
        }
        int len = pick(1, 4);
        for (int j = 0; j < len; ++j) {
            if (pick(0, 2) == 0)
                rhs.push_back(nt_ids[static_cast<size_t>(pick(0, nts - 1))]);
            else
                rhs.push_back(t_ids[static_cast<size_t>(pick(0, terminals - 1))]);
        }
        g.add_production(lhs, std::move(rhs));
    }
    g.set_start(nt_ids[0]);
    return g;
}

}  // namespace oracles
