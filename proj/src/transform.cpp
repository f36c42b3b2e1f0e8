#include "gramtrans/transform.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>

#include <json.hpp>

#include "gramtrans/earley.hpp"
#include "gramtrans/sampler.hpp"

namespace gramtrans {

using nlohmann::json;

// --- rule map --------------------------------------------------------------------

int RuleMapEntry::insertion_count() const {
    return static_cast<int>(std::count(slots.begin(), slots.end(), -1));
}

std::vector<int> RuleMapEntry::deleted_originals() const {
    std::set<int> kept;
    for (int s : slots)
        if (s >= 0) kept.insert(s);
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(original_rhs.size()); ++i)
        if (!kept.count(i)) out.push_back(i);
    return out;
}

std::vector<std::pair<int, int>> RuleMapEntry::moves(const Grammar& source) const {
    // Aligned slots in target order; a terminal outside the heaviest
    // increasing subsequence of original positions was carried over other
    // symbols. Nonterminal pairs get a weight that forces them inside (their
    // relative order never changes), so only terminals can be reported.
    std::vector<std::pair<int, int>> aligned;  // (original, target)
    for (int j = 0; j < static_cast<int>(slots.size()); ++j)
        if (slots[j] >= 0) aligned.emplace_back(slots[j], j);

    const int n = static_cast<int>(aligned.size());
    auto weight_of = [&](int i) {
        SymbolId sym = original_rhs[static_cast<size_t>(aligned[static_cast<size_t>(i)].first)];
        return source.is_nonterminal(sym) ? n + 1 : 1;
    };
    std::vector<int> weight(static_cast<size_t>(n)), prev(static_cast<size_t>(n), -1);
    int best = -1;
    for (int i = 0; i < n; ++i) {
        weight[static_cast<size_t>(i)] = weight_of(i);
        for (int j = 0; j < i; ++j)
            if (aligned[static_cast<size_t>(j)].first < aligned[static_cast<size_t>(i)].first &&
                weight[static_cast<size_t>(j)] + weight_of(i) > weight[static_cast<size_t>(i)]) {
                weight[static_cast<size_t>(i)] = weight[static_cast<size_t>(j)] + weight_of(i);
                prev[static_cast<size_t>(i)] = j;
            }
        if (best < 0 || weight[static_cast<size_t>(i)] > weight[static_cast<size_t>(best)])
            best = i;
    }
    std::set<int> kept;
    for (int i = best; i >= 0; i = prev[static_cast<size_t>(i)]) kept.insert(i);

    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < n; ++i)
        if (!kept.count(i) &&
            !source.is_nonterminal(
                original_rhs[static_cast<size_t>(aligned[static_cast<size_t>(i)].first)]))
            out.push_back(aligned[static_cast<size_t>(i)]);
    return out;
}

void check_rule_map(const RuleMap& map, const Grammar& source, const Grammar& target) {
    if (map.entries.size() != source.productions().size() ||
        source.productions().size() != target.productions().size())
        throw GrammarError("rule map does not cover the production set");

    for (const auto& sp : source.productions()) {
        auto it = map.entries.find(sp.id);
        if (it == map.entries.end())
            throw GrammarError("rule map misses production " + std::to_string(sp.id));
        const RuleMapEntry& e = it->second;
        const Production& tp = target.production_by_id(sp.id);

        if (e.original_rhs != sp.rhs || e.transformed_rhs != tp.rhs)
            throw GrammarError("rule map entry " + std::to_string(sp.id) +
                               " is out of date with its grammars");
        if (source.symbol(sp.lhs).name != target.symbol(tp.lhs).name)
            throw GrammarError("production " + std::to_string(sp.id) + " changed lhs");
        if (e.slots.size() != tp.rhs.size())
            throw GrammarError("entry " + std::to_string(sp.id) + " slot count mismatch");

        std::set<int> used;
        std::vector<int> nt_from_slots;
        for (size_t j = 0; j < e.slots.size(); ++j) {
            int s = e.slots[j];
            SymbolId tsym = tp.rhs[j];
            if (s < 0) {
                if (target.symbol(tsym).kind != SymbolKind::LiteralTerminal)
                    throw GrammarError("inserted slot must be a literal terminal");
                continue;
            }
            if (s >= static_cast<int>(sp.rhs.size()) || !used.insert(s).second)
                throw GrammarError("entry " + std::to_string(sp.id) + " has bad slot " +
                                   std::to_string(s));
            const Symbol& ssym = source.symbol(sp.rhs[static_cast<size_t>(s)]);
            const Symbol& dsym = target.symbol(tsym);
            if (ssym.name != dsym.name || ssym.kind != dsym.kind)
                throw GrammarError("entry " + std::to_string(sp.id) + " slot " +
                                   std::to_string(j) + " maps different symbols");
            if (ssym.kind == SymbolKind::Nonterminal) nt_from_slots.push_back(s);
        }
        std::vector<int> nt_original;
        for (int i = 0; i < static_cast<int>(sp.rhs.size()); ++i)
            if (source.is_nonterminal(sp.rhs[static_cast<size_t>(i)])) nt_original.push_back(i);
        if (nt_from_slots != nt_original)
            throw GrammarError("entry " + std::to_string(sp.id) +
                               " does not preserve the nonterminal subsequence");
        for (int d : e.deleted_originals()) {
            const Symbol& ssym = source.symbol(sp.rhs[static_cast<size_t>(d)]);
            if (ssym.kind == SymbolKind::Nonterminal || ssym.content_bearing)
                throw GrammarError("entry " + std::to_string(sp.id) +
                                   " deletes a protected symbol");
        }
    }
}

namespace {

std::string display_of(const Grammar& g, SymbolId id) { return g.display(id); }

SymbolId resolve_display(const Grammar& g, const std::string& text) {
    if (text.size() >= 2 && text.front() == '\'' && text.back() == '\'') {
        auto id = g.find_literal(text.substr(1, text.size() - 2));
        if (id) return *id;
    } else if (auto id = g.find_symbol(text)) {
        return *id;
    }
    throw GrammarError("rule map references unknown symbol " + text);
}

}  // namespace

std::string rule_map_to_json(const RuleMap& map, const Grammar& source, const Grammar& target) {
    json rules = json::array();
    for (const auto& [id, e] : map.entries) {
        json original = json::array(), transformed = json::array();
        for (SymbolId s : e.original_rhs) original.push_back(display_of(source, s));
        for (SymbolId s : e.transformed_rhs) transformed.push_back(display_of(target, s));
        json inserted = json::array();
        for (size_t j = 0; j < e.slots.size(); ++j)
            if (e.slots[j] == -1)
                inserted.push_back({{"position", j},
                                    {"terminal", display_of(target, e.transformed_rhs[j])}});
        json deleted = json::array();
        for (int d : e.deleted_originals())
            deleted.push_back({{"position", d},
                               {"terminal", display_of(source,
                                                       e.original_rhs[static_cast<size_t>(d)])}});
        json moved = json::array();
        for (auto [from, to] : e.moves(source)) moved.push_back({{"from", from}, {"to", to}});
        rules.push_back({{"id", id},
                         {"original", original},
                         {"transformed", transformed},
                         {"slots", e.slots},
                         {"inserted", inserted},
                         {"deleted", deleted},
                         {"moved", moved},
                         {"removed_insertions", e.removed_insertions}});
    }
    json out{{"schema", 1}, {"source", map.source}, {"target", map.target}, {"rules", rules}};
    return out.dump(2) + "\n";
}

RuleMap rule_map_from_json(const std::string& text, const Grammar& source,
                           const Grammar& target) {
    json doc = json::parse(text);
    if (!doc.contains("schema") || doc["schema"].get<int>() != 1)
        throw GrammarError("rule map file has an unsupported schema");
    RuleMap map;
    map.source = doc.value("source", "");
    map.target = doc.value("target", "");
    for (const auto& r : doc.at("rules")) {
        RuleMapEntry e;
        e.production_id = r.at("id").get<int>();
        for (const auto& s : r.at("original"))
            e.original_rhs.push_back(resolve_display(source, s.get<std::string>()));
        for (const auto& s : r.at("transformed"))
            e.transformed_rhs.push_back(resolve_display(target, s.get<std::string>()));
        e.slots = r.at("slots").get<std::vector<int>>();
        if (r.contains("removed_insertions"))
            e.removed_insertions = r["removed_insertions"].get<std::vector<std::string>>();
        map.entries.emplace(e.production_id, std::move(e));
    }
    check_rule_map(map, source, target);
    return map;
}

// --- minimum hitting set -----------------------------------------------------------

std::vector<int> min_hitting_set(const std::vector<std::vector<int>>& sets_in) {
    std::vector<std::vector<int>> sets;
    for (auto s : sets_in) {
        if (s.empty()) continue;
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (std::find(sets.begin(), sets.end(), s) == sets.end()) sets.push_back(std::move(s));
    }
    if (sets.empty()) return {};

    std::set<int> universe_set;
    for (const auto& s : sets) universe_set.insert(s.begin(), s.end());
    std::vector<int> universe(universe_set.begin(), universe_set.end());

    auto hits_all = [&](const std::set<int>& chosen) {
        for (const auto& s : sets) {
            bool hit = false;
            for (int x : s)
                if (chosen.count(x)) { hit = true; break; }
            if (!hit) return false;
        }
        return true;
    };

    if (universe.size() <= 20) {
        std::optional<std::vector<int>> best;
        std::set<int> chosen;

        // Disjoint unhit sets lower-bound the remaining cost.
        auto lower_bound = [&]() {
            std::set<int> blocked;
            int bound = 0;
            for (const auto& s : sets) {
                bool hit = false, disjoint = true;
                for (int x : s) {
                    if (chosen.count(x)) hit = true;
                    if (blocked.count(x)) disjoint = false;
                }
                if (hit || !disjoint) continue;
                ++bound;
                blocked.insert(s.begin(), s.end());
            }
            return bound;
        };

        std::function<void()> search = [&]() {
            const std::vector<int>* unhit = nullptr;
            for (const auto& s : sets) {
                bool hit = false;
                for (int x : s)
                    if (chosen.count(x)) { hit = true; break; }
                if (!hit) { unhit = &s; break; }
            }
            if (!unhit) {
                std::vector<int> cand(chosen.begin(), chosen.end());
                if (!best || cand.size() < best->size() ||
                    (cand.size() == best->size() && cand < *best))
                    best = std::move(cand);
                return;
            }
            if (best) {
                size_t lb = chosen.size() + static_cast<size_t>(lower_bound());
                if (lb > best->size()) return;
            }
            for (int x : *unhit) {
                chosen.insert(x);
                search();
                chosen.erase(x);
            }
        };
        search();
        return *best;
    }

    // Greedy: repeatedly take the id hitting the most uncovered sets.
    std::set<int> chosen;
    while (!hits_all(chosen)) {
        int best_id = -1, best_count = -1;
        for (int x : universe) {
            if (chosen.count(x)) continue;
            int count = 0;
            for (const auto& s : sets) {
                bool hit = false, contains = false;
                for (int y : s) {
                    if (chosen.count(y)) hit = true;
                    if (y == x) contains = true;
                }
                if (!hit && contains) ++count;
            }
            if (count > best_count) { best_count = count; best_id = x; }
        }
        chosen.insert(best_id);
    }
    return {chosen.begin(), chosen.end()};
}

// --- conflict resolution -------------------------------------------------------------

namespace {

std::string fresh_marker(const Grammar& g, const std::string& lhs_name) {
    for (int k = 1;; ++k) {
        std::string lexeme =
            k == 1 ? "<" + lhs_name + ">" : "<" + lhs_name + "_" + std::to_string(k) + ">";
        if (!g.find_literal(lexeme) && !g.find_symbol("'" + lexeme + "'")) return lexeme;
    }
}

}  // namespace

ResolutionDelta resolve_conflicts(const Grammar& g, const std::vector<Conflict>& conflicts,
                                  const std::vector<int>& hit) {
    for (const auto& c : conflicts) {
        if (c.kind == Conflict::Kind::LeftRecursion) {
            if (std::find(hit.begin(), hit.end(), c.production_ids[0]) == hit.end())
                throw GrammarError("hit set misses left-recursive rule " +
                                   std::to_string(c.production_ids[0]));
            continue;
        }
        for (size_t i = 0; i < c.production_ids.size(); ++i)
            for (size_t j = i + 1; j < c.production_ids.size(); ++j) {
                bool covered =
                    std::find(hit.begin(), hit.end(), c.production_ids[i]) != hit.end() ||
                    std::find(hit.begin(), hit.end(), c.production_ids[j]) != hit.end();
                if (!covered)
                    throw GrammarError("hit set leaves rules " +
                                       std::to_string(c.production_ids[i]) + " and " +
                                       std::to_string(c.production_ids[j]) + " in conflict");
            }
    }

    ResolutionDelta delta{g, {}};
    std::vector<int> ordered = hit;
    std::sort(ordered.begin(), ordered.end());
    for (int id : ordered) {
        Production& p = delta.grammar.production_by_id_mut(id);
        std::string lexeme = fresh_marker(delta.grammar, delta.grammar.symbol(p.lhs).name);
        SymbolId marker = delta.grammar.intern_literal(lexeme);
        p.rhs.insert(p.rhs.begin(), marker);
        p.origin = RuleOrigin::TransformInserted;
        delta.inserted.emplace_back(id, lexeme);
    }
    return delta;
}

// --- helpers shared by gramtrans and the baselines ------------------------------------

namespace {

// Rebuild the grammar without unreferenced literal terminals (markers whose
// insertion was undone by reordering). Nonterminals and class terminals stay.
void prune_unused_literals(Grammar& g, RuleMap* map) {
    std::set<SymbolId> referenced;
    for (const auto& p : g.productions())
        for (SymbolId s : p.rhs) referenced.insert(s);

    bool any_unused = false;
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id)
        if (g.symbol(id).kind == SymbolKind::LiteralTerminal && !referenced.count(id))
            any_unused = true;
    if (!any_unused) return;

    Grammar out;
    out.name = g.name;
    out.lexical() = g.lexical();
    std::map<SymbolId, SymbolId> remap;
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id) {
        const Symbol& sym = g.symbol(id);
        if (sym.kind == SymbolKind::LiteralTerminal && !referenced.count(id)) {
            if (sym.name == kNewlineName) out.lexical().newline_significant = false;
            continue;
        }
        remap[id] = out.add_symbol(sym);
    }
    for (const auto& p : g.productions()) {
        std::vector<SymbolId> rhs;
        rhs.reserve(p.rhs.size());
        for (SymbolId s : p.rhs) rhs.push_back(remap.at(s));
        out.add_production(remap.at(p.lhs), std::move(rhs), p.origin);
    }
    out.set_start(remap.at(g.start()));

    if (map)
        for (auto& [_, e] : map->entries)
            for (SymbolId& s : e.transformed_rhs) s = remap.at(s);
    g = std::move(out);
}

std::vector<TraceConflict> render_conflicts(const Grammar& g,
                                            const std::vector<Conflict>& conflicts) {
    std::vector<TraceConflict> out;
    for (const auto& c : conflicts) {
        TraceConflict tc;
        tc.kind = c.kind == Conflict::Kind::SharedLeading ? "shared-leading" : "left-recursion";
        tc.lhs = g.symbol(c.lhs).name;
        if (c.kind == Conflict::Kind::SharedLeading) {
            tc.witness = g.display(c.witness);
        } else {
            std::string path;
            for (size_t i = 0; i < c.path.size(); ++i) {
                if (i) path += " -> ";
                path += g.symbol(c.path[i]).name;
            }
            tc.witness = path;
        }
        tc.rules = c.production_ids;
        out.push_back(std::move(tc));
    }
    return out;
}

bool all_leaves_terminal(const Grammar& g, int depth) {
    for (const auto& p : g.productions()) {
        ExpansionTree tree = expand(g, p.id, depth);
        for (const auto& node : tree.nodes)
            if (node.children.empty() && g.is_nonterminal(node.symbol) && !node.repetition)
                return false;
    }
    return true;
}

int count_live_insertions(const RuleMap& map, const Grammar& target) {
    int n = 0;
    for (const auto& [_, e] : map.entries)
        for (size_t j = 0; j < e.slots.size(); ++j)
            if (e.slots[j] == -1 &&
                target.symbol(e.transformed_rhs[j]).lexeme != kEpsilonLexeme)
                ++n;
    return n;
}

}  // namespace

// --- reordering -----------------------------------------------------------------------

namespace {

bool verify_reorder(const Grammar& g, const TransformOptions& options) {
    if (options.mode == TransformMode::Full) return is_ll_k(g, 1).holds;

    for (int d = 0; d < options.layers; ++d)
        if (!detect_conflicts(g, d).empty()) return false;
    // Layers output is not LL(1)-checkable, so spot-check for ambiguity on
    // sampled programs instead.
    for (int i = 0; i < 20; ++i) {
        SyntaxTree t;
        try {
            t = sample(g, 12, options.seed * 1000 + static_cast<uint64_t>(i));
        } catch (const GrammarError&) {
            continue;  // budget-infeasible sample; nothing to check
        }
        if (is_ambiguous(earley_parse(g, frontier(t)))) return false;
    }
    return true;
}

}  // namespace

ReorderOutcome reorder_symbols(const Grammar& g, const RuleMap& map,
                               const TransformOptions& options) {
    ReorderOutcome out{g, map, {}};

    // Inserted markers currently leading their rule, in production order.
    std::vector<int> candidates;
    for (const auto& [id, e] : out.map.entries)
        if (!e.slots.empty() && e.slots[0] == -1 &&
            out.grammar.symbol(e.transformed_rhs[0]).lexeme != kEpsilonLexeme)
            candidates.push_back(id);
    std::sort(candidates.begin(), candidates.end());

    auto occurrence_stats = [&](SymbolId t) {
        int total = 0, lowest_rule = -1;
        for (const auto& p : out.grammar.productions()) {
            int here = static_cast<int>(std::count(p.rhs.begin(), p.rhs.end(), t));
            if (here > 0 && lowest_rule < 0) lowest_rule = p.id;
            total += here;
        }
        return std::make_pair(total, lowest_rule);
    };

    for (int id : candidates) {
        RuleMapEntry& e = out.map.entries.at(id);
        const std::vector<SymbolId>& rhs = out.grammar.production_by_id(id).rhs;
        std::string marker = out.grammar.symbol(rhs[0]).lexeme;

        struct Attempt { size_t position; bool unique; };
        std::vector<Attempt> attempts;
        for (int pass = 0; pass < 2; ++pass) {
            for (size_t j = 1; j < rhs.size(); ++j) {
                SymbolId t = rhs[j];
                const Symbol& sym = out.grammar.symbol(t);
                if (out.grammar.is_nonterminal(t) || sym.content_bearing) continue;
                if (sym.lexeme == kEpsilonLexeme) continue;
                if (e.slots[j] < 0) continue;  // inserted terminals are deleted, not moved
                auto [total, lowest] = occurrence_stats(t);
                bool unique = total == 1;
                if (pass == 0 && !unique) continue;
                if (pass == 1) {
                    if (unique) continue;
                    int in_rule = static_cast<int>(std::count(rhs.begin(), rhs.end(), t));
                    if (lowest != id || in_rule != 1) continue;
                }
                attempts.push_back({j, unique});
            }
        }

        bool moved = false;
        for (const Attempt& a : attempts) {
            if (moved) break;
            Grammar candidate = out.grammar;
            Production& p = candidate.production_by_id_mut(id);
            std::vector<SymbolId> new_rhs;
            new_rhs.push_back(p.rhs[a.position]);
            for (size_t j = 1; j < p.rhs.size(); ++j)
                if (j != a.position) new_rhs.push_back(p.rhs[j]);
            p.rhs = std::move(new_rhs);

            ReorderEvent event;
            event.production_id = id;
            event.terminal = out.grammar.display(rhs[a.position]);
            event.from_position = static_cast<int>(a.position);
            event.removed_marker = marker;
            if (verify_reorder(candidate, options)) {
                event.applied = true;
                event.note = a.unique ? "unique terminal" : "shared terminal, lowest rule";
                out.grammar = std::move(candidate);
                std::vector<int> new_slots;
                new_slots.push_back(e.slots[a.position]);
                for (size_t j = 1; j < e.slots.size(); ++j)
                    if (j != a.position) new_slots.push_back(e.slots[j]);
                e.slots = std::move(new_slots);
                e.transformed_rhs = out.grammar.production_by_id(id).rhs;
                e.removed_insertions.push_back(marker);
                moved = true;
            } else {
                event.applied = false;
                event.note = options.mode == TransformMode::Full
                                 ? "reverted: breaks the LL(1) check"
                                 : "reverted: reintroduces conflicts or ambiguity";
            }
            out.events.push_back(std::move(event));
        }
    }
    return out;
}

// --- gramtrans --------------------------------------------------------------------------

TransformResult gramtrans(const Grammar& original, const TransformOptions& options) {
    ValidationReport vr = validate(original);
    if (!vr.ok())
        throw GrammarError("grammar does not validate: " + vr.errors.front().message);
    if (options.mode == TransformMode::Layers && options.layers < 1)
        throw GrammarError("layers mode needs at least one layer");

    Grammar cur = epsilon_normalize(original);

    RuleMap map;
    map.source = original.name;
    for (const auto& p : original.productions()) {
        RuleMapEntry e;
        e.production_id = p.id;
        e.original_rhs = p.rhs;
        e.transformed_rhs = cur.production_by_id(p.id).rhs;
        if (p.rhs.empty()) {
            e.slots = {-1};  // the <eps> literal
        } else {
            e.slots.resize(p.rhs.size());
            for (size_t i = 0; i < p.rhs.size(); ++i) e.slots[i] = static_cast<int>(i);
        }
        map.entries.emplace(p.id, std::move(e));
    }

    TransformTrace trace;
    trace.mode = options.mode == TransformMode::Full
                     ? "full"
                     : "layers=" + std::to_string(options.layers);

    std::map<int, TraceIteration> iterations;
    int insertions_total = 0;
    const int insertion_cap =
        std::max(1000, 50 * static_cast<int>(original.productions().size()));

    int depth = 0;
    while (true) {
        if (depth > options.depth_cap)
            throw TransformError("conflict elimination exceeded the depth cap of " +
                                     std::to_string(options.depth_cap),
                                 detect_conflicts(cur, options.depth_cap));

        std::vector<Conflict> conflicts = detect_conflicts(cur, depth);
        if (!conflicts.empty()) {
            std::vector<std::vector<int>> sets;
            for (const auto& c : conflicts) {
                if (c.kind == Conflict::Kind::LeftRecursion) {
                    sets.push_back(c.production_ids);
                    continue;
                }
                for (size_t i = 0; i < c.production_ids.size(); ++i)
                    for (size_t j = i + 1; j < c.production_ids.size(); ++j)
                        sets.push_back({c.production_ids[i], c.production_ids[j]});
            }
            std::vector<int> hit = min_hitting_set(sets);
            ResolutionDelta delta = resolve_conflicts(cur, conflicts, hit);
            cur = std::move(delta.grammar);

            for (const auto& [rule, lexeme] : delta.inserted) {
                RuleMapEntry& e = map.entries.at(rule);
                e.transformed_rhs = cur.production_by_id(rule).rhs;
                e.slots.insert(e.slots.begin(), -1);
            }

            TraceRound round;
            round.conflicts = render_conflicts(cur, conflicts);
            round.hitting_set = hit;
            round.inserted = delta.inserted;
            iterations[depth].rounds.push_back(std::move(round));

            insertions_total += static_cast<int>(delta.inserted.size());
            if (insertions_total > insertion_cap)
                throw TransformError("conflict elimination exceeded " +
                                         std::to_string(insertion_cap) +
                                         " marker insertions without converging",
                                     conflicts);
            depth = 0;
            continue;
        }

        trace.depth_reached = std::max(trace.depth_reached, depth);
        if (options.mode == TransformMode::Full) {
            if (all_leaves_terminal(cur, depth)) break;
        } else {
            if (depth + 1 >= options.layers) break;
        }
        ++depth;
    }

    for (auto& [d, it] : iterations) {
        it.depth = d;
        trace.iterations.push_back(std::move(it));
    }
    trace.introduced_before_reorder = insertions_total;

    if (options.reorder) {
        ReorderOutcome reordered = reorder_symbols(cur, map, options);
        cur = std::move(reordered.grammar);
        map = std::move(reordered.map);
        trace.reorder = std::move(reordered.events);
    }
    trace.introduced_after_reorder = count_live_insertions(map, cur);

    prune_unused_literals(cur, &map);

    if (options.mode == TransformMode::Full) {
        LlResult ll = is_ll_k(cur, 1);
        if (!ll.holds)
            throw TransformError("transform finished without reaching LL(1)",
                                 detect_conflicts(cur, 0));
    }

    cur.name = original.name + (options.mode == TransformMode::Full
                                    ? ".ll1"
                                    : ".layers" + std::to_string(options.layers));
    map.target = cur.name;
    check_rule_map(map, original, cur);
    return {std::move(cur), std::move(map), std::move(trace)};
}

// --- baselines ---------------------------------------------------------------------------

namespace {

std::string fresh_literal(const Grammar& g, std::string base) {
    if (!g.find_literal(base)) return base;
    for (int k = 2;; ++k) {
        std::string lexeme = base + "_" + std::to_string(k);
        if (!g.find_literal(lexeme)) return lexeme;
    }
}

RuleMap identity_map(const Grammar& g) {
    RuleMap map;
    map.source = g.name;
    for (const auto& p : g.productions()) {
        RuleMapEntry e;
        e.production_id = p.id;
        e.original_rhs = p.rhs;
        e.transformed_rhs = p.rhs;
        e.slots.resize(p.rhs.size());
        for (size_t i = 0; i < p.rhs.size(); ++i) e.slots[i] = static_cast<int>(i);
        map.entries.emplace(p.id, std::move(e));
    }
    return map;
}

}  // namespace

BaselineResult sbt_transform(const Grammar& g) {
    Grammar out = g;
    RuleMap map = identity_map(g);

    std::map<SymbolId, std::pair<SymbolId, SymbolId>> brackets;
    for (SymbolId id = 0; id < static_cast<SymbolId>(g.symbols().size()); ++id) {
        if (!g.is_nonterminal(id)) continue;
        const std::string& name = g.symbol(id).name;
        SymbolId open = out.intern_literal(fresh_literal(out, "(_" + name));
        SymbolId close = out.intern_literal(fresh_literal(out, ")_" + name));
        brackets[id] = {open, close};
    }

    for (auto& p : out.productions_mut()) {
        auto [open, close] = brackets.at(p.lhs);
        p.rhs.insert(p.rhs.begin(), open);
        p.rhs.push_back(close);
        p.origin = RuleOrigin::TransformInserted;

        RuleMapEntry& e = map.entries.at(p.id);
        e.transformed_rhs = p.rhs;
        e.slots.insert(e.slots.begin(), -1);
        e.slots.push_back(-1);
    }

    out.name = g.name + ".sbt";
    map.target = out.name;
    check_rule_map(map, g, out);
    return {std::move(out), std::move(map)};
}

BaselineResult grammar_rule_transform(const Grammar& g) {
    Grammar out = g;
    RuleMap map = identity_map(g);

    for (auto& p : out.productions_mut()) {
        std::string label = "<" + out.symbol(p.lhs).name + "->";
        if (p.rhs.empty()) {
            label += "eps";
        } else {
            for (size_t i = 0; i < p.rhs.size(); ++i) {
                if (i) label += ".";
                const Symbol& sym = out.symbol(p.rhs[i]);
                label += sym.kind == SymbolKind::LiteralTerminal ? sym.lexeme : sym.name;
            }
        }
        label += ">";
        SymbolId marker = out.intern_literal(fresh_literal(out, label));

        RuleMapEntry& e = map.entries.at(p.id);
        std::vector<SymbolId> new_rhs{marker};
        std::vector<int> new_slots{-1};
        for (size_t i = 0; i < p.rhs.size(); ++i) {
            const Symbol& sym = out.symbol(p.rhs[i]);
            bool keep = sym.kind == SymbolKind::Nonterminal || sym.content_bearing;
            if (!keep) continue;
            new_rhs.push_back(p.rhs[i]);
            new_slots.push_back(static_cast<int>(i));
        }
        p.rhs = std::move(new_rhs);
        p.origin = RuleOrigin::TransformInserted;
        e.transformed_rhs = p.rhs;
        e.slots = std::move(new_slots);
    }

    prune_unused_literals(out, &map);
    out.name = g.name + ".rules";
    map.target = out.name;
    check_rule_map(map, g, out);
    return {std::move(out), std::move(map)};
}

}  // namespace gramtrans
