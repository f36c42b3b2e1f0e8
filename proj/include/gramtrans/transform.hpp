#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gramtrans/analysis.hpp"
#include "gramtrans/grammar.hpp"

namespace gramtrans {

// --- rule map ------------------------------------------------------------------

/// Per-production alignment between a source grammar and its transform.
/// slots[j] is the original rhs index feeding transformed rhs position j,
/// or -1 when position j is an inserted terminal. Original positions absent
/// from slots were deleted (never content-bearing). The nonterminal
/// subsequence is preserved 1:1 and in order.
struct RuleMapEntry {
    int production_id = 0;
    std::vector<SymbolId> original_rhs;     // ids in the source grammar
    std::vector<SymbolId> transformed_rhs;  // ids in the target grammar
    std::vector<int> slots;
    std::vector<std::string> removed_insertions;  // markers inserted then reordered away

    int insertion_count() const;
    std::vector<int> deleted_originals() const;
    /// Aligned terminals whose relative order changed: (original, new) positions.
    std::vector<std::pair<int, int>> moves(const Grammar& source) const;
};

struct RuleMap {
    std::string source;
    std::string target;
    std::map<int, RuleMapEntry> entries;
};

/// Consistency between map and the two grammars: ids line up, slots form a
/// bijection onto kept originals, nonterminals are a preserved subsequence,
/// and nothing content-bearing was deleted. Throws GrammarError on violation.
void check_rule_map(const RuleMap& map, const Grammar& source, const Grammar& target);

std::string rule_map_to_json(const RuleMap& map, const Grammar& source, const Grammar& target);
RuleMap rule_map_from_json(const std::string& text, const Grammar& source,
                           const Grammar& target);

// --- conflict resolution ---------------------------------------------------------

/// Minimum hitting set: smallest id set intersecting every input set; ties
/// break to the lexicographically smallest sorted id vector. Exact
/// branch-and-bound up to 20 distinct ids, greedy beyond.
std::vector<int> min_hitting_set(const std::vector<std::vector<int>>& sets);

struct ResolutionDelta {
    Grammar grammar;
    std::vector<std::pair<int, std::string>> inserted;  // production id -> marker lexeme
};

/// Prepend a fresh <lhs>-derived marker terminal to every hit production.
/// Pre: the hit set intersects every pair of conflicting rules and contains
/// every left-recursive rule in `conflicts`.
ResolutionDelta resolve_conflicts(const Grammar& g, const std::vector<Conflict>& conflicts,
                                  const std::vector<int>& hit);

// --- the transform ----------------------------------------------------------------

enum class TransformMode { Full, Layers };

struct TransformOptions {
    TransformMode mode = TransformMode::Full;
    int layers = 1;          // conflict-free depth for Layers mode
    int depth_cap = 32;
    bool reorder = true;
    uint64_t seed = 42;      // drives the layers-mode ambiguity spot check
};

struct TraceConflict {
    std::string kind;  // "shared-leading" | "left-recursion"
    std::string lhs;
    std::string witness;
    std::vector<int> rules;
};

struct TraceRound {
    std::vector<TraceConflict> conflicts;
    std::vector<int> hitting_set;
    std::vector<std::pair<int, std::string>> inserted;
};

struct TraceIteration {
    int depth = 0;
    std::vector<TraceRound> rounds;
};

struct ReorderEvent {
    int production_id = 0;
    std::string terminal;
    int from_position = 0;  // rhs index before the move (marker included)
    std::string removed_marker;
    bool applied = false;
    std::string note;  // why a candidate move was rejected
};

struct TransformTrace {
    std::string mode;
    std::vector<TraceIteration> iterations;  // strictly increasing depths
    std::vector<ReorderEvent> reorder;
    int introduced_before_reorder = 0;
    int introduced_after_reorder = 0;
    int depth_reached = 0;
};

struct TransformResult {
    Grammar grammar;
    RuleMap map;
    TransformTrace trace;
};

/// Transform failure: conflicts could not be eliminated within the caps.
class TransformError : public std::runtime_error {
public:
    TransformError(std::string msg, std::vector<Conflict> live)
        : std::runtime_error(std::move(msg)), live_conflicts(std::move(live)) {}
    std::vector<Conflict> live_conflicts;
};

/// Hierarchical conflict elimination: epsilon-normalize, then repeatedly
/// detect conflicts at growing expansion depths, resolve each batch with a
/// minimum hitting set of fresh markers, and restart from depth zero. Full
/// mode runs until conflict-free with all-terminal expansion leaves (result
/// is strong-LL(1)); Layers mode stops once depths below `layers` are clean.
/// Ends with marker reordering unless disabled.
TransformResult gramtrans(const Grammar& g, const TransformOptions& options = {});

struct ReorderOutcome {
    Grammar grammar;
    RuleMap map;
    std::vector<ReorderEvent> events;
};

/// Marker elimination pass: rules led by an inserted marker may trade it for
/// a non-content terminal of their rhs moved to the front (unique terminals
/// anywhere; shared terminals only in the lowest-id rule containing them).
/// Every move is verified and reverted if verification fails.
ReorderOutcome reorder_symbols(const Grammar& g, const RuleMap& map,
                               const TransformOptions& options);

// --- baseline transforms -----------------------------------------------------------

struct BaselineResult {
    Grammar grammar;
    RuleMap map;
};

/// Structured-bracket form: A -> (_A beta )_A for every production.
BaselineResult sbt_transform(const Grammar& g);

/// Rule-name prefix form: each production gains a unique leading marker and
/// loses its non-content terminals. Output is strong-LL(1) by construction.
BaselineResult grammar_rule_transform(const Grammar& g);

}  // namespace gramtrans
