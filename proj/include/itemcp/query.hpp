#pragma once

#include "itemcp/dataset.hpp"
#include "itemcp/threshold.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace itemcp {

enum class EngineKind { cp, baseline, oracle };
/// Mining part used by the cp engine: the global propagator or the reified family.
enum class MiningModel { global, reified };

std::string to_string(EngineKind e);
EngineKind parse_engine(std::string_view name);

/// Which part of one axis forms the sub-dataset.
struct AxisSelection {
    enum class Mode { all, bounds, list, one_of_levels };
    Mode mode = Mode::all;
    int lb = 0;
    int ub = 0;
    std::vector<int> members;  // Mode::list, 0-based

    static AxisSelection all() { return {}; }
    static AxisSelection bounds(int lb, int ub) { return {Mode::bounds, lb, ub, {}}; }
    static AxisSelection list(std::vector<int> members) { return {Mode::list, 0, 0, std::move(members)}; }
    static AxisSelection one_of_levels() { return {Mode::one_of_levels, 0, 0, {}}; }
};

struct Schemes {
    std::optional<PartitionScheme> items;
    std::optional<PartitionScheme> transactions;
};

struct Query {
    Threshold theta;
    bool closed = true;
    int min_size = 1;
    std::optional<std::pair<int, int>> span;
    std::vector<int> required;
    std::vector<int> forbidden;
    AxisSelection items;
    AxisSelection transactions;
    EngineKind engine = EngineKind::cp;
    MiningModel model = MiningModel::global;
};

/// Raw key/value content of a query file before names are resolved.
struct QuerySpec {
    std::string theta;
    std::optional<int> min_size;
    std::optional<bool> closed;
    std::optional<std::pair<int, int>> span;
    std::vector<std::string> require;
    std::vector<std::string> forbid;
    std::vector<std::string> items_active{"all"};
    std::vector<std::string> trans_active{"all"};
};

/// Grammar, one "key: value" per line, '#' starts a comment line:
///   theta: 50% | 1/2 | 0.5          (required)
///   minsize: <k>
///   closed: true | false
///   span: <lb> <ub>
///   require: <item> ...             (labels or 1-based ids)
///   forbid: <item> ...
///   items_active: all | <lb> <ub> | list <item> ...
///   trans_active: all | <lb> <ub> | list <id> ... | one-of-levels
/// Unknown or repeated keys are rejected.
QuerySpec parse_query_spec(std::istream& in);
QuerySpec parse_query_spec_text(std::string_view text);
QuerySpec load_query_spec(const std::string& path);

/// Resolves names against the database and checks every bound against the
/// partition schemes. Throws ConfigError.
Query build_query(const QuerySpec& spec, const TransactionDatabase& db, const Schemes& schemes);

/// Same checks as build_query for an already structured query.
void validate_query(const Query& query, const TransactionDatabase& db, const Schemes& schemes);

namespace templates {

/// Frequent closed itemsets of the whole dataset.
Query fci(Threshold theta);
/// fci, touching between lb and ub item groups.
Query fci_span(Threshold theta, int lb, int ub);
/// fci over lb..ub whole item groups.
Query item_groups(Threshold theta, int lb, int ub);
/// fci over lb..ub whole transaction groups.
Query transaction_groups(Threshold theta, int lb, int ub);
/// item_groups and transaction_groups together.
Query item_and_transaction_groups(Threshold theta, int lb_items, int ub_items, int lb_trans, int ub_trans);
/// Frequent itemsets containing `item`, mined with only that item active,
/// over exactly one transaction group of any level.
Query entity_with_item(Threshold theta, int item);

}  // namespace templates

/// Identifies the sub-dataset of a solution: selected group ids per axis
/// (group index for bounds mode, flattened level-by-level index for
/// one-of-levels mode, empty otherwise).
struct MaskChoice {
    std::vector<int> item_groups;
    std::vector<int> transaction_groups;
    friend bool operator==(const MaskChoice&, const MaskChoice&) = default;
};

/// One (sub-dataset, itemset) pair of a theory.
struct SolutionPair {
    MaskChoice choice;
    SubDatasetMask mask;
    Bitset itemset;
    std::uint64_t support = 0;
    std::uint64_t active = 0;

    friend bool operator==(const SolutionPair&, const SolutionPair&) = default;
};

/// Masks first (group ids, then active indices), then itemsets, all lexicographic.
bool canonical_less(const SolutionPair& a, const SolutionPair& b);
void canonical_sort(std::vector<SolutionPair>& pairs);

/// Human-readable sub-dataset descriptor for one axis: "ALL", group names
/// joined by '+', or explicit ids when the selection is not a union of
/// whole groups.
std::string describe_items(const SolutionPair& pair, const Query& query, const TransactionDatabase& db,
                           const Schemes& schemes);
std::string describe_transactions(const SolutionPair& pair, const Query& query, const TransactionDatabase& db,
                                  const Schemes& schemes);

/// "items<TAB>transactions<TAB>itemset<TAB>support<TAB>support/active"
std::string format_pair(const SolutionPair& pair, const Query& query, const TransactionDatabase& db,
                        const Schemes& schemes);

/// Flattened (level, group) list of a scheme, in one-of-levels id order.
std::vector<const Group*> flatten_groups(const PartitionScheme& scheme);

/// Number of groups of `itemset` touched, for the query's item scheme.
int category_span(const Bitset& itemset, const PartitionScheme& scheme);

}  // namespace itemcp
