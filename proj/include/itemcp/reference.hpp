#pragma once

#include "itemcp/query.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <atomic>
#include <chrono>
#include <functional>
#include <optional>
#include <vector>

namespace itemcp {

using BigInt = boost::multiprecision::cpp_int;

/// sum_{k=lb}^{ub} C(n_groups, k). Throws ConfigError on invalid bounds.
BigInt count_masks(int n_groups, int lb, int ub);

/// Lexicographic k-subsets of {0..n-1} for k = lb..ub.
class CombinationIterator {
public:
    CombinationIterator(int n, int lb, int ub);
    /// Advances to the next subset; false when exhausted.
    bool next();
    const std::vector<int>& current() const { return current_; }

private:
    int n_;
    int ub_;
    int k_;
    bool started_ = false;
    std::vector<int> current_;
};

/// A feasible sub-dataset together with the group ids that produced it.
struct MaskCandidate {
    MaskChoice choice;
    SubDatasetMask mask;
};

/// Lazy iterator over the feasible masks of a query: the Cartesian product of
/// the item-side and transaction-side selections.
class MaskEnumerator {
public:
    MaskEnumerator(const Query& query, const TransactionDatabase& db, const Schemes& schemes);

    /// Total number of masks, computed without materialization.
    BigInt count() const;
    bool next(MaskCandidate& out);
    std::vector<MaskCandidate> materialize();

private:
    struct AxisState {
        AxisSelection selection;
        std::vector<const Group*> groups;
        Bitset fixed;
        std::optional<CombinationIterator> combos;
        std::size_t entity = 0;
        bool single_done = false;

        bool advance();
        std::vector<int> ids() const;
        Bitset members() const;
        BigInt count() const;
    };

    AxisState items_;
    AxisState transactions_;
    bool started_ = false;
    bool exhausted_ = false;
};

MaskEnumerator enumerate_masks(const Query& query, const TransactionDatabase& db, const Schemes& schemes);

/// Itemset-side restrictions the miners apply during search.
struct MiningFilter {
    int min_size = 1;
    std::optional<std::pair<int, int>> span;
    const PartitionScheme* span_scheme = nullptr;
    std::vector<int> required;
    std::vector<int> forbidden;

    static MiningFilter from_query(const Query& query, const Schemes& schemes);
};

/// Frequent closed itemsets of one sub-dataset by closure extension with a
/// prefix-preservation test; each closed set is generated once.
std::vector<Bitset> mine_closed(const TransactionDatabase& db, const SubDatasetMask& mask, const Threshold& theta,
                                const MiningFilter& filter = {});

/// All frequent non-empty itemsets of one sub-dataset, depth-first.
std::vector<Bitset> mine_frequent(const TransactionDatabase& db, const SubDatasetMask& mask, const Threshold& theta,
                                  const MiningFilter& filter = {});

struct ReferenceOptions {
    int parallel = 1;
    bool materialize = false;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

struct ReferenceStats {
    std::uint64_t masks = 0;
};

/// Enumerates masks, then mines each one. Throws NotSupported for
/// one-of-levels selections and Timeout past the deadline.
std::vector<SolutionPair> pp_mine(const Query& query, const TransactionDatabase& db, const Schemes& schemes,
                                  const ReferenceOptions& options = {}, ReferenceStats* stats = nullptr);

/// Evaluates the query by definition over every feasible mask and every
/// non-empty subset of its active items, using only cover, frequency and
/// closure. Throws SizeGuard above 24 items or 2^20 masks.
std::vector<SolutionPair> brute_force_theory(const Query& query, const TransactionDatabase& db,
                                             const Schemes& schemes, const ReferenceOptions& options = {},
                                             ReferenceStats* stats = nullptr);

}  // namespace itemcp
