#pragma once

#include "itemcp/bitset.hpp"
#include "itemcp/threshold.hpp"

#include <cstdint>
#include <istream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace itemcp {

// Items and transactions are dense 0-based indices internally; every file
// format and every printed result uses 1-based ids.

/// Immutable 0/1 incidence matrix kept as both per-item transaction bitsets
/// (columns) and per-transaction item bitsets (rows).
class TransactionDatabase {
public:
    /// rows[j] lists the 0-based items of transaction j; duplicates collapse.
    TransactionDatabase(int item_count, const std::vector<std::vector<int>>& rows);

    int item_count() const { return static_cast<int>(columns_.size()); }
    int transaction_count() const { return static_cast<int>(rows_.size()); }

    const Bitset& column(int item) const { return columns_[static_cast<std::size_t>(item)]; }
    const Bitset& row(int transaction) const { return rows_[static_cast<std::size_t>(transaction)]; }
    bool contains(int item, int transaction) const { return column(item).test(static_cast<std::size_t>(transaction)); }

    Bitset all_items() const { return Bitset(static_cast<std::size_t>(item_count())).set(); }
    Bitset all_transactions() const { return Bitset(static_cast<std::size_t>(transaction_count())).set(); }

    /// Display name; the 1-based id when no label was loaded.
    std::string item_label(int item) const;
    std::optional<int> find_item(std::string_view label_or_id) const;
    void set_item_labels(std::vector<std::string> labels);
    bool has_labels() const { return !labels_.empty(); }

private:
    std::vector<Bitset> columns_;
    std::vector<Bitset> rows_;
    std::vector<std::string> labels_;
};

/// Reads the FIMI format: one transaction per line, whitespace-separated
/// positive item ids, blank lines ignored.
TransactionDatabase parse_fimi(std::istream& in);
TransactionDatabase parse_fimi_text(std::string_view text);
TransactionDatabase load_fimi(const std::string& path);

/// "id label" per line; returns one label per item.
std::vector<std::string> parse_item_labels(std::istream& in, int item_count);

enum class Axis { items, transactions };

struct Group {
    std::string name;
    Bitset members;
};

struct PartitionLevel {
    std::vector<Group> groups;
};

/// Named disjoint groups over one axis; several levels for nested schemes
/// (region / department / city). Each level covers every index exactly once.
struct PartitionScheme {
    Axis axis = Axis::items;
    std::vector<PartitionLevel> levels;

    const std::vector<Group>& groups(std::size_t level = 0) const { return levels.at(level).groups; }
    std::size_t group_count(std::size_t level = 0) const { return levels.at(level).groups.size(); }
    /// Locates a group by name; returns (level, group).
    std::optional<std::pair<std::size_t, std::size_t>> find(std::string_view name) const;
};

/// Lines "name: id id ...", optional "level <k>" headers, '#' comments.
/// Indices never mentioned in a level become singleton groups.
PartitionScheme parse_partition(std::istream& in, const TransactionDatabase& db, Axis axis);
PartitionScheme parse_partition_text(std::string_view text, const TransactionDatabase& db, Axis axis);
PartitionScheme load_partition(const std::string& path, const TransactionDatabase& db, Axis axis);

/// The (H, V) activation vectors of a sub-dataset.
struct SubDatasetMask {
    Bitset items;
    Bitset transactions;

    static SubDatasetMask full(const TransactionDatabase& db) {
        return {db.all_items(), db.all_transactions()};
    }
    friend bool operator==(const SubDatasetMask&, const SubDatasetMask&) = default;
};

/// support / active, kept unreduced so it prints as "3/6".
struct Frequency {
    std::uint64_t support = 0;
    std::uint64_t active = 1;

    bool meets(const Threshold& theta) const { return theta.admits(support, active); }
    std::string str() const { return std::to_string(support) + "/" + std::to_string(active); }
    friend bool operator==(const Frequency& a, const Frequency& b) {
        return a.support * b.active == b.support * a.active;
    }
};

/// Transactions of the mask that contain every item of `itemset`.
Bitset cover(const TransactionDatabase& db, const Bitset& itemset, const SubDatasetMask& mask);

/// Throws UndefinedFrequency when the mask has no active transaction.
Frequency frequency(const TransactionDatabase& db, const Bitset& itemset, const SubDatasetMask& mask);

/// Active items shared by every covering transaction. Throws EmptyCover.
Bitset closure(const TransactionDatabase& db, const Bitset& itemset, const SubDatasetMask& mask);

/// Itemset with 1-based ids as "3 7" or with labels as "G K".
std::string format_itemset(const TransactionDatabase& db, const Bitset& itemset);

}  // namespace itemcp
