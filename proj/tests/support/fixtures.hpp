#pragma once

#include "itemcp/dataset.hpp"
#include "itemcp/query.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace itemcp::test {

// Running example: items A B C D E F G H K as ids 1..9, transactions t1..t6.
inline constexpr const char* table1_fimi =
    "2 3 7 8 9\n"
    "1 4 7 9\n"
    "1 3 4 8\n"
    "1 5 6\n"
    "2 5 6\n"
    "2 5 6 7 9\n";

inline constexpr const char* table1_item_groups = "I1: 1 2\nI2: 3 4 5\nI3: 6 7 8 9\n";
inline constexpr const char* table1_trans_groups = "T1: 1 2\nT2: 3 4\nT3: 5 6\n";

inline TransactionDatabase table1() {
    auto db = parse_fimi_text(table1_fimi);
    db.set_item_labels({"A", "B", "C", "D", "E", "F", "G", "H", "K"});
    return db;
}

inline Schemes table1_schemes(const TransactionDatabase& db) {
    Schemes s;
    s.items = parse_partition_text(table1_item_groups, db, Axis::items);
    s.transactions = parse_partition_text(table1_trans_groups, db, Axis::transactions);
    return s;
}

/// Itemset from a string of single-letter labels, e.g. "GK".
inline Bitset items(const TransactionDatabase& db, const std::string& letters) {
    Bitset b(static_cast<std::size_t>(db.item_count()));
    for (char c : letters) b.set(static_cast<std::size_t>(*db.find_item(std::string(1, c))));
    return b;
}

/// Transactions from 1-based ids.
inline Bitset transactions(const TransactionDatabase& db, std::initializer_list<int> ids) {
    Bitset b(static_cast<std::size_t>(db.transaction_count()));
    for (int t : ids) b.set(static_cast<std::size_t>(t - 1));
    return b;
}

/// Compact rendering "descriptor|descriptor|ITEMS" with labels concatenated.
inline std::string key(const SolutionPair& p, const Query& q, const TransactionDatabase& db, const Schemes& s) {
    std::string itemset;
    for (int i : to_indices(p.itemset)) itemset += db.item_label(i);
    return describe_items(p, q, db, s) + "|" + describe_transactions(p, q, db, s) + "|" + itemset;
}

inline std::set<std::string> keys(const std::vector<SolutionPair>& pairs, const Query& q,
                                  const TransactionDatabase& db, const Schemes& s) {
    std::set<std::string> out;
    for (const auto& p : pairs) out.insert(key(p, q, db, s));
    return out;
}

/// Car purchases: 2 regions x 2 departments x 2 cities, 5 purchases per city.
/// Items: 1 Ferrari, 2 Renault, 3 Peugeot, 4 Citroen, then one indicator item
/// per region (5-6), department (7-10) and city (11-18). A single Ferrari is
/// sold in city C1, so only C1 (1/5) and its department D1 (1/10) reach 10%.
struct CarData {
    std::string fimi;
    std::string labels;
    std::string places;
};

inline CarData car_data() {
    CarData d;
    const char* brands[] = {"Renault", "Peugeot", "Citroen"};
    int t = 0;
    std::string region_lines[2], dept_lines[4], city_lines[8];
    for (int city = 0; city < 8; ++city) {
        const int dept = city / 2;
        const int region = dept / 2;
        for (int k = 0; k < 5; ++k, ++t) {
            const int brand = (city == 0 && k == 0) ? 1 : 2 + (t % 3);
            d.fimi += std::to_string(brand) + " " + std::to_string(5 + region) + " " + std::to_string(7 + dept) + " " +
                      std::to_string(11 + city) + "\n";
            const std::string id = " " + std::to_string(t + 1);
            region_lines[region] += id;
            dept_lines[dept] += id;
            city_lines[city] += id;
        }
    }
    d.labels = "1 Ferrari\n";
    for (int b = 0; b < 3; ++b) d.labels += std::to_string(b + 2) + " " + brands[b] + "\n";
    for (int r = 0; r < 2; ++r) d.labels += std::to_string(5 + r) + " R" + std::to_string(r + 1) + "\n";
    for (int k = 0; k < 4; ++k) d.labels += std::to_string(7 + k) + " D" + std::to_string(k + 1) + "\n";
    for (int c = 0; c < 8; ++c) d.labels += std::to_string(11 + c) + " C" + std::to_string(c + 1) + "\n";
    d.places = "level 1\n";
    for (int r = 0; r < 2; ++r) d.places += "R" + std::to_string(r + 1) + ":" + region_lines[r] + "\n";
    d.places += "level 2\n";
    for (int k = 0; k < 4; ++k) d.places += "D" + std::to_string(k + 1) + ":" + dept_lines[k] + "\n";
    d.places += "level 3\n";
    for (int c = 0; c < 8; ++c) d.places += "C" + std::to_string(c + 1) + ":" + city_lines[c] + "\n";
    return d;
}

/// Zoo-like random data: 101 transactions over 36 items, density near 44%.
/// Rows belong to a latent class; a block of "anchor" items is very common in
/// the majority class, so long itemsets are frequent in some sub-datasets.
inline std::vector<std::vector<int>> zoo_like_rows(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> items(36);
    std::iota(items.begin(), items.end(), 0);
    std::shuffle(items.begin(), items.end(), rng);
    std::vector<double> common(36), rare(36);
    for (std::size_t k = 0; k < 36; ++k) {
        const int i = items[k];
        common[static_cast<std::size_t>(i)] = k < 9 ? 0.93 : 0.06 + 0.45 * static_cast<double>(k % 9) / 8.0;
        rare[static_cast<std::size_t>(i)] = k < 9 ? 0.35 : 0.12 + 0.55 * static_cast<double>((k * 5) % 9) / 8.0;
    }
    std::vector<std::vector<int>> rows(101);
    for (auto& row : rows) {
        const auto& p = std::bernoulli_distribution(0.7)(rng) ? common : rare;
        for (int i = 0; i < 36; ++i)
            if (std::bernoulli_distribution(p[static_cast<std::size_t>(i)])(rng)) row.push_back(i);
    }
    return rows;
}

/// Consecutive equal-size groups: "name1: ..." lines over 1..size.
inline std::string uniform_groups(int size, int groups, const std::string& prefix) {
    std::string out;
    for (int g = 0; g < groups; ++g) {
        out += prefix + std::to_string(g + 1) + ":";
        for (int idx = g * size / groups; idx < (g + 1) * size / groups; ++idx) out += " " + std::to_string(idx + 1);
        out += "\n";
    }
    return out;
}

}  // namespace itemcp::test
