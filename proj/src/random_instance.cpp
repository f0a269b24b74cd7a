#include "itemcp/random_instance.hpp"

#include <algorithm>
#include <numeric>

namespace itemcp {

namespace {

int uniform(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::pair<int, int> random_bounds(std::mt19937_64& rng, int groups) {
    int lb = uniform(rng, 0, groups);
    int ub = uniform(rng, lb, groups);
    return {lb, ub};
}

}  // namespace

PartitionScheme random_partition(std::mt19937_64& rng, int size, int groups, Axis axis, const std::string& prefix) {
    std::vector<int> order(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    // Every group receives one index first, the rest land anywhere.
    std::vector<int> owner(static_cast<std::size_t>(size));
    for (int k = 0; k < size; ++k)
        owner[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k < groups ? k : uniform(rng, 0, groups - 1);

    PartitionScheme scheme;
    scheme.axis = axis;
    scheme.levels.emplace_back();
    for (int g = 0; g < groups; ++g) {
        Group group{prefix + std::to_string(g + 1), Bitset(static_cast<std::size_t>(size))};
        for (int idx = 0; idx < size; ++idx)
            if (owner[static_cast<std::size_t>(idx)] == g) group.members.set(static_cast<std::size_t>(idx));
        scheme.levels.back().groups.push_back(std::move(group));
    }
    return scheme;
}

RandomInstance random_instance(std::mt19937_64& rng, const RandomInstanceLimits& limits) {
    const int n = uniform(rng, 2, limits.max_items);
    const int m = uniform(rng, 2, limits.max_transactions);
    const double density = std::uniform_real_distribution<double>(0.3, 0.8)(rng);
    std::bernoulli_distribution coin(density);

    std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
    for (auto& row : rows)
        for (int i = 0; i < n; ++i)
            if (coin(rng)) row.push_back(i);

    RandomInstance inst{TransactionDatabase(n, rows), {}, {}, {}};
    const int item_groups = uniform(rng, 1, std::min(n, 4));
    const int trans_groups = uniform(rng, 1, std::min(m, 4));
    inst.schemes.items = random_partition(rng, n, item_groups, Axis::items, "I");
    inst.schemes.transactions = random_partition(rng, m, trans_groups, Axis::transactions, "T");

    static const Threshold thetas[] = {Threshold(1, 4), Threshold(1, 3), Threshold(1, 2)};
    const Threshold theta = thetas[uniform(rng, 0, 2)];

    switch (uniform(rng, 0, 4)) {
        case 0:
            inst.family = "fci";
            inst.query = templates::fci(theta);
            break;
        case 1: {
            inst.family = "fci-span";
            auto [lb, ub] = random_bounds(rng, item_groups);
            inst.query = templates::fci_span(theta, lb, ub);
            break;
        }
        case 2: {
            inst.family = "item-groups";
            auto [lb, ub] = random_bounds(rng, item_groups);
            inst.query = templates::item_groups(theta, lb, ub);
            break;
        }
        case 3: {
            inst.family = "transaction-groups";
            auto [lb, ub] = random_bounds(rng, trans_groups);
            inst.query = templates::transaction_groups(theta, lb, ub);
            break;
        }
        default: {
            inst.family = "item-and-transaction-groups";
            auto [lbi, ubi] = random_bounds(rng, item_groups);
            auto [lbt, ubt] = random_bounds(rng, trans_groups);
            inst.query = templates::item_and_transaction_groups(theta, lbi, ubi, lbt, ubt);
            break;
        }
    }
    if (uniform(rng, 0, 3) == 0) inst.query.min_size = uniform(rng, 1, std::min(n, 3));
    return inst;
}

}  // namespace itemcp
