#pragma once

#include "itemcp/query.hpp"

#include <random>
#include <string>

namespace itemcp {

/// A small random database with item and transaction partitions and a query
/// from one of the families fci, fci-span, item-groups, transaction-groups,
/// item-and-transaction-groups.
struct RandomInstance {
    TransactionDatabase db;
    Schemes schemes;
    Query query;
    std::string family;
};

struct RandomInstanceLimits {
    int max_items = 10;
    int max_transactions = 8;
};

RandomInstance random_instance(std::mt19937_64& rng, const RandomInstanceLimits& limits = {});

/// Random partition of `size` indices into `groups` non-empty groups named prefix1..prefixK.
PartitionScheme random_partition(std::mt19937_64& rng, int size, int groups, Axis axis, const std::string& prefix);

}  // namespace itemcp
