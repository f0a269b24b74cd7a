#pragma once

#include "itemcp/closed_pattern.hpp"
#include "itemcp/constraints.hpp"
#include "itemcp/query.hpp"
#include "itemcp/reference.hpp"

#include <chrono>
#include <optional>
#include <vector>

namespace itemcp {

/// A solver holding the DataSet, Channeling and Mining parts of one query.
struct AssembledModel {
    Solver solver;
    ModelVars vars;
    std::vector<VarId> item_indicators;
    std::vector<VarId> transaction_indicators;

    /// Reads the current full assignment as a solution pair.
    SolutionPair extract() const;
};

AssembledModel assemble(const Query& query, const TransactionDatabase& db, const Schemes& schemes);

struct RunOptions {
    int parallel = 1;
    bool materialize = false;
    bool verify_solutions = false;
    std::optional<std::chrono::steady_clock::time_point> deadline;
};

enum class RunStatus { ok, timeout };

struct TheoryResult {
    std::vector<SolutionPair> pairs;
    RunStatus status = RunStatus::ok;
    /// Masks reached by cp search, or masks enumerated by baseline/oracle.
    std::uint64_t masks = 0;
    std::uint64_t nodes = 0;
};

/// The complete theory of the query, canonically sorted, from the engine the
/// query names. Throws NotSupported / SizeGuard / ConfigError.
TheoryResult run_theory(const Query& query, const TransactionDatabase& db, const Schemes& schemes,
                        const RunOptions& options = {});

/// Re-validates every pair against the query using only dataset primitives;
/// returns a description of the first violation.
std::optional<std::string> self_check(const std::vector<SolutionPair>& pairs, const Query& query,
                                      const TransactionDatabase& db, const Schemes& schemes);

}  // namespace itemcp
