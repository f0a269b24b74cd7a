#pragma once

#include <array>
#include <atomic>
#include <chrono>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace itemcp {

using VarId = int;

/// X item, Y transaction (cover), H active item, V active transaction.
enum class Role : std::uint8_t { item, transaction, item_active, transaction_active, auxiliary };

class Solver;

/// A filtering procedure for one constraint. Filtering must be sound: it may
/// only remove values that take part in no solution of its own constraint.
class Propagator {
public:
    virtual ~Propagator() = default;

    virtual std::vector<VarId> watched() const = 0;
    /// Assigns implied variables through Solver::assign; false on failure.
    virtual bool propagate(Solver& solver) = 0;
    /// Constraint check on a full assignment of the watched variables.
    virtual bool satisfied(const Solver& solver) const = 0;
    virtual std::string name() const = 0;
};

/// Variable order for search; the value 1 is tried before 0 by default.
struct Branching {
    std::vector<VarId> order;
    bool one_first = true;

    /// Group auxiliaries, H, V, X, then Y.
    static Branching dataset_first(const Solver& solver);
};

struct SearchStats {
    std::uint64_t nodes = 0;
    std::uint64_t failures = 0;
    std::uint64_t solutions = 0;
    /// Search nodes at which every H and V variable became assigned.
    std::uint64_t masks = 0;
};

struct SearchLimits {
    std::optional<std::chrono::steady_clock::time_point> deadline;
    const std::atomic<bool>* stop = nullptr;
    /// Re-check every propagator on each solution; throws std::logic_error on a miss.
    bool verify_solutions = false;
};

enum class SearchStatus { complete, timeout };

struct SearchResult {
    SearchStatus status = SearchStatus::complete;
    SearchStats stats;
};

using SolutionSink = std::function<void(const Solver&)>;
using Decisions = std::vector<std::pair<VarId, bool>>;

/// Boolean constraint solver: tri-state store, trail, propagation queue and
/// exhaustive depth-first search.
class Solver {
public:
    static constexpr std::int8_t unassigned = -1;

    Solver() = default;
    Solver(const Solver&) = delete;
    Solver& operator=(const Solver&) = delete;
    Solver(Solver&&) = default;
    Solver& operator=(Solver&&) = default;

    VarId new_var(Role role);
    /// Returns the first id of `count` consecutive fresh variables.
    VarId new_vars(Role role, int count);

    int var_count() const { return static_cast<int>(values_.size()); }
    Role role(VarId v) const { return roles_[static_cast<std::size_t>(v)]; }
    std::int8_t value(VarId v) const { return values_[static_cast<std::size_t>(v)]; }
    bool is_assigned(VarId v) const { return value(v) != unassigned; }
    bool is_true(VarId v) const { return value(v) == 1; }
    bool is_false(VarId v) const { return value(v) == 0; }
    bool is_free(VarId v) const { return value(v) == unassigned; }
    bool all_assigned(Role role) const;

    /// Records the assignment and schedules watchers. Assigning the value a
    /// variable already holds is a no-op; the opposite value fails.
    bool assign(VarId v, bool value);

    /// Registers a propagator and runs it to fixpoint at the current level.
    /// Throws UnknownVariable for a watched id outside the store.
    int post(std::unique_ptr<Propagator> propagator);
    template <class P, class... Args>
    int emplace(Args&&... args) {
        return post(std::make_unique<P>(std::forward<Args>(args)...));
    }

    /// False iff a propagator detected a contradiction.
    bool propagate();
    /// True once a root-level post or propagation failed.
    bool failed() const { return root_failed_; }

    int decision_level() const { return static_cast<int>(level_marks_.size()); }
    void push_level();
    void pop_level();
    std::size_t snapshot_hash() const;

    const std::vector<std::unique_ptr<Propagator>>& propagators() const { return propagators_; }
    bool check_all() const;

    SearchResult search_all(const Branching& branching, const SolutionSink& sink,
                            const SearchLimits& limits = {});

    /// Applies decisions at the root; false if they are inconsistent.
    bool apply(const Decisions& decisions);

    /// Splits the top of the search tree on mask variables (auxiliary, H, V)
    /// into at least `target` consistent disjoint prefixes when possible.
    std::vector<Decisions> split(const Branching& branching, std::size_t target);

private:
    struct StopSearch {};

    void dfs(const Branching& branching, std::size_t cursor, bool mask_seen, const SolutionSink& sink,
             const SearchLimits& limits, SearchStats& stats);
    std::optional<std::size_t> next_free(const Branching& branching, std::size_t cursor) const;
    void clear_queue();
    bool mask_complete() const;

    std::vector<std::int8_t> values_;
    std::vector<Role> roles_;
    std::array<int, 5> free_by_role_{};
    std::vector<std::vector<int>> watchers_;
    std::vector<std::unique_ptr<Propagator>> propagators_;
    std::deque<int> queue_;
    std::vector<char> queued_;
    std::vector<VarId> trail_;
    std::vector<std::size_t> level_marks_;
    bool root_failed_ = false;
};

}  // namespace itemcp
