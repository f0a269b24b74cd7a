#include "itemcp/engine.hpp"

#include "itemcp/error.hpp"

#include <stdexcept>

namespace itemcp {

namespace {

constexpr std::size_t role_index(Role r) { return static_cast<std::size_t>(r); }

bool is_mask_role(Role r) {
    return r == Role::auxiliary || r == Role::item_active || r == Role::transaction_active;
}

}  // namespace

Branching Branching::dataset_first(const Solver& solver) {
    Branching b;
    for (Role r : {Role::auxiliary, Role::item_active, Role::transaction_active, Role::item, Role::transaction})
        for (VarId v = 0; v < solver.var_count(); ++v)
            if (solver.role(v) == r) b.order.push_back(v);
    return b;
}

VarId Solver::new_var(Role role) {
    values_.push_back(unassigned);
    roles_.push_back(role);
    watchers_.emplace_back();
    ++free_by_role_[role_index(role)];
    return static_cast<VarId>(values_.size() - 1);
}

VarId Solver::new_vars(Role role, int count) {
    const VarId first = var_count();
    for (int k = 0; k < count; ++k) new_var(role);
    return first;
}

bool Solver::all_assigned(Role role) const { return free_by_role_[role_index(role)] == 0; }

bool Solver::mask_complete() const {
    return all_assigned(Role::item_active) && all_assigned(Role::transaction_active);
}

bool Solver::assign(VarId v, bool value) {
    auto& slot = values_[static_cast<std::size_t>(v)];
    const std::int8_t target = value ? 1 : 0;
    if (slot != unassigned) return slot == target;
    slot = target;
    --free_by_role_[role_index(role(v))];
    trail_.push_back(v);
    for (int p : watchers_[static_cast<std::size_t>(v)]) {
        if (!queued_[static_cast<std::size_t>(p)]) {
            queued_[static_cast<std::size_t>(p)] = 1;
            queue_.push_back(p);
        }
    }
    return true;
}

int Solver::post(std::unique_ptr<Propagator> propagator) {
    const auto vars = propagator->watched();
    for (VarId v : vars)
        if (v < 0 || v >= var_count()) throw UnknownVariable(v);
    const int handle = static_cast<int>(propagators_.size());
    for (VarId v : vars) {
        auto& w = watchers_[static_cast<std::size_t>(v)];
        if (w.empty() || w.back() != handle) w.push_back(handle);
    }
    propagators_.push_back(std::move(propagator));
    queued_.push_back(1);
    queue_.push_back(handle);
    if (!propagate() && decision_level() == 0) root_failed_ = true;
    return handle;
}

void Solver::clear_queue() {
    for (int p : queue_) queued_[static_cast<std::size_t>(p)] = 0;
    queue_.clear();
}

bool Solver::propagate() {
    if (root_failed_) {
        clear_queue();
        return false;
    }
    while (!queue_.empty()) {
        const int p = queue_.front();
        queue_.pop_front();
        queued_[static_cast<std::size_t>(p)] = 0;
        if (!propagators_[static_cast<std::size_t>(p)]->propagate(*this)) {
            clear_queue();
            if (decision_level() == 0) root_failed_ = true;
            return false;
        }
    }
    return true;
}

void Solver::push_level() { level_marks_.push_back(trail_.size()); }

void Solver::pop_level() {
    const std::size_t mark = level_marks_.back();
    level_marks_.pop_back();
    while (trail_.size() > mark) {
        const VarId v = trail_.back();
        trail_.pop_back();
        values_[static_cast<std::size_t>(v)] = unassigned;
        ++free_by_role_[role_index(role(v))];
    }
    clear_queue();
}

std::size_t Solver::snapshot_hash() const {
    std::size_t h = 1469598103934665603ull;
    for (auto v : values_) {
        h ^= static_cast<std::size_t>(static_cast<std::uint8_t>(v));
        h *= 1099511628211ull;
    }
    return h;
}

bool Solver::check_all() const {
    for (const auto& p : propagators_)
        if (!p->satisfied(*this)) return false;
    return true;
}

bool Solver::apply(const Decisions& decisions) {
    for (auto [v, value] : decisions)
        if (!assign(v, value) || !propagate()) return false;
    return true;
}

std::optional<std::size_t> Solver::next_free(const Branching& branching, std::size_t cursor) const {
    for (std::size_t k = cursor; k < branching.order.size(); ++k)
        if (is_free(branching.order[k])) return k;
    return std::nullopt;
}

SearchResult Solver::search_all(const Branching& branching, const SolutionSink& sink, const SearchLimits& limits) {
    SearchResult result;
    if (root_failed_ || !propagate()) return result;
    push_level();
    try {
        dfs(branching, 0, false, sink, limits, result.stats);
    } catch (const StopSearch&) {
        result.status = SearchStatus::timeout;
    }
    while (decision_level() > 0) pop_level();
    return result;
}

void Solver::dfs(const Branching& branching, std::size_t cursor, bool mask_seen, const SolutionSink& sink,
                 const SearchLimits& limits, SearchStats& stats) {
    ++stats.nodes;
    if ((stats.nodes & 0x3ff) == 1) {
        if (limits.stop && limits.stop->load(std::memory_order_relaxed)) throw StopSearch{};
        if (limits.deadline && std::chrono::steady_clock::now() > *limits.deadline) throw StopSearch{};
    }
    if (!mask_seen && mask_complete()) {
        ++stats.masks;
        mask_seen = true;
    }

    const auto next = next_free(branching, cursor);
    if (!next) {
        for (VarId v = 0; v < var_count(); ++v)
            if (is_free(v)) throw std::logic_error("branching order misses variable " + std::to_string(v));
        if (limits.verify_solutions && !check_all())
            throw std::logic_error("search reached an assignment rejected by a propagator");
        ++stats.solutions;
        sink(*this);
        return;
    }

    const VarId var = branching.order[*next];
    for (bool value : {branching.one_first, !branching.one_first}) {
        push_level();
        if (assign(var, value) && propagate())
            dfs(branching, *next + 1, mask_seen, sink, limits, stats);
        else
            ++stats.failures;
        pop_level();
    }
}

std::vector<Decisions> Solver::split(const Branching& branching, std::size_t target) {
    std::vector<Decisions> frontier{{}};
    if (root_failed_ || !propagate()) return {};
    bool expanded = true;
    while (frontier.size() < target && expanded) {
        expanded = false;
        std::vector<Decisions> next_frontier;
        for (const auto& prefix : frontier) {
            push_level();
            std::optional<VarId> var;
            if (apply(prefix))
                if (auto k = next_free(branching, 0); k && is_mask_role(role(branching.order[*k])))
                    var = branching.order[*k];
            if (!var) {
                next_frontier.push_back(prefix);
                pop_level();
                continue;
            }
            for (bool value : {branching.one_first, !branching.one_first}) {
                push_level();
                if (assign(*var, value) && propagate()) {
                    auto child = prefix;
                    child.emplace_back(*var, value);
                    next_frontier.push_back(std::move(child));
                }
                pop_level();
            }
            expanded = true;
            pop_level();
        }
        frontier = std::move(next_frontier);
    }
    return frontier;
}

}  // namespace itemcp
