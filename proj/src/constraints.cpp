#include "itemcp/constraints.hpp"

#include "itemcp/error.hpp"

#include <algorithm>

namespace itemcp {

namespace {

std::vector<VarId> block(VarId first, int count) {
    std::vector<VarId> out(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) out[static_cast<std::size_t>(k)] = first + k;
    return out;
}

struct Tally {
    int ones = 0;
    int zeros = 0;
    int frees = 0;
};

Tally tally(const Solver& s, const std::vector<VarId>& vars) {
    Tally t;
    for (VarId v : vars) {
        switch (s.value(v)) {
            case 1: ++t.ones; break;
            case 0: ++t.zeros; break;
            default: ++t.frees; break;
        }
    }
    return t;
}

bool assign_free(Solver& s, const std::vector<VarId>& vars, bool value) {
    for (VarId v : vars)
        if (s.is_free(v) && !s.assign(v, value)) return false;
    return true;
}

}  // namespace

ModelVars ModelVars::create(Solver& solver, int item_count, int transaction_count) {
    ModelVars mv;
    mv.n = item_count;
    mv.m = transaction_count;
    mv.x0 = solver.new_vars(Role::item, item_count);
    mv.y0 = solver.new_vars(Role::transaction, transaction_count);
    mv.h0 = solver.new_vars(Role::item_active, item_count);
    mv.v0 = solver.new_vars(Role::transaction_active, transaction_count);
    return mv;
}

std::vector<VarId> ModelVars::xs() const { return block(x0, n); }
std::vector<VarId> ModelVars::ys() const { return block(y0, m); }
std::vector<VarId> ModelVars::hs() const { return block(h0, n); }
std::vector<VarId> ModelVars::vs() const { return block(v0, m); }

// --- Channeling -------------------------------------------------------------

bool Channeling::propagate(Solver& s) {
    if (s.is_false(active_)) return s.assign(chosen_, false);
    if (s.is_true(chosen_)) return s.assign(active_, true);
    return true;
}

bool Channeling::satisfied(const Solver& s) const { return !(s.is_true(chosen_) && s.is_false(active_)); }

// --- AllEqual ---------------------------------------------------------------

bool AllEqual::propagate(Solver& s) {
    const auto t = tally(s, vars_);
    if (t.ones > 0 && t.zeros > 0) return false;
    if (t.frees == 0 || (t.ones == 0 && t.zeros == 0)) return true;
    return assign_free(s, vars_, t.ones > 0);
}

bool AllEqual::satisfied(const Solver& s) const {
    const auto t = tally(s, vars_);
    return t.ones == 0 || t.zeros == 0;
}

// --- BoolSum ----------------------------------------------------------------

bool BoolSum::propagate(Solver& s) {
    const auto t = tally(s, vars_);
    if (t.ones > ub_ || t.ones + t.frees < lb_) return false;
    if (t.frees == 0) return true;
    if (t.ones == ub_) return assign_free(s, vars_, false);
    if (t.ones + t.frees == lb_) return assign_free(s, vars_, true);
    return true;
}

bool BoolSum::satisfied(const Solver& s) const {
    const auto t = tally(s, vars_);
    return t.ones >= lb_ && t.ones <= ub_;
}

// --- OrChannel --------------------------------------------------------------

std::vector<VarId> OrChannel::watched() const {
    auto out = sources_;
    out.push_back(target_);
    return out;
}

bool OrChannel::propagate(Solver& s) {
    const auto t = tally(s, sources_);
    if (t.ones > 0) return s.assign(target_, true);
    if (t.frees == 0) return s.assign(target_, false);
    if (s.is_false(target_)) return assign_free(s, sources_, false);
    if (s.is_true(target_) && t.frees == 1) return assign_free(s, sources_, true);
    return true;
}

bool OrChannel::satisfied(const Solver& s) const {
    return s.is_true(target_) == (tally(s, sources_).ones > 0);
}

// --- CategorySpan -----------------------------------------------------------

std::vector<VarId> CategorySpan::watched() const {
    std::vector<VarId> out;
    for (const auto& g : groups_) out.insert(out.end(), g.begin(), g.end());
    return out;
}

int CategorySpan::span(const Solver& s) const {
    return static_cast<int>(std::count_if(groups_.begin(), groups_.end(),
                                          [&](const auto& g) { return tally(s, g).ones > 0; }));
}

bool CategorySpan::propagate(Solver& s) {
    int touched = 0;
    int possible = 0;
    std::vector<Tally> tallies;
    tallies.reserve(groups_.size());
    for (const auto& g : groups_) {
        tallies.push_back(tally(s, g));
        touched += tallies.back().ones > 0;
        possible += tallies.back().ones > 0 || tallies.back().frees > 0;
    }
    if (touched > ub_ || possible < lb_) return false;
    for (std::size_t k = 0; k < groups_.size(); ++k) {
        const auto& t = tallies[k];
        if (t.ones > 0 || t.frees == 0) continue;
        if (touched == ub_ && !assign_free(s, groups_[k], false)) return false;
        if (possible == lb_ && t.frees == 1 && !assign_free(s, groups_[k], true)) return false;
    }
    return true;
}

bool CategorySpan::satisfied(const Solver& s) const {
    const int k = span(s);
    return k >= lb_ && k <= ub_;
}

// --- Reified coverage -------------------------------------------------------

std::vector<VarId> ReifiedCoverage::watched() const {
    auto out = missing_;
    out.push_back(covered_);
    out.push_back(active_);
    return out;
}

bool ReifiedCoverage::propagate(Solver& s) {
    const auto t = tally(s, missing_);
    if (t.ones > 0 && !s.assign(covered_, false)) return false;
    if (s.is_false(active_) && !s.assign(covered_, false)) return false;
    if (s.is_true(covered_)) {
        if (!s.assign(active_, true)) return false;
        return assign_free(s, missing_, false);
    }
    if (t.ones == 0 && t.frees == 0) {
        if (s.is_true(active_)) return s.assign(covered_, true);
        if (s.is_false(covered_)) return s.assign(active_, false);
    }
    if (s.is_false(covered_) && s.is_true(active_) && t.ones == 0 && t.frees == 1)
        return assign_free(s, missing_, true);
    return true;
}

bool ReifiedCoverage::satisfied(const Solver& s) const {
    const bool expected = s.is_true(active_) && tally(s, missing_).ones == 0;
    return s.is_true(covered_) == expected;
}

// --- Reified frequency ------------------------------------------------------

std::vector<VarId> ReifiedFrequency::watched() const {
    auto out = column_cover_;
    out.insert(out.end(), active_.begin(), active_.end());
    out.push_back(chosen_);
    return out;
}

bool ReifiedFrequency::propagate(Solver& s) {
    if (s.is_false(chosen_)) return true;
    const auto cov = tally(s, column_cover_);
    const auto act = tally(s, active_);
    const auto support_ub = static_cast<std::uint64_t>(cov.ones + cov.frees);
    const auto active_lb = static_cast<std::uint64_t>(act.ones);
    if (!theta_.admits(support_ub, active_lb)) return s.assign(chosen_, false);
    return true;
}

bool ReifiedFrequency::satisfied(const Solver& s) const {
    if (!s.is_true(chosen_)) return true;
    return theta_.admits(static_cast<std::uint64_t>(tally(s, column_cover_).ones),
                         static_cast<std::uint64_t>(tally(s, active_).ones));
}

// --- Reified closedness -----------------------------------------------------

std::vector<VarId> ReifiedClosedness::watched() const {
    auto out = lacking_;
    out.push_back(chosen_);
    out.push_back(active_);
    return out;
}

bool ReifiedClosedness::propagate(Solver& s) {
    const auto t = tally(s, lacking_);
    if (t.ones > 0 && !s.assign(chosen_, false)) return false;
    if (s.is_false(active_) && !s.assign(chosen_, false)) return false;
    if (s.is_true(chosen_)) {
        if (!s.assign(active_, true)) return false;
        return assign_free(s, lacking_, false);
    }
    if (t.ones == 0 && t.frees == 0) {
        if (s.is_true(active_)) return s.assign(chosen_, true);
        if (s.is_false(chosen_)) return s.assign(active_, false);
    }
    if (s.is_false(chosen_) && s.is_true(active_) && t.ones == 0 && t.frees == 1)
        return assign_free(s, lacking_, true);
    return true;
}

bool ReifiedClosedness::satisfied(const Solver& s) const {
    const bool expected = s.is_true(active_) && tally(s, lacking_).ones == 0;
    return s.is_true(chosen_) == expected;
}

// --- Posting ----------------------------------------------------------------

void post_channeling(Solver& solver, const ModelVars& vars) {
    for (int i = 0; i < vars.n; ++i) solver.emplace<Channeling>(vars.H(i), vars.X(i));
    for (int j = 0; j < vars.m; ++j) solver.emplace<Channeling>(vars.V(j), vars.Y(j));
}

std::vector<VarId> post_group_activation(Solver& solver, const PartitionScheme& scheme,
                                         const std::vector<VarId>& members, int lb, int ub, std::size_t level) {
    const auto& groups = scheme.groups(level);
    const int k = static_cast<int>(groups.size());
    if (lb < 0 || lb > ub || ub > k)
        throw ConfigError("group bounds (" + std::to_string(lb) + "," + std::to_string(ub) +
                          ") invalid for " + std::to_string(k) + " groups");
    std::vector<VarId> indicators;
    indicators.reserve(groups.size());
    for (const auto& g : groups) {
        const VarId ind = solver.new_var(Role::auxiliary);
        std::vector<VarId> tied{ind};
        for (auto idx = g.members.find_first(); idx != Bitset::npos; idx = g.members.find_next(idx))
            tied.push_back(members.at(idx));
        solver.emplace<AllEqual>(std::move(tied));
        indicators.push_back(ind);
    }
    solver.emplace<BoolSum>(indicators, lb, ub);
    return indicators;
}

void post_category_span(Solver& solver, const ModelVars& vars, const PartitionScheme& scheme, int lb, int ub) {
    if (scheme.axis != Axis::items) throw ConfigError("category span needs an item partition");
    std::vector<std::vector<VarId>> groups;
    for (const auto& g : scheme.groups()) {
        std::vector<VarId> xs;
        for (auto i = g.members.find_first(); i != Bitset::npos; i = g.members.find_next(i))
            xs.push_back(vars.X(static_cast<int>(i)));
        groups.push_back(std::move(xs));
    }
    solver.emplace<CategorySpan>(std::move(groups), lb, ub);
}

void post_min_size(Solver& solver, const ModelVars& vars, int k) {
    if (k < 1 || k > vars.n)
        throw ConfigError("minimum size " + std::to_string(k) + " outside 1.." + std::to_string(vars.n));
    solver.emplace<BoolSum>(vars.xs(), k, vars.n);
}

void post_required_item(Solver& solver, const ModelVars& vars, int item) {
    if (item < 0 || item >= vars.n) throw ConfigError("required item out of range");
    solver.emplace<FixValue>(vars.X(item), true);
}

void post_forbidden_items(Solver& solver, const ModelVars& vars, const std::vector<int>& items) {
    for (int i : items) {
        if (i < 0 || i >= vars.n) throw ConfigError("forbidden item out of range");
        solver.emplace<FixValue>(vars.X(i), false);
    }
}

std::vector<VarId> post_exactly_one_group(Solver& solver, const ModelVars& vars, const PartitionScheme& scheme) {
    if (scheme.levels.empty()) throw ConfigError("exactly-one-group needs at least one level");
    if (scheme.axis != Axis::transactions) throw ConfigError("exactly-one-group needs a transaction partition");
    std::vector<VarId> indicators;
    std::vector<std::vector<VarId>> sources(static_cast<std::size_t>(vars.m));
    for (const auto& level : scheme.levels) {
        for (const auto& g : level.groups) {
            const VarId ind = solver.new_var(Role::auxiliary);
            indicators.push_back(ind);
            for (auto j = g.members.find_first(); j != Bitset::npos; j = g.members.find_next(j))
                sources[j].push_back(ind);
        }
    }
    solver.emplace<BoolSum>(indicators, 1, 1);
    for (int j = 0; j < vars.m; ++j)
        solver.emplace<OrChannel>(vars.V(j), std::move(sources[static_cast<std::size_t>(j)]));
    return indicators;
}

void post_non_empty(Solver& solver, const ModelVars& vars) {
    solver.emplace<BoolSum>(vars.xs(), 1, vars.n);
    solver.emplace<BoolSum>(vars.vs(), 1, vars.m);
}

void post_reified_fci(Solver& solver, const TransactionDatabase& db, const ModelVars& vars,
                      const Threshold& theta, bool closed) {
    const auto vs = vars.vs();
    for (int j = 0; j < vars.m; ++j) {
        std::vector<VarId> missing;
        for (int i = 0; i < vars.n; ++i)
            if (!db.contains(i, j)) missing.push_back(vars.X(i));
        solver.emplace<ReifiedCoverage>(vars.Y(j), vars.V(j), std::move(missing));
    }
    for (int i = 0; i < vars.n; ++i) {
        std::vector<VarId> in_column;
        std::vector<VarId> lacking;
        for (int j = 0; j < vars.m; ++j) (db.contains(i, j) ? in_column : lacking).push_back(vars.Y(j));
        solver.emplace<ReifiedFrequency>(vars.X(i), std::move(in_column), vs, theta);
        if (closed) solver.emplace<ReifiedClosedness>(vars.X(i), vars.H(i), std::move(lacking));
    }
    post_non_empty(solver, vars);
}

}  // namespace itemcp
