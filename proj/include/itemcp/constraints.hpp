#pragma once

#include "itemcp/dataset.hpp"
#include "itemcp/engine.hpp"
#include "itemcp/threshold.hpp"

#include <vector>

namespace itemcp {

/// Variable layout of the itemset model: X and H over items, Y and V over
/// transactions, each block contiguous.
struct ModelVars {
    int n = 0;
    int m = 0;
    VarId x0 = 0, y0 = 0, h0 = 0, v0 = 0;

    static ModelVars create(Solver& solver, int item_count, int transaction_count);

    VarId X(int i) const { return x0 + i; }
    VarId Y(int j) const { return y0 + j; }
    VarId H(int i) const { return h0 + i; }
    VarId V(int j) const { return v0 + j; }

    std::vector<VarId> xs() const;
    std::vector<VarId> ys() const;
    std::vector<VarId> hs() const;
    std::vector<VarId> vs() const;
};

// ---------------------------------------------------------------------------
// Propagators

/// active = 0 => chosen = 0, and chosen = 1 => active = 1.
class Channeling final : public Propagator {
public:
    Channeling(VarId active, VarId chosen) : active_(active), chosen_(chosen) {}
    std::vector<VarId> watched() const override { return {active_, chosen_}; }
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "channeling"; }

private:
    VarId active_, chosen_;
};

/// All variables take the same value.
class AllEqual final : public Propagator {
public:
    explicit AllEqual(std::vector<VarId> vars) : vars_(std::move(vars)) {}
    std::vector<VarId> watched() const override { return vars_; }
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "all_equal"; }

private:
    std::vector<VarId> vars_;
};

/// lb <= sum(vars) <= ub
class BoolSum final : public Propagator {
public:
    BoolSum(std::vector<VarId> vars, int lb, int ub) : vars_(std::move(vars)), lb_(lb), ub_(ub) {}
    std::vector<VarId> watched() const override { return vars_; }
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "bool_sum"; }

private:
    std::vector<VarId> vars_;
    int lb_, ub_;
};

/// target = 1 <=> some source = 1
class OrChannel final : public Propagator {
public:
    OrChannel(VarId target, std::vector<VarId> sources) : target_(target), sources_(std::move(sources)) {}
    std::vector<VarId> watched() const override;
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "or_channel"; }

private:
    VarId target_;
    std::vector<VarId> sources_;
};

/// var = value
class FixValue final : public Propagator {
public:
    FixValue(VarId var, bool value) : var_(var), value_(value) {}
    std::vector<VarId> watched() const override { return {var_}; }
    bool propagate(Solver& s) override { return s.assign(var_, value_); }
    bool satisfied(const Solver& s) const override { return s.value(var_) == (value_ ? 1 : 0); }
    std::string name() const override { return "fix"; }

private:
    VarId var_;
    bool value_;
};

/// lb <= number of groups holding at least one variable at 1 <= ub
class CategorySpan final : public Propagator {
public:
    CategorySpan(std::vector<std::vector<VarId>> groups, int lb, int ub)
        : groups_(std::move(groups)), lb_(lb), ub_(ub) {}
    std::vector<VarId> watched() const override;
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "category_span"; }

    /// Groups intersecting the current positive assignment.
    int span(const Solver& s) const;

private:
    std::vector<std::vector<VarId>> groups_;
    int lb_, ub_;
};

/// Y_j = 1 <=> V_j = 1 and no chosen item is missing from transaction j.
class ReifiedCoverage final : public Propagator {
public:
    ReifiedCoverage(VarId covered, VarId active, std::vector<VarId> missing_items)
        : covered_(covered), active_(active), missing_(std::move(missing_items)) {}
    std::vector<VarId> watched() const override;
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "reified_coverage"; }

private:
    VarId covered_, active_;
    std::vector<VarId> missing_;
};

/// X_i = 1 => |{j in column(i) : Y_j = 1}| >= theta * sum(V)
class ReifiedFrequency final : public Propagator {
public:
    ReifiedFrequency(VarId chosen, std::vector<VarId> column_cover, std::vector<VarId> active, Threshold theta)
        : chosen_(chosen), column_cover_(std::move(column_cover)), active_(std::move(active)), theta_(theta) {}
    std::vector<VarId> watched() const override;
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "reified_frequency"; }

private:
    VarId chosen_;
    std::vector<VarId> column_cover_;
    std::vector<VarId> active_;
    Threshold theta_;
};

/// X_i = 1 <=> H_i = 1 and no covered transaction lacks item i.
class ReifiedClosedness final : public Propagator {
public:
    ReifiedClosedness(VarId chosen, VarId active, std::vector<VarId> lacking_cover)
        : chosen_(chosen), active_(active), lacking_(std::move(lacking_cover)) {}
    std::vector<VarId> watched() const override;
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return "reified_closedness"; }

private:
    VarId chosen_, active_;
    std::vector<VarId> lacking_;
};

// ---------------------------------------------------------------------------
// Model building blocks

/// H_i = 0 => X_i = 0 and V_j = 0 => Y_j = 0, with contrapositives.
void post_channeling(Solver& solver, const ModelVars& vars);

/// Ties every group of one level all-or-none to a fresh auxiliary indicator
/// and bounds the number of active groups to [lb, ub]. `members` maps an
/// axis index to its activation variable. Returns the indicators.
std::vector<VarId> post_group_activation(Solver& solver, const PartitionScheme& scheme,
                                         const std::vector<VarId>& members, int lb, int ub,
                                         std::size_t level = 0);

/// The itemset touches between lb and ub item groups.
void post_category_span(Solver& solver, const ModelVars& vars, const PartitionScheme& scheme, int lb, int ub);

void post_min_size(Solver& solver, const ModelVars& vars, int k);
void post_required_item(Solver& solver, const ModelVars& vars, int item);
void post_forbidden_items(Solver& solver, const ModelVars& vars, const std::vector<int>& items);

/// Exactly one group over all levels is selected and its transactions form
/// the active set. Returns the indicators, level by level.
std::vector<VarId> post_exactly_one_group(Solver& solver, const ModelVars& vars, const PartitionScheme& scheme);

/// Non-empty itemset over a sub-dataset with at least one active transaction.
void post_non_empty(Solver& solver, const ModelVars& vars);

/// Coverage, per-item frequency and (when `closed`) per-item closedness, each
/// restricted to the active items and transactions. Also posts non-emptiness.
void post_reified_fci(Solver& solver, const TransactionDatabase& db, const ModelVars& vars,
                      const Threshold& theta, bool closed = true);

}  // namespace itemcp
