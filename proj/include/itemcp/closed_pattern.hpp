#pragma once

#include "itemcp/constraints.hpp"

namespace itemcp {

/// Global frequent (closed) itemset constraint over the sub-dataset that H
/// and V circumscribe. Accepts exactly the assignments the reified family of
/// post_reified_fci accepts.
///
/// Filtering, with cov = cover of the chosen items over transactions whose V
/// is not 0 and whose Y is not 0, and active = transactions with V = 1:
///   - fail if |cov| < theta * |active|
///   - free X_i := 0 if |cov & column(i)| < theta * |active|
///   - free active X_i := 1 if cov is inside column(i)
///   - free X_i := 0 if cov & column(i) is inside column(e) for an excluded
///     active item e; fail if cov itself is inside such a column
///   - Y follows the cover of the chosen items
/// |active| only grows and cov only shrinks as H and V get assigned, so every
/// rule stays sound while the mask is partial.
class CoverPattern final : public Propagator {
public:
    CoverPattern(const TransactionDatabase& db, const ModelVars& vars, Threshold theta, bool closed);

    std::vector<VarId> watched() const override;
    bool propagate(Solver& s) override;
    bool satisfied(const Solver& s) const override;
    std::string name() const override { return closed_ ? "closed_pattern_sub" : "frequent_sub"; }

private:
    const TransactionDatabase& db_;
    ModelVars vars_;
    Threshold theta_;
    bool closed_;
};

/// ClosedPattern over (X, H, Y, V) plus non-emptiness.
void post_closed_pattern_sub(Solver& solver, const TransactionDatabase& db, const ModelVars& vars,
                             const Threshold& theta);

/// Frequent itemsets over (X, H, Y, V) plus non-emptiness.
void post_frequent_sub(Solver& solver, const TransactionDatabase& db, const ModelVars& vars,
                       const Threshold& theta);

}  // namespace itemcp
