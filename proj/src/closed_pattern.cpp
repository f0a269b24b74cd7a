#include "itemcp/closed_pattern.hpp"

namespace itemcp {

CoverPattern::CoverPattern(const TransactionDatabase& db, const ModelVars& vars, Threshold theta, bool closed)
    : db_(db), vars_(vars), theta_(theta), closed_(closed) {}

std::vector<VarId> CoverPattern::watched() const {
    std::vector<VarId> out;
    for (auto block : {vars_.xs(), vars_.ys(), vars_.hs(), vars_.vs()}) out.insert(out.end(), block.begin(), block.end());
    return out;
}

bool CoverPattern::propagate(Solver& s) {
    const int n = vars_.n;
    const int m = vars_.m;
    const auto n_bits = static_cast<std::size_t>(n);
    const auto m_bits = static_cast<std::size_t>(m);

    Bitset possible(m_bits);  // V != 0
    std::uint64_t active = 0;   // V = 1
    for (int j = 0; j < m; ++j) {
        if (!s.is_false(vars_.V(j))) possible.set(static_cast<std::size_t>(j));
        active += s.is_true(vars_.V(j));
    }

    Bitset chosen(n_bits);   // X = 1
    Bitset nonzero(n_bits);  // X != 0
    Bitset cov = possible;
    for (int i = 0; i < n; ++i) {
        if (s.is_true(vars_.X(i))) {
            chosen.set(static_cast<std::size_t>(i));
            cov &= db_.column(i);
        }
        if (!s.is_false(vars_.X(i))) nonzero.set(static_cast<std::size_t>(i));
    }

    // Cover variables.
    for (int j = 0; j < m; ++j) {
        const VarId y = vars_.Y(j);
        const bool in_cov = cov.test(static_cast<std::size_t>(j));
        const bool all_missing_excluded = nonzero.is_subset_of(db_.row(j));
        if (s.is_true(y)) {
            if (!in_cov || !s.assign(vars_.V(j), true)) return false;
            for (int i = 0; i < n; ++i)
                if (!db_.contains(i, j) && s.is_free(vars_.X(i)) && !s.assign(vars_.X(i), false)) return false;
        } else if (s.is_free(y)) {
            if (!in_cov) {
                if (!s.assign(y, false)) return false;
            } else if (all_missing_excluded && s.is_true(vars_.V(j))) {
                if (!s.assign(y, true)) return false;
            }
        } else if (in_cov) {
            // Y_j = 0 although j may still be covered: a missing item must join.
            if (all_missing_excluded) {
                if (!s.assign(vars_.V(j), false)) return false;
            } else if (s.is_true(vars_.V(j))) {
                Bitset candidates = nonzero - db_.row(j);
                if (candidates.count() == 1) {
                    if (!s.assign(vars_.X(static_cast<int>(candidates.find_first())), true)) return false;
                }
            }
        }
    }

    Bitset ycov = cov;
    for (int j = 0; j < m; ++j)
        if (s.is_false(vars_.Y(j))) ycov.reset(static_cast<std::size_t>(j));

    if (!theta_.admits(ycov.count(), active)) return false;

    std::vector<int> excluded;  // X = 0, H = 1
    if (closed_) {
        for (int e = 0; e < n; ++e) {
            if (!s.is_false(vars_.X(e))) continue;
            const bool absorbs = ycov.is_subset_of(db_.column(e));
            if (s.is_true(vars_.H(e))) {
                if (absorbs) return false;
                excluded.push_back(e);
                Bitset lacking = ycov - db_.column(e);
                if (lacking.count() == 1) {
                    const int j = static_cast<int>(lacking.find_first());
                    if (!s.assign(vars_.Y(j), true)) return false;
                }
            } else if (s.is_free(vars_.H(e)) && absorbs) {
                if (!s.assign(vars_.H(e), false)) return false;
            }
        }
    }

    for (int i = 0; i < n; ++i) {
        const VarId x = vars_.X(i);
        if (!s.is_free(x)) continue;
        Bitset extended = ycov;
        extended &= db_.column(i);
        if (!theta_.admits(extended.count(), active)) {
            if (!s.assign(x, false)) return false;
            continue;
        }
        if (!closed_) continue;
        if (s.is_true(vars_.H(i)) && extended.count() == ycov.count()) {
            if (!s.assign(x, true)) return false;
            continue;
        }
        for (int e : excluded) {
            if (extended.is_subset_of(db_.column(e))) {
                if (!s.assign(x, false)) return false;
                break;
            }
        }
    }
    return true;
}

bool CoverPattern::satisfied(const Solver& s) const {
    SubDatasetMask mask{Bitset(static_cast<std::size_t>(vars_.n)), Bitset(static_cast<std::size_t>(vars_.m))};
    Bitset itemset(static_cast<std::size_t>(vars_.n));
    for (int i = 0; i < vars_.n; ++i) {
        if (s.is_true(vars_.H(i))) mask.items.set(static_cast<std::size_t>(i));
        if (s.is_true(vars_.X(i))) itemset.set(static_cast<std::size_t>(i));
    }
    for (int j = 0; j < vars_.m; ++j)
        if (s.is_true(vars_.V(j))) mask.transactions.set(static_cast<std::size_t>(j));
    if (!itemset.is_subset_of(mask.items)) return false;

    const Bitset covered = cover(db_, itemset, mask);
    for (int j = 0; j < vars_.m; ++j)
        if (s.is_true(vars_.Y(j)) != covered.test(static_cast<std::size_t>(j))) return false;
    if (!theta_.admits(covered.count(), mask.transactions.count())) return false;
    if (!closed_) return true;
    if (covered.none()) return itemset == mask.items;
    return closure(db_, itemset, mask) == itemset;
}

void post_closed_pattern_sub(Solver& solver, const TransactionDatabase& db, const ModelVars& vars,
                             const Threshold& theta) {
    solver.emplace<CoverPattern>(db, vars, theta, true);
    post_non_empty(solver, vars);
}

void post_frequent_sub(Solver& solver, const TransactionDatabase& db, const ModelVars& vars,
                       const Threshold& theta) {
    solver.emplace<CoverPattern>(db, vars, theta, false);
    post_non_empty(solver, vars);
}

}  // namespace itemcp
