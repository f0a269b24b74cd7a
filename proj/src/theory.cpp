#include "itemcp/theory.hpp"

#include "itemcp/error.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace itemcp {

namespace {

void post_axis(Solver& solver, const AxisSelection& sel, const std::optional<PartitionScheme>& scheme,
               const std::vector<VarId>& vars, const ModelVars& model, std::vector<VarId>& indicators) {
    using Mode = AxisSelection::Mode;
    switch (sel.mode) {
        case Mode::all:
            for (VarId v : vars) solver.emplace<FixValue>(v, true);
            break;
        case Mode::list: {
            std::vector<char> on(vars.size(), 0);
            for (int k : sel.members) on[static_cast<std::size_t>(k)] = 1;
            for (std::size_t k = 0; k < vars.size(); ++k) solver.emplace<FixValue>(vars[k], on[k] != 0);
            break;
        }
        case Mode::bounds: indicators = post_group_activation(solver, *scheme, vars, sel.lb, sel.ub); break;
        case Mode::one_of_levels: indicators = post_exactly_one_group(solver, model, *scheme); break;
    }
}

std::vector<int> selected(const Solver& s, const std::vector<VarId>& indicators) {
    std::vector<int> out;
    for (std::size_t k = 0; k < indicators.size(); ++k)
        if (s.is_true(indicators[k])) out.push_back(static_cast<int>(k));
    return out;
}

}  // namespace

SolutionPair AssembledModel::extract() const {
    SolutionPair p;
    const auto n = static_cast<std::size_t>(vars.n);
    const auto m = static_cast<std::size_t>(vars.m);
    p.mask = {Bitset(n), Bitset(m)};
    p.itemset = Bitset(n);
    for (int i = 0; i < vars.n; ++i) {
        if (solver.is_true(vars.H(i))) p.mask.items.set(static_cast<std::size_t>(i));
        if (solver.is_true(vars.X(i))) p.itemset.set(static_cast<std::size_t>(i));
    }
    for (int j = 0; j < vars.m; ++j) {
        if (solver.is_true(vars.V(j))) {
            p.mask.transactions.set(static_cast<std::size_t>(j));
            ++p.active;
        }
        p.support += solver.is_true(vars.Y(j));
    }
    p.choice = {selected(solver, item_indicators), selected(solver, transaction_indicators)};
    return p;
}

AssembledModel assemble(const Query& query, const TransactionDatabase& db, const Schemes& schemes) {
    validate_query(query, db, schemes);
    AssembledModel model;
    Solver& s = model.solver;
    model.vars = ModelVars::create(s, db.item_count(), db.transaction_count());
    const ModelVars& v = model.vars;

    post_axis(s, query.items, schemes.items, v.hs(), v, model.item_indicators);
    post_axis(s, query.transactions, schemes.transactions, v.vs(), v, model.transaction_indicators);
    post_channeling(s, v);

    if (query.model == MiningModel::reified)
        post_reified_fci(s, db, v, query.theta, query.closed);
    else if (query.closed)
        post_closed_pattern_sub(s, db, v, query.theta);
    else
        post_frequent_sub(s, db, v, query.theta);

    if (query.min_size > 1) post_min_size(s, v, query.min_size);
    if (query.span) post_category_span(s, v, *schemes.items, query.span->first, query.span->second);
    for (int i : query.required) post_required_item(s, v, i);
    if (!query.forbidden.empty()) post_forbidden_items(s, v, query.forbidden);
    return model;
}

namespace {

TheoryResult run_cp(const Query& query, const TransactionDatabase& db, const Schemes& schemes,
                    const RunOptions& options) {
    TheoryResult result;
    SearchLimits limits;
    limits.deadline = options.deadline;
    limits.verify_solutions = options.verify_solutions;

    auto model = assemble(query, db, schemes);
    const auto branching = Branching::dataset_first(model.solver);

    if (options.parallel <= 1) {
        auto r = model.solver.search_all(branching, [&](const Solver&) { result.pairs.push_back(model.extract()); },
                                         limits);
        result.status = r.status == SearchStatus::timeout ? RunStatus::timeout : RunStatus::ok;
        result.masks = r.stats.masks;
        result.nodes = r.stats.nodes;
        canonical_sort(result.pairs);
        return result;
    }

    // Disjoint prefixes over mask decisions, each searched by its own solver.
    const auto prefixes = model.solver.split(branching, static_cast<std::size_t>(options.parallel) * 4);
    std::atomic<std::size_t> next{0};
    std::mutex mutex;
    std::exception_ptr failure;
    std::atomic<bool> stop{false};
    limits.stop = &stop;

    auto worker = [&] {
        try {
            for (std::size_t k = next++; k < prefixes.size(); k = next++) {
                auto local = assemble(query, db, schemes);
                std::vector<SolutionPair> found;
                SearchResult r;
                if (local.solver.apply(prefixes[k]))
                    r = local.solver.search_all(branching,
                                                [&](const Solver&) { found.push_back(local.extract()); }, limits);
                std::lock_guard lock(mutex);
                result.masks += r.stats.masks;
                result.nodes += r.stats.nodes;
                if (r.status == SearchStatus::timeout) result.status = RunStatus::timeout;
                for (auto& p : found) result.pairs.push_back(std::move(p));
            }
        } catch (...) {
            stop = true;
            std::lock_guard lock(mutex);
            if (!failure) failure = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    for (int t = 0; t < options.parallel; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    canonical_sort(result.pairs);
    return result;
}

}  // namespace

TheoryResult run_theory(const Query& query, const TransactionDatabase& db, const Schemes& schemes,
                        const RunOptions& options) {
    if (query.engine == EngineKind::cp) return run_cp(query, db, schemes, options);

    ReferenceOptions ref;
    ref.parallel = options.parallel;
    ref.materialize = options.materialize;
    ref.deadline = options.deadline;
    ReferenceStats stats;
    TheoryResult result;
    try {
        result.pairs = query.engine == EngineKind::baseline ? pp_mine(query, db, schemes, ref, &stats)
                                                            : brute_force_theory(query, db, schemes, ref, &stats);
    } catch (const Timeout&) {
        result.status = RunStatus::timeout;
    }
    result.masks = stats.masks;
    return result;
}

std::optional<std::string> self_check(const std::vector<SolutionPair>& pairs, const Query& query,
                                      const TransactionDatabase& db, const Schemes& schemes) {
    for (const auto& p : pairs) {
        const std::string where = format_pair(p, query, db, schemes);
        if (p.itemset.none()) return "empty itemset: " + where;
        if (!p.itemset.is_subset_of(p.mask.items)) return "itemset outside active items: " + where;
        if (p.mask.transactions.none()) return "no active transaction: " + where;
        const Frequency f = frequency(db, p.itemset, p.mask);
        if (f.support != p.support || f.active != p.active) return "support mismatch: " + where;
        if (!f.meets(query.theta)) return "infrequent: " + where;
        if (query.closed && closure(db, p.itemset, p.mask) != p.itemset) return "not closed: " + where;
        if (static_cast<int>(p.itemset.count()) < query.min_size) return "below minsize: " + where;
        for (int i : query.required)
            if (!p.itemset.test(static_cast<std::size_t>(i))) return "missing required item: " + where;
        for (int i : query.forbidden)
            if (p.itemset.test(static_cast<std::size_t>(i))) return "contains forbidden item: " + where;
        if (query.span) {
            const int k = category_span(p.itemset, *schemes.items);
            if (k < query.span->first || k > query.span->second) return "span out of bounds: " + where;
        }
    }
    if (std::adjacent_find(pairs.begin(), pairs.end()) != pairs.end()) return std::string("duplicate pair");
    return std::nullopt;
}

}  // namespace itemcp
