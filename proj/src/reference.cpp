#include "itemcp/reference.hpp"

#include "itemcp/error.hpp"

#include <bit>
#include <exception>
#include <mutex>
#include <thread>

namespace itemcp {

BigInt count_masks(int n_groups, int lb, int ub) {
    if (n_groups < 0 || lb < 0 || lb > ub || ub > n_groups)
        throw ConfigError("invalid bounds (" + std::to_string(lb) + "," + std::to_string(ub) + ") for " +
                          std::to_string(n_groups) + " groups");
    BigInt total = 0;
    BigInt binom = 1;  // C(n, k), starting at k = 0
    for (int k = 0; k <= ub; ++k) {
        if (k >= lb) total += binom;
        binom = binom * (n_groups - k) / (k + 1);
    }
    return total;
}

// --- CombinationIterator ----------------------------------------------------

CombinationIterator::CombinationIterator(int n, int lb, int ub) : n_(n), ub_(ub), k_(lb) {
    if (n < 0 || lb < 0 || lb > ub || ub > n)
        throw ConfigError("invalid combination bounds (" + std::to_string(lb) + "," + std::to_string(ub) + ")");
}

bool CombinationIterator::next() {
    auto first_of_size = [this] {
        current_.resize(static_cast<std::size_t>(k_));
        for (int i = 0; i < k_; ++i) current_[static_cast<std::size_t>(i)] = i;
    };
    if (!started_) {
        started_ = true;
        first_of_size();
        return true;
    }
    for (int i = k_ - 1; i >= 0; --i) {
        auto& slot = current_[static_cast<std::size_t>(i)];
        if (slot < n_ - k_ + i) {
            ++slot;
            for (int t = i + 1; t < k_; ++t)
                current_[static_cast<std::size_t>(t)] = current_[static_cast<std::size_t>(t - 1)] + 1;
            return true;
        }
    }
    if (++k_ > ub_) return false;
    first_of_size();
    return true;
}

// --- MaskEnumerator ---------------------------------------------------------

bool MaskEnumerator::AxisState::advance() {
    using Mode = AxisSelection::Mode;
    switch (selection.mode) {
        case Mode::all:
        case Mode::list:
            if (single_done) return false;
            single_done = true;
            return true;
        case Mode::bounds: return combos->next();
        case Mode::one_of_levels:
            if (!single_done) {
                single_done = true;
                entity = 0;
            } else {
                ++entity;
            }
            return entity < groups.size();
    }
    return false;
}

std::vector<int> MaskEnumerator::AxisState::ids() const {
    using Mode = AxisSelection::Mode;
    if (selection.mode == Mode::bounds) return combos->current();
    if (selection.mode == Mode::one_of_levels) return {static_cast<int>(entity)};
    return {};
}

Bitset MaskEnumerator::AxisState::members() const {
    using Mode = AxisSelection::Mode;
    if (selection.mode == Mode::bounds) {
        Bitset out(fixed.size());
        for (int g : combos->current()) out |= groups[static_cast<std::size_t>(g)]->members;
        return out;
    }
    if (selection.mode == Mode::one_of_levels) return groups[entity]->members;
    return fixed;
}

BigInt MaskEnumerator::AxisState::count() const {
    using Mode = AxisSelection::Mode;
    if (selection.mode == Mode::bounds)
        return count_masks(static_cast<int>(groups.size()), selection.lb, selection.ub);
    if (selection.mode == Mode::one_of_levels) return static_cast<unsigned>(groups.size());
    return 1;
}

namespace {

void init_axis(auto& state, const AxisSelection& sel, const std::optional<PartitionScheme>& scheme, int size) {
    using Mode = AxisSelection::Mode;
    state.selection = sel;
    state.fixed = Bitset(static_cast<std::size_t>(size));
    state.single_done = false;
    state.entity = 0;
    if (sel.mode == Mode::all) state.fixed.set();
    if (sel.mode == Mode::list)
        for (int k : sel.members) state.fixed.set(static_cast<std::size_t>(k));
    if (sel.mode == Mode::bounds || sel.mode == Mode::one_of_levels) {
        if (!scheme) throw ConfigError("group selection needs a partition scheme");
        if (sel.mode == Mode::bounds) {
            state.groups.clear();
            for (const auto& g : scheme->groups()) state.groups.push_back(&g);
            state.combos.emplace(static_cast<int>(state.groups.size()), sel.lb, sel.ub);
        } else {
            state.groups = flatten_groups(*scheme);
        }
    }
}

}  // namespace

MaskEnumerator::MaskEnumerator(const Query& query, const TransactionDatabase& db, const Schemes& schemes) {
    init_axis(items_, query.items, schemes.items, db.item_count());
    init_axis(transactions_, query.transactions, schemes.transactions, db.transaction_count());
}

BigInt MaskEnumerator::count() const { return items_.count() * transactions_.count(); }

bool MaskEnumerator::next(MaskCandidate& out) {
    if (exhausted_) return false;
    if (!started_) {
        started_ = true;
        if (!items_.advance() || !transactions_.advance()) {
            exhausted_ = true;
            return false;
        }
    } else if (!transactions_.advance()) {
        if (!items_.advance()) {
            exhausted_ = true;
            return false;
        }
        transactions_.single_done = false;
        transactions_.entity = 0;
        if (transactions_.combos)
            transactions_.combos.emplace(static_cast<int>(transactions_.groups.size()), transactions_.selection.lb,
                                         transactions_.selection.ub);
        if (!transactions_.advance()) {
            exhausted_ = true;
            return false;
        }
    }
    out.choice = {items_.ids(), transactions_.ids()};
    out.mask = {items_.members(), transactions_.members()};
    return true;
}

std::vector<MaskCandidate> MaskEnumerator::materialize() {
    std::vector<MaskCandidate> out;
    for (MaskCandidate c; next(c);) out.push_back(c);
    return out;
}

MaskEnumerator enumerate_masks(const Query& query, const TransactionDatabase& db, const Schemes& schemes) {
    return MaskEnumerator(query, db, schemes);
}

// --- Miners -----------------------------------------------------------------

MiningFilter MiningFilter::from_query(const Query& query, const Schemes& schemes) {
    MiningFilter f;
    f.min_size = query.min_size;
    f.span = query.span;
    f.span_scheme = schemes.items ? &*schemes.items : nullptr;
    f.required = query.required;
    f.forbidden = query.forbidden;
    if (f.span && !f.span_scheme) throw ConfigError("span needs an item partition");
    return f;
}

namespace {

class MinerBase {
public:
    MinerBase(const TransactionDatabase& db, const SubDatasetMask& mask, const Threshold& theta,
              const MiningFilter& filter)
        : db_(db), mask_(mask), theta_(theta), filter_(filter), active_(mask.transactions.count()),
          forbidden_(make_bitset(static_cast<std::size_t>(db.item_count()), filter.forbidden)),
          required_(make_bitset(static_cast<std::size_t>(db.item_count()), filter.required)) {}

protected:

    bool frequent(const Bitset& cov) const { return theta_.admits(cov.count(), active_); }

    int span(const Bitset& p) const { return filter_.span ? category_span(p, *filter_.span_scheme) : 0; }

    bool span_exceeded(const Bitset& p) const { return filter_.span && span(p) > filter_.span->second; }

    bool accepted(const Bitset& p) const {
        if (p.none() || static_cast<int>(p.count()) < filter_.min_size) return false;
        if (!required_.is_subset_of(p) || p.intersects(forbidden_)) return false;
        if (filter_.span) {
            const int k = span(p);
            if (k < filter_.span->first || k > filter_.span->second) return false;
        }
        return true;
    }

    const TransactionDatabase& db_;
    const SubDatasetMask& mask_;
    Threshold theta_;
    const MiningFilter& filter_;
    std::uint64_t active_;
    Bitset forbidden_;
    Bitset required_;
    std::vector<Bitset> out_;
};

class ClosedMiner : MinerBase {
public:
    using MinerBase::MinerBase;

    std::vector<Bitset> run() {
        if (active_ == 0) return {};
        const Bitset& cov = mask_.transactions;
        Bitset root = closure_of(cov);
        if (prunable(root, -1, cov)) return {};
        if (accepted(root)) out_.push_back(root);
        expand(root, cov, -1);
        return std::move(out_);
    }

private:
    Bitset closure_of(const Bitset& cov) const {
        Bitset r = mask_.items;
        for (auto j = cov.find_first(); j != Bitset::npos; j = cov.find_next(j)) r &= db_.row(static_cast<int>(j));
        return r;
    }

    // Every descendant of p keeps the items below core and lies inside some
    // transaction of cov.
    bool prunable(const Bitset& p, int core, const Bitset& cov) const {
        if (p.intersects(forbidden_) || span_exceeded(p)) return true;
        Bitset reachable(mask_.items.size());
        std::size_t widest = 0;
        for (auto j = cov.find_first(); j != Bitset::npos; j = cov.find_next(j)) {
            Bitset row = db_.row(static_cast<int>(j));
            row &= mask_.items;
            widest = std::max(widest, row.count());
            reachable |= row;
        }
        if (static_cast<int>(widest) < filter_.min_size) return true;
        if (!required_.is_subset_of(reachable)) return true;
        for (int r : filter_.required)
            if (r <= core && !p.test(static_cast<std::size_t>(r))) return true;
        return false;
    }

    void expand(const Bitset& p, const Bitset& cov, int core) {
        const int n = db_.item_count();
        for (int e = core + 1; e < n; ++e) {
            const auto eb = static_cast<std::size_t>(e);
            if (!mask_.items.test(eb) || p.test(eb)) continue;
            Bitset next_cov = cov;
            next_cov &= db_.column(e);
            if (!frequent(next_cov)) continue;
            Bitset q = closure_of(next_cov);
            Bitset diff = q ^ p;
            if (auto first = diff.find_first(); first != Bitset::npos && first < eb) continue;
            if (prunable(q, e, next_cov)) continue;
            if (accepted(q)) out_.push_back(q);
            expand(q, next_cov, e);
        }
    }
};

class FrequentMiner : MinerBase {
public:
    using MinerBase::MinerBase;

    std::vector<Bitset> run() {
        if (active_ == 0) return {};
        Bitset empty(static_cast<std::size_t>(db_.item_count()));
        extend(empty, mask_.transactions, -1);
        return std::move(out_);
    }

private:
    void extend(const Bitset& p, const Bitset& cov, int last) {
        const int n = db_.item_count();
        int remaining = 0;
        for (int e = last + 1; e < n; ++e)
            remaining += mask_.items.test(static_cast<std::size_t>(e)) && !forbidden_.test(static_cast<std::size_t>(e));
        for (int e = last + 1; e < n; ++e) {
            const auto eb = static_cast<std::size_t>(e);
            if (!mask_.items.test(eb) || forbidden_.test(eb)) continue;
            --remaining;
            if (static_cast<int>(p.count()) + 1 + remaining < filter_.min_size) break;
            Bitset next_cov = cov;
            next_cov &= db_.column(e);
            if (!frequent(next_cov)) continue;
            Bitset q = p;
            q.set(eb);
            bool lost_required = false;
            for (int r : filter_.required) lost_required |= r < e && !q.test(static_cast<std::size_t>(r));
            if (lost_required || span_exceeded(q)) continue;
            if (accepted(q)) out_.push_back(q);
            extend(q, next_cov, e);
        }
    }
};

void check_deadline(const ReferenceOptions& options) {
    if (options.deadline && std::chrono::steady_clock::now() > *options.deadline) throw Timeout();
}

SolutionPair make_pair(const TransactionDatabase& db, const MaskCandidate& c, Bitset itemset) {
    SolutionPair p;
    p.choice = c.choice;
    p.mask = c.mask;
    p.support = cover(db, itemset, c.mask).count();
    p.active = c.mask.transactions.count();
    p.itemset = std::move(itemset);
    return p;
}

}  // namespace

std::vector<Bitset> mine_closed(const TransactionDatabase& db, const SubDatasetMask& mask, const Threshold& theta,
                                const MiningFilter& filter) {
    return ClosedMiner(db, mask, theta, filter).run();
}

std::vector<Bitset> mine_frequent(const TransactionDatabase& db, const SubDatasetMask& mask, const Threshold& theta,
                                  const MiningFilter& filter) {
    return FrequentMiner(db, mask, theta, filter).run();
}

// --- Baseline ---------------------------------------------------------------

std::vector<SolutionPair> pp_mine(const Query& query, const TransactionDatabase& db, const Schemes& schemes,
                                  const ReferenceOptions& options, ReferenceStats* stats) {
    if (query.items.mode == AxisSelection::Mode::one_of_levels ||
        query.transactions.mode == AxisSelection::Mode::one_of_levels)
        throw NotSupported("baseline preprocessing supports whole axes, fixed lists and group bounds; "
                           "one-of-levels selections are not supported");
    validate_query(query, db, schemes);
    const MiningFilter filter = MiningFilter::from_query(query, schemes);
    MaskEnumerator enumerator(query, db, schemes);

    std::vector<MaskCandidate> materialized;
    if (options.materialize) materialized = enumerator.materialize();
    std::size_t cursor = 0;

    std::mutex mutex;
    std::vector<SolutionPair> result;
    std::uint64_t mined = 0;
    std::exception_ptr failure;

    auto fetch = [&](MaskCandidate& c) {
        std::lock_guard lock(mutex);
        if (failure) return false;
        if (options.materialize) {
            if (cursor >= materialized.size()) return false;
            c = materialized[cursor++];
            return true;
        }
        return enumerator.next(c);
    };

    auto worker = [&] {
        try {
            MaskCandidate c;
            while (fetch(c)) {
                check_deadline(options);
                std::vector<SolutionPair> local;
                if (c.mask.transactions.any()) {
                    auto sets = query.closed ? mine_closed(db, c.mask, query.theta, filter)
                                             : mine_frequent(db, c.mask, query.theta, filter);
                    for (auto& s : sets) local.push_back(make_pair(db, c, std::move(s)));
                }
                std::lock_guard lock(mutex);
                ++mined;
                for (auto& p : local) result.push_back(std::move(p));
            }
        } catch (...) {
            std::lock_guard lock(mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    const int threads = std::max(1, options.parallel);
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    if (stats) stats->masks = mined;
    canonical_sort(result);
    return result;
}

// --- Brute force ------------------------------------------------------------

namespace {

constexpr int max_oracle_items = 24;
constexpr std::uint64_t max_oracle_masks = std::uint64_t{1} << 20;

struct AxisOption {
    std::vector<int> ids;
    Bitset members;
};

std::vector<AxisOption> axis_options(const AxisSelection& sel, const std::optional<PartitionScheme>& scheme, int size,
                                     const char* what) {
    using Mode = AxisSelection::Mode;
    const auto bits = static_cast<std::size_t>(size);
    switch (sel.mode) {
        case Mode::all: return {{{}, Bitset(bits).set()}};
        case Mode::list: return {{{}, make_bitset(bits, sel.members)}};
        case Mode::one_of_levels: {
            std::vector<AxisOption> out;
            const auto groups = flatten_groups(*scheme);
            for (std::size_t g = 0; g < groups.size(); ++g) out.push_back({{static_cast<int>(g)}, groups[g]->members});
            return out;
        }
        case Mode::bounds: {
            const auto& groups = scheme->groups();
            const int k = static_cast<int>(groups.size());
            if (k > 20)
                throw SizeGuard(std::string("oracle refuses ") + what + " partitions above 20 groups (got " +
                                std::to_string(k) + ")");
            std::vector<AxisOption> out;
            for (std::uint32_t subset = 0; subset < (1u << k); ++subset) {
                const int pc = std::popcount(subset);
                if (pc < sel.lb || pc > sel.ub) continue;
                AxisOption o{{}, Bitset(bits)};
                for (int g = 0; g < k; ++g) {
                    if (!(subset >> g & 1u)) continue;
                    o.ids.push_back(g);
                    o.members |= groups[static_cast<std::size_t>(g)].members;
                }
                out.push_back(std::move(o));
            }
            return out;
        }
    }
    return {};
}

}  // namespace

std::vector<SolutionPair> brute_force_theory(const Query& query, const TransactionDatabase& db,
                                             const Schemes& schemes, const ReferenceOptions& options,
                                             ReferenceStats* stats) {
    if (db.item_count() > max_oracle_items)
        throw SizeGuard("oracle refuses databases above " + std::to_string(max_oracle_items) + " items (got " +
                        std::to_string(db.item_count()) + ")");
    validate_query(query, db, schemes);
    const auto item_options = axis_options(query.items, schemes.items, db.item_count(), "item");
    const auto trans_options = axis_options(query.transactions, schemes.transactions, db.transaction_count(),
                                            "transaction");
    if (static_cast<std::uint64_t>(item_options.size()) * trans_options.size() > max_oracle_masks)
        throw SizeGuard("oracle refuses more than 2^20 sub-datasets");

    const auto n = static_cast<std::size_t>(db.item_count());
    const Bitset required = make_bitset(n, query.required);
    const Bitset forbidden = make_bitset(n, query.forbidden);

    std::vector<SolutionPair> result;
    std::uint64_t visited = 0;
    for (const auto& io : item_options) {
        for (const auto& to : trans_options) {
            ++visited;
            check_deadline(options);
            const SubDatasetMask mask{io.members, to.members};
            if (mask.transactions.none()) continue;
            const auto active_items = to_indices(mask.items);
            const std::uint32_t subsets = 1u << active_items.size();
            for (std::uint32_t s = 1; s < subsets; ++s) {
                if ((s & 0xfff) == 0) check_deadline(options);
                Bitset p(n);
                for (std::size_t b = 0; b < active_items.size(); ++b)
                    if (s >> b & 1u) p.set(static_cast<std::size_t>(active_items[b]));

                if (static_cast<int>(p.count()) < query.min_size) continue;
                if (!required.is_subset_of(p) || p.intersects(forbidden)) continue;
                if (query.span) {
                    const int k = category_span(p, *schemes.items);
                    if (k < query.span->first || k > query.span->second) continue;
                }
                const Frequency f = frequency(db, p, mask);
                if (!f.meets(query.theta)) continue;
                if (query.closed && closure(db, p, mask) != p) continue;

                SolutionPair pair;
                pair.choice = {io.ids, to.ids};
                pair.mask = mask;
                pair.itemset = std::move(p);
                pair.support = f.support;
                pair.active = f.active;
                result.push_back(std::move(pair));
            }
        }
    }
    if (stats) stats->masks = visited;
    canonical_sort(result);
    return result;
}

}  // namespace itemcp
