#include <doctest.h>

#include "itemcp/constraints.hpp"
#include "itemcp/error.hpp"
#include "itemcp/random_instance.hpp"
#include "itemcp/reference.hpp"
#include "itemcp/theory.hpp"
#include "support/fixtures.hpp"
#include "support/oracle.hpp"

#include <numeric>
#include <random>

using namespace itemcp;
using test::items;

namespace {

std::uint64_t count_solutions(Solver& s) {
    return s.search_all(Branching::dataset_first(s), [](const Solver&) {}).stats.solutions;
}

PartitionScheme uniform_scheme(const TransactionDatabase& db, Axis axis, int groups) {
    const int size = axis == Axis::items ? db.item_count() : db.transaction_count();
    return parse_partition_text(test::uniform_groups(size, groups, "G"), db, axis);
}

TransactionDatabase blank_db(int n, int m) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(m), std::vector<int>{0});
    return TransactionDatabase(n, rows);
}

// Number of feasible activation vectors over `size` member variables.
std::uint64_t activation_count(const PartitionScheme& scheme, int size, int lb, int ub) {
    Solver s;
    const VarId first = s.new_vars(Role::item_active, size);
    std::vector<VarId> members(static_cast<std::size_t>(size));
    std::iota(members.begin(), members.end(), first);
    post_group_activation(s, scheme, members, lb, ub);
    return count_solutions(s);
}

std::set<std::string> solution_itemsets(const Query& q, const TransactionDatabase& db, const Schemes& schemes = {}) {
    auto model = assemble(q, db, schemes);
    std::set<std::string> out;
    model.solver.search_all(Branching::dataset_first(model.solver), [&](const Solver&) {
        std::string s;
        for (int i : to_indices(model.extract().itemset)) s += db.item_label(i);
        out.insert(s);
    });
    return out;
}

}  // namespace

TEST_CASE("channeling") {
    auto db = test::table1();
    Solver s;
    auto v = ModelVars::create(s, db.item_count(), db.transaction_count());
    post_channeling(s, v);
    s.assign(v.H(2), false);
    s.assign(v.X(4), true);
    CHECK(s.propagate());
    CHECK(s.is_false(v.X(2)));
    CHECK(s.is_true(v.H(4)));
    s.assign(v.Y(0), false);
    CHECK(s.propagate());
    CHECK(s.is_free(v.V(0)));
}

TEST_CASE("group activation") {
    CHECK(activation_count(uniform_scheme(blank_db(12, 1), Axis::items, 6), 12, 2, 3) == 35);
    CHECK(activation_count(uniform_scheme(blank_db(9, 1), Axis::items, 3), 9, 3, 3) == 1);
    CHECK(activation_count(uniform_scheme(blank_db(1, 20), Axis::transactions, 10), 20, 1, 10) == 1023);
    CHECK_THROWS_AS(activation_count(uniform_scheme(blank_db(9, 1), Axis::items, 3), 9, 3, 2), ConfigError);
    CHECK_THROWS_AS(activation_count(uniform_scheme(blank_db(9, 1), Axis::items, 3), 9, 1, 4), ConfigError);
}

TEST_CASE("group activation is all-or-none and respects bounds") {
    std::mt19937_64 rng(5);
    for (int round = 0; round < 60; ++round) {
        const int size = 2 + static_cast<int>(rng() % 9);
        const int groups = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(size, 5)));
        auto db = blank_db(size, 1);
        auto scheme = random_partition(rng, size, groups, Axis::items, "G");
        const int k = static_cast<int>(scheme.group_count());
        const int lb = static_cast<int>(rng() % static_cast<unsigned>(k + 1));
        const int ub = lb + static_cast<int>(rng() % static_cast<unsigned>(k - lb + 1));

        Solver s;
        const VarId first = s.new_vars(Role::item_active, size);
        std::vector<VarId> members(static_cast<std::size_t>(size));
        std::iota(members.begin(), members.end(), first);
        auto ind = post_group_activation(s, scheme, members, lb, ub);
        std::uint64_t count = 0;
        s.search_all(Branching::dataset_first(s), [&](const Solver& sol) {
            ++count;
            int active = 0;
            for (std::size_t g = 0; g < scheme.group_count(); ++g) {
                const auto& m = scheme.groups()[g].members;
                active += sol.is_true(ind[g]);
                for (auto i = m.find_first(); i != Bitset::npos; i = m.find_next(i))
                    REQUIRE(sol.value(members[i]) == sol.value(ind[g]));
            }
            REQUIRE(active >= lb);
            REQUIRE(active <= ub);
        });
        REQUIRE(BigInt(count) == count_masks(k, lb, ub));
    }
}

TEST_CASE("category span") {
    auto db = test::table1();
    auto schemes = test::table1_schemes(db);
    auto check = [&](const std::string& letters, int lb, int ub) {
        Solver s;
        auto v = ModelVars::create(s, db.item_count(), db.transaction_count());
        post_category_span(s, v, *schemes.items, lb, ub);
        const auto chosen = items(db, letters);
        for (int i = 0; i < v.n; ++i) s.assign(v.X(i), chosen.test(static_cast<std::size_t>(i)));
        return s.propagate();
    };
    CHECK(check("EF", 2, 2));
    CHECK_FALSE(check("GK", 2, 3));
    CHECK(category_span(items(db, ""), *schemes.items) == 0);
    CHECK(category_span(items(db, "AEG"), *schemes.items) == 3);

    Solver s;
    auto v = ModelVars::create(s, db.item_count(), db.transaction_count());
    CategorySpan span({{v.X(0), v.X(1)}, {v.X(2)}}, 0, 2);
    CHECK(span.span(s) == 0);
}

TEST_CASE("category span agrees with its definition") {
    std::mt19937_64 rng(17);
    for (int round = 0; round < 300; ++round) {
        const int n = 2 + static_cast<int>(rng() % 8);
        auto db = blank_db(n, 1);
        auto scheme = random_partition(rng, n, 1 + static_cast<int>(rng() % static_cast<unsigned>(n)), Axis::items, "G");
        const int k = static_cast<int>(scheme.group_count());
        const int lb = static_cast<int>(rng() % static_cast<unsigned>(k + 1));
        const int ub = lb + static_cast<int>(rng() % static_cast<unsigned>(k - lb + 1));
        Bitset chosen(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            if (rng() % 2) chosen.set(static_cast<std::size_t>(i));
        Solver s;
        auto v = ModelVars::create(s, n, 1);
        post_category_span(s, v, scheme, lb, ub);
        bool ok = !s.failed();
        for (int i = 0; i < n; ++i) ok = s.assign(v.X(i), chosen.test(static_cast<std::size_t>(i))) && ok;
        const int span = category_span(chosen, scheme);
        INFO("n=" << n << " k=" << k << " lb=" << lb << " ub=" << ub << " span=" << span << " chosen=" << chosen.count());
        REQUIRE((ok && s.propagate()) == (span >= lb && span <= ub));
    }
}

TEST_CASE("minimum size") {
    auto db = test::table1();
    Query q = templates::fci(Threshold(1, 2));
    q.min_size = 2;
    CHECK(solution_itemsets(q, db) == std::set<std::string>{"EF", "GK"});

    Solver s;
    auto v = ModelVars::create(s, db.item_count(), db.transaction_count());
    CHECK_THROWS_AS(post_min_size(s, v, 10), ConfigError);
    CHECK_THROWS_AS(post_min_size(s, v, 0), ConfigError);
}

TEST_CASE("required and forbidden items") {
    auto db = test::table1();
    SUBCASE("required item appears in every solution") {
        Query q = templates::fci(Threshold(1, 3));
        q.required = {*db.find_item("E")};
        auto sols = solution_itemsets(q, db);
        CHECK_FALSE(sols.empty());
        for (const auto& s : sols) CHECK(s.find('E') != std::string::npos);
    }
    SUBCASE("required and forbidden conflict at root") {
        Solver s;
        auto v = ModelVars::create(s, db.item_count(), db.transaction_count());
        post_required_item(s, v, 0);
        CHECK(s.is_true(v.X(0)));
        CHECK_FALSE(s.failed());
        post_forbidden_items(s, v, {0});
        CHECK(s.failed());
    }
    SUBCASE("unsupported required item") {
        TransactionDatabase wide(4, {{0, 1}, {0}, {0, 2}});
        Query q = templates::fci(Threshold(1, 3));
        q.required = {3};
        q.closed = false;
        CHECK(solution_itemsets(q, wide).empty());
    }
    SUBCASE("forbidden items with a deactivated item") {
        Query q = templates::fci(Threshold(3, 10));
        q.min_size = 2;
        q.forbidden = {2, 3, 4, 5};
        q.items = AxisSelection::list({0, 1, 2, 3, 4, 5, 6, 7});
        CHECK(solution_itemsets(q, db).count("BG") == 1);
    }
    SUBCASE("empty forbidden set changes nothing") {
        Query q = templates::fci(Threshold(1, 2));
        auto base = solution_itemsets(q, db);
        q.forbidden = {};
        CHECK(solution_itemsets(q, db) == base);
        CHECK(base == std::set<std::string>{"A", "B", "EF", "GK"});
    }
    SUBCASE("forbidding everything leaves nothing") {
        Query q = templates::fci(Threshold(1, 6));
        for (int i = 0; i < db.item_count(); ++i) q.forbidden.push_back(i);
        CHECK(solution_itemsets(q, db).empty());
    }
}

namespace {

std::uint64_t transaction_masks(const TransactionDatabase& db, const PartitionScheme& scheme) {
    Solver s;
    auto v = ModelVars::create(s, db.item_count(), db.transaction_count());
    for (int i = 0; i < v.n; ++i) {
        s.assign(v.H(i), true);
        s.assign(v.X(i), false);
    }
    for (int j = 0; j < v.m; ++j) s.assign(v.Y(j), false);
    post_exactly_one_group(s, v, scheme);
    return s.failed() ? 0 : count_solutions(s);
}

}  // namespace

TEST_CASE("exactly one group over hierarchy levels") {
    auto cars = test::car_data();
    auto db = parse_fimi_text(cars.fimi);
    auto scheme = parse_partition_text(cars.places, db, Axis::transactions);
    CHECK(transaction_masks(db, scheme) == 14);

    auto single = parse_partition_text("all: 1 2 3\n", blank_db(1, 3), Axis::transactions);
    Solver s;
    auto v = ModelVars::create(s, 1, 3);
    post_exactly_one_group(s, v, single);
    for (int j = 0; j < 3; ++j) CHECK(s.is_true(v.V(j)));

    PartitionScheme empty;
    empty.axis = Axis::transactions;
    CHECK_THROWS_AS(post_exactly_one_group(s, v, empty), ConfigError);
}

TEST_CASE("reified mining model") {
    auto db = test::table1();
    Query q = templates::fci(Threshold(1, 2));
    q.model = MiningModel::reified;
    CHECK(solution_itemsets(q, db) == std::set<std::string>{"A", "B", "EF", "GK"});
    q.theta = Threshold(1, 1);
    CHECK(solution_itemsets(q, db).empty());
    q.theta = Threshold(1, 2);
    q.items = AxisSelection::list({0, 1, 2, 3, 4});
    CHECK(solution_itemsets(q, db) == std::set<std::string>{"A", "B", "E"});
}

TEST_CASE("reified model matches brute force on fixed masks") {
    std::mt19937_64 rng(23);
    for (int round = 0; round < 150; ++round) {
        const int n = 1 + static_cast<int>(rng() % 8);
        const int m = 1 + static_cast<int>(rng() % 7);
        std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
        for (auto& r : rows)
            for (int i = 0; i < n; ++i)
                if (rng() % 2) r.push_back(i);
        TransactionDatabase db(n, rows);
        std::vector<int> item_list, trans_list;
        std::uint32_t item_mask = 0;
        std::vector<int> active(static_cast<std::size_t>(m), 0);
        for (int i = 0; i < n; ++i)
            if (rng() % 4) {
                item_list.push_back(i);
                item_mask |= 1u << i;
            }
        for (int j = 0; j < m; ++j)
            if (rng() % 4) {
                trans_list.push_back(j);
                active[static_cast<std::size_t>(j)] = 1;
            }
        if (trans_list.empty()) continue;
        const Threshold theta(1 + rng() % 3, 4);
        const bool closed = rng() % 2;

        Query q = templates::fci(theta);
        q.closed = closed;
        q.model = MiningModel::reified;
        q.items = AxisSelection::list(item_list);
        q.transactions = AxisSelection::list(trans_list);
        auto model = assemble(q, db, {});
        std::set<std::uint32_t> got;
        model.solver.search_all(Branching::dataset_first(model.solver), [&](const Solver&) {
            std::uint32_t bits = 0;
            for (int i : to_indices(model.extract().itemset)) bits |= 1u << i;
            got.insert(bits);
        });
        auto expect = test::oracle::theory(test::oracle::matrix(n, rows), item_mask, active, theta.num(), theta.den(),
                                           closed);
        REQUIRE(got == std::set<std::uint32_t>(expect.begin(), expect.end()));
    }
}
