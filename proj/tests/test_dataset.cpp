#include <doctest.h>

#include "itemcp/dataset.hpp"
#include "itemcp/error.hpp"
#include "support/fixtures.hpp"

#include <random>

using namespace itemcp;
using itemcp::test::items;
using itemcp::test::transactions;

TEST_CASE("fimi parsing") {
    auto db = parse_fimi_text("1 3\n2 3\n");
    CHECK(db.item_count() == 3);
    CHECK(db.transaction_count() == 2);
    CHECK(to_indices(db.column(2)) == std::vector<int>{0, 1});

    auto t1 = test::table1();
    CHECK(t1.item_count() == 9);
    CHECK(t1.transaction_count() == 6);
    CHECK(t1.row(0) == items(t1, "BCGHK"));

    SUBCASE("malformed token reports its line") {
        try {
            parse_fimi_text("1 x\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 1);
        }
        try {
            parse_fimi_text("1 2\n\n3 0\n");
            FAIL("expected a parse error");
        } catch (const ParseError& e) {
            CHECK(e.line() == 3);
        }
    }
    SUBCASE("empty database") {
        CHECK_THROWS_AS(parse_fimi_text(""), Error);
        CHECK_THROWS_AS(parse_fimi_text("\n  \n"), Error);
    }
    SUBCASE("duplicates collapse") {
        auto d = parse_fimi_text("2 2 1\n");
        CHECK(d.row(0).count() == 2);
    }
}

TEST_CASE("item labels") {
    auto db = test::table1();
    CHECK(db.item_label(0) == "A");
    CHECK(db.find_item("K") == 8);
    CHECK(db.find_item("9") == 8);
    CHECK_FALSE(db.find_item("Z").has_value());
    CHECK(format_itemset(db, items(db, "GK")) == "G K");

    std::istringstream in("1 Ferrari\n2 Renault\n");
    auto labels = parse_item_labels(in, 3);
    CHECK(labels.at(0) == "Ferrari");
    CHECK(labels.at(2) == "3");
}

TEST_CASE("partition parsing") {
    auto db = test::table1();
    auto s = parse_partition_text(test::table1_item_groups, db, Axis::items);
    REQUIRE(s.group_count() == 3);
    CHECK(s.groups()[0].members.count() == 2);
    CHECK(s.groups()[1].members.count() == 3);
    CHECK(s.groups()[2].members.count() == 4);
    CHECK(s.find("I2") == std::pair<std::size_t, std::size_t>{0, 1});

    SUBCASE("omitted index becomes a singleton") {
        auto p = parse_partition_text("I1: 1 2\nI2: 3 4 5\nI3: 6 7 8\n", db, Axis::items);
        REQUIRE(p.group_count() == 4);
        CHECK(p.groups()[3].members.count() == 1);
        CHECK(p.groups()[3].members.test(8));
        CHECK(p.groups()[3].name == "K");
    }
    SUBCASE("labels are accepted") {
        auto p = parse_partition_text("I1: A B\n# comment\nI2: C D E\nI3: F G H K\n", db, Axis::items);
        CHECK(p.group_count() == 3);
        CHECK(p.groups()[0].members == items(db, "AB"));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(parse_partition_text("G1: 1\nG2: 1\n", db, Axis::items), ParseError);
        CHECK_THROWS_AS(parse_partition_text("G1: 10\n", db, Axis::items), ParseError);
        CHECK_THROWS_AS(parse_partition_text("T1: 7\n", db, Axis::transactions), ParseError);
        CHECK_THROWS_AS(parse_partition_text("G1: 1\nG1: 2\n", db, Axis::items), ParseError);
    }
    SUBCASE("levels") {
        auto p = parse_partition_text("level 1\nA: 1 2 3\nB: 4 5 6\nlevel 2\nx: 1 2\ny: 3\nz: 4 5 6\n", db,
                                      Axis::transactions);
        REQUIRE(p.levels.size() == 2);
        CHECK(p.group_count(0) == 2);
        CHECK(p.group_count(1) == 3);
        CHECK(p.find("z") == std::pair<std::size_t, std::size_t>{1, 2});
    }
}

TEST_CASE("cover, frequency and closure on the running example") {
    auto db = test::table1();
    const auto full = SubDatasetMask::full(db);
    CHECK(cover(db, items(db, "GK"), full) == transactions(db, {1, 2, 6}));
    CHECK(cover(db, items(db, ""), full) == db.all_transactions());
    SubDatasetMask first4{db.all_items(), transactions(db, {1, 2, 3, 4})};
    CHECK(cover(db, items(db, "AD"), first4) == transactions(db, {2, 3}));

    CHECK(frequency(db, items(db, "A"), full).str() == "3/6");
    CHECK(frequency(db, items(db, ""), first4) == Frequency{1, 1});
    CHECK(frequency(db, items(db, "BG"), full) == Frequency{2, 6});
    SubDatasetMask none{db.all_items(), Bitset(6)};
    CHECK_THROWS_AS(frequency(db, items(db, "A"), none), UndefinedFrequency);

    SubDatasetMask no_k{items(db, "ABCDEFGH"), db.all_transactions()};
    CHECK(closure(db, items(db, "BG"), no_k) == items(db, "BG"));
    CHECK(closure(db, items(db, "G"), full) == items(db, "GK"));
    CHECK(closure(db, items(db, "EF"), full) == items(db, "EF"));
    CHECK_THROWS_AS(closure(db, items(db, "AB"), full), EmptyCover);
}

namespace {

TransactionDatabase random_db(std::mt19937_64& rng, int n, int m) {
    std::vector<std::vector<int>> rows(static_cast<std::size_t>(m));
    for (auto& r : rows)
        for (int i = 0; i < n; ++i)
            if (std::bernoulli_distribution(0.5)(rng)) r.push_back(i);
    return TransactionDatabase(n, rows);
}

Bitset random_subset(std::mt19937_64& rng, std::size_t size, double p = 0.5) {
    Bitset b(size);
    for (std::size_t i = 0; i < size; ++i)
        if (std::bernoulli_distribution(p)(rng)) b.set(i);
    return b;
}

}  // namespace

TEST_CASE("dataset properties on random databases") {
    std::mt19937_64 rng(7);
    for (int round = 0; round < 200; ++round) {
        const int n = 1 + static_cast<int>(rng() % 10);
        const int m = 1 + static_cast<int>(rng() % 10);
        auto db = random_db(rng, n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j)
                REQUIRE(db.column(i).test(static_cast<std::size_t>(j)) == db.row(j).test(static_cast<std::size_t>(i)));

        SubDatasetMask mask{random_subset(rng, static_cast<std::size_t>(n), 0.7),
                            random_subset(rng, static_cast<std::size_t>(m), 0.7)};
        const Bitset p = random_subset(rng, static_cast<std::size_t>(n), 0.3) & mask.items;
        const Bitset q = p | (random_subset(rng, static_cast<std::size_t>(n), 0.3) & mask.items);
        REQUIRE(cover(db, q, mask).is_subset_of(cover(db, p, mask)));

        SubDatasetMask fewer{mask.items, mask.transactions & random_subset(rng, static_cast<std::size_t>(m))};
        REQUIRE(cover(db, p, fewer).is_subset_of(cover(db, p, mask)));

        if (mask.transactions.any()) REQUIRE(frequency(db, Bitset(static_cast<std::size_t>(n)), mask) == Frequency{1, 1});

        if (cover(db, p, mask).none()) continue;
        const Bitset c = closure(db, p, mask);
        REQUIRE(p.is_subset_of(c));
        REQUIRE(closure(db, c, mask) == c);
        SubDatasetMask narrower{mask.items & random_subset(rng, static_cast<std::size_t>(n), 0.8), mask.transactions};
        narrower.items |= p;
        REQUIRE(closure(db, p, narrower).is_subset_of(c));
    }
}

TEST_CASE("threshold parsing") {
    CHECK(Threshold::parse("50%") == Threshold(1, 2));
    CHECK(Threshold::parse("1/2") == Threshold(1, 2));
    CHECK(Threshold::parse("0.5") == Threshold(1, 2));
    CHECK(Threshold::parse("1") == Threshold(1, 1));
    CHECK(Threshold(2, 4).str() == Threshold(1, 2).str());
    CHECK(Threshold(1, 2).admits(3, 6));
    CHECK_FALSE(Threshold(51, 100).admits(3, 6));
    CHECK_THROWS_AS(Threshold(0, 2), ConfigError);
    CHECK_THROWS_AS(Threshold(3, 2), ConfigError);
    CHECK_THROWS(Threshold::parse("abc"));
}
