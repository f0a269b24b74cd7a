#include <doctest.h>

#include "itemcp/cli.hpp"
#include "support/fixtures.hpp"

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>


namespace fs = std::filesystem;

namespace {

const std::string data_dir = ITEMCP_DATA_DIR;

struct Run {
    int code;
    std::string out, err;
};

Run invoke(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = itemcp::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> table1_args(const std::string& query) {
    const std::string d = data_dir + "/table1/";
    return {"--data",      d + "table1.dat",  "--item-labels", d + "table1.labels", "--item-cats",
            d + "items.cats", "--trans-cats", d + "trans.cats",    "--query",        d + query};
}

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

fs::path scratch(const std::string& name) {
    auto dir = fs::temp_directory_path() / ("itemcp_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    return dir / name;
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

std::size_t lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST_CASE("mine") {
    auto cp = invoke(concat({"mine", "--engine", "cp"}, table1_args("q1.query")));
    REQUIRE(cp.code == 0);
    CHECK(lines(cp.out) == 4);
    CHECK(cp.out.find("ALL\tALL\tG K\t3\t3/6\n") != std::string::npos);

    auto baseline = invoke(concat({"mine", "--engine", "baseline"}, table1_args("q1.query")));
    CHECK(baseline.out == cp.out);

    for (const char* q : {"q2.query", "q3.query", "q4.query", "bg.query"}) {
        auto a = invoke(concat({"mine"}, table1_args(q)));
        auto b = invoke(concat({"mine", "--engine", "baseline", "--materialize"}, table1_args(q)));
        auto c = invoke(concat({"mine", "--engine", "oracle"}, table1_args(q)));
        auto d = invoke(concat({"mine", "--parallel", "3"}, table1_args(q)));
        CHECK(a.code == 0);
        CHECK(a.out == b.out);
        CHECK(a.out == c.out);
        CHECK(a.out == d.out);
    }
    CHECK(lines(invoke(concat({"mine"}, table1_args("q4.query"))).out) == 24);

    auto file = scratch("q1.tsv");
    CHECK(invoke(concat({"mine", "--out", file.string()}, table1_args("q1.query"))).code == 0);
    std::ifstream in(file);
    std::stringstream text;
    text << in.rdbuf();
    CHECK(text.str() == cp.out);
}

TEST_CASE("mine errors") {
    auto wide = scratch("wide.dat");
    std::string row;
    for (int i = 1; i <= 30; ++i) row += std::to_string(i) + " ";
    write(wide, row + "\n1 2\n");
    auto q = scratch("q.query");
    write(q, "theta: 50%\n");
    auto r = invoke({"mine", "--engine", "oracle", "--data", wide.string(), "--query", q.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("oracle refuses") != std::string::npos);

    CHECK(invoke({"mine", "--data", (data_dir + "/missing.dat"), "--query", q.string()}).code == 1);
    auto bad = scratch("bad.query");
    write(bad, "theta: 50%\nfoo: 1\n");
    auto r2 = invoke({"mine", "--data", wide.string(), "--query", bad.string()});
    CHECK(r2.code == 1);
    CHECK(r2.err.find("unknown key") != std::string::npos);
    CHECK(invoke({"mine", "--engine", "magic", "--data", wide.string(), "--query", q.string()}).code == 1);
}

TEST_CASE("verify") {
    auto r = invoke(concat({"verify"}, table1_args("q4.query")));
    CHECK(r.code == 0);
    CHECK(r.out.find("agree: cp=24 baseline=24 oracle=24") != std::string::npos);

    auto broken = invoke(concat({"verify", "--inject-fault", "cp"}, table1_args("q4.query")));
    CHECK(broken.code == 1);
    CHECK(broken.out.find("MISMATCH") != std::string::npos);
    CHECK(broken.out.find("only in") != std::string::npos);

    auto seeds = invoke({"verify", "--seeds", "100"});
    CHECK(seeds.code == 0);
    CHECK(seeds.out.find("verified 100") != std::string::npos);
}

TEST_CASE("bench") {
    // Twelve singleton groups with (2,3) bounds: 66 + 220 masks.
    auto dat = scratch("bench.dat");
    std::string rows;
    for (int j = 0; j < 8; ++j) {
        for (int i = 1; i <= 12; ++i)
            if ((i + j) % 3 != 0) rows += std::to_string(i) + " ";
        rows += "\n";
    }
    write(dat, rows);
    write(scratch("g2.query"), "theta: 50%\nitems_active: 2 3\n");
    std::string cats;
    for (int i = 1; i <= 12; ++i) cats += "g" + std::to_string(i) + ": " + std::to_string(i) + "\n";
    write(scratch("g.cats"), cats);

    auto suite = scratch("suite.csv");
    write(suite,
          "id,data,query,item_cats,trans_cats,engines,item_labels\n"
          "q2,bench.dat,g2.query,g.cats,,cp;baseline\n"
          "table1," + data_dir + "/table1/table1.dat," + data_dir + "/table1/q4.query," + data_dir +
              "/table1/items.cats," + data_dir + "/table1/trans.cats,cp," + data_dir + "/table1/table1.labels\n"
              "broken,nothing.dat,g2.query,,,cp\n");
    auto r = invoke({"bench", "--suite", suite.string()});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line.rfind("id,engine,item_groups,trans_groups,item_bounds,trans_bounds,masks,", 0) == 0);
    std::vector<std::string> body;
    while (std::getline(in, line)) body.push_back(line);
    REQUIRE(body.size() == 4);
    CHECK(body[0].rfind("q2,cp,12,-,2..3,all,286,", 0) == 0);
    CHECK(body[1].rfind("q2,baseline,12,-,2..3,all,286,286,", 0) == 0);
    CHECK(body[2].rfind("table1,cp,3,3,2..2,2..2,9,", 0) == 0);
    CHECK(body[2].find(",24,") != std::string::npos);
    CHECK(body[3].find(",error,") != std::string::npos);

    auto empty = scratch("empty.csv");
    write(empty, "");
    auto e = invoke({"bench", "--suite", empty.string()});
    CHECK(e.code == 0);
    CHECK(lines(e.out) == 1);

    // A tiny timeout on a large mask space is reported as "to".
    write(scratch("slow.query"), "theta: 10%\nitems_active: 0 12\nclosed: false\n");
    auto slow = scratch("slow.csv");
    write(slow, "s,bench.dat,slow.query,g.cats,,cp;baseline\n");
    auto t = invoke({"bench", "--suite", slow.string(), "--timeout", "0.001"});
    CHECK(t.code == 0);
    CHECK(t.out.find(",to,") != std::string::npos);
    CHECK(lines(t.out) == 3);
}

TEST_CASE("car purchase example") {
    auto read = [](const std::string& path) {
        std::ifstream in(path);
        std::stringstream text;
        text << in.rdbuf();
        return text.str();
    };
    const std::string d = data_dir + "/cars/";
    auto cars = itemcp::test::car_data();
    CHECK(read(d + "cars.dat") == cars.fimi);
    CHECK(read(d + "cars.labels") == cars.labels);
    CHECK(read(d + "places.cats") == "# regions, departments, cities\n" + cars.places);

    auto r = invoke({"mine", "--data", d + "cars.dat", "--item-labels", d + "cars.labels", "--trans-cats",
                     d + "places.cats", "--query", d + "ferrari.query"});
    CHECK(r.code == 0);
    CHECK(r.out == "Ferrari\tD1\tFerrari\t1\t1/10\nFerrari\tC1\tFerrari\t1\t1/5\n");

    auto base = invoke({"mine", "--engine", "baseline", "--data", d + "cars.dat", "--item-labels", d + "cars.labels",
                        "--trans-cats", d + "places.cats", "--query", d + "ferrari.query"});
    CHECK(base.code == 1);
    CHECK(base.err.find("not supported") != std::string::npos);
}
