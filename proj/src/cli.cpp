#include "itemcp/cli.hpp"

#include "itemcp/error.hpp"
#include "itemcp/random_instance.hpp"
#include "itemcp/theory.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace itemcp::cli {

namespace {

struct InputFiles {
    std::string data;
    std::string query;
    std::string item_cats;
    std::string trans_cats;
    std::string item_labels;
};

struct Inputs {
    TransactionDatabase db;
    Schemes schemes;
    Query query;
};

Inputs load_inputs(const InputFiles& files) {
    TransactionDatabase db = load_fimi(files.data);
    if (!files.item_labels.empty()) {
        std::ifstream in(files.item_labels);
        if (!in) throw Error("cannot open '" + files.item_labels + "'");
        db.set_item_labels(parse_item_labels(in, db.item_count()));
    }
    Schemes schemes;
    if (!files.item_cats.empty()) schemes.items = load_partition(files.item_cats, db, Axis::items);
    if (!files.trans_cats.empty()) schemes.transactions = load_partition(files.trans_cats, db, Axis::transactions);
    Query query = build_query(load_query_spec(files.query), db, schemes);
    return {std::move(db), std::move(schemes), std::move(query)};
}

void add_input_options(CLI::App& cmd, InputFiles& files, bool required) {
    auto* data = cmd.add_option("--data", files.data, "FIMI transaction file");
    auto* query = cmd.add_option("--query", files.query, "query file");
    if (required) {
        data->required();
        query->required();
    }
    cmd.add_option("--item-cats", files.item_cats, "item partition file");
    cmd.add_option("--trans-cats", files.trans_cats, "transaction partition file");
    cmd.add_option("--item-labels", files.item_labels, "item label file ('id label' per line)");
}

std::optional<std::chrono::steady_clock::time_point> deadline_after(double seconds) {
    if (seconds <= 0) return std::nullopt;
    return std::chrono::steady_clock::now() +
           std::chrono::duration_cast<std::chrono::steady_clock::duration>(std::chrono::duration<double>(seconds));
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw Error("cannot write '" + path + "'");
    file << text;
}

// --- mine -------------------------------------------------------------------

struct MineArgs {
    InputFiles files;
    std::string engine = "cp";
    std::string out;
    double timeout = 0;
    int parallel = 1;
    bool materialize = false;
};

int cmd_mine(const MineArgs& a, std::ostream& out, std::ostream& err) {
    Inputs in = load_inputs(a.files);
    in.query.engine = parse_engine(a.engine);
    RunOptions options;
    options.parallel = a.parallel;
    options.materialize = a.materialize;
    options.deadline = deadline_after(a.timeout);

    const TheoryResult result = run_theory(in.query, in.db, in.schemes, options);
    if (result.status == RunStatus::timeout) {
        err << "itemcp: timeout after " << a.timeout << " s\n";
        return timeout;
    }
    if (auto problem = self_check(result.pairs, in.query, in.db, in.schemes)) {
        err << "itemcp: self-check failed: " << *problem << "\n";
        return error;
    }
    std::string text;
    for (const auto& p : result.pairs) text += format_pair(p, in.query, in.db, in.schemes) + "\n";
    write_text(a.out, text, out);
    return ok;
}

// --- verify -----------------------------------------------------------------

struct VerifyArgs {
    InputFiles files;
    int seeds = 0;
    std::uint64_t seed = 1;
    std::string inject_fault;
    double timeout = 0;
};

Threshold broken(const Threshold& t) { return {t.num() + t.den(), 2 * t.den()}; }

struct EngineRun {
    EngineKind engine;
    std::optional<std::vector<SolutionPair>> pairs;
    std::string note;
};

std::vector<EngineRun> run_engines(const Query& base, const TransactionDatabase& db, const Schemes& schemes,
                                   const VerifyArgs& a) {
    std::vector<EngineRun> runs;
    for (EngineKind e : {EngineKind::cp, EngineKind::baseline, EngineKind::oracle}) {
        Query q = base;
        q.engine = e;
        if (!a.inject_fault.empty() && parse_engine(a.inject_fault) == e) q.theta = broken(q.theta);
        EngineRun run{e, std::nullopt, {}};
        RunOptions options;
        options.deadline = deadline_after(a.timeout);
        try {
            auto r = run_theory(q, db, schemes, options);
            if (r.status == RunStatus::timeout) throw Timeout();
            run.pairs = std::move(r.pairs);
        } catch (const NotSupported& ex) {
            run.note = std::string("skipped: ") + ex.what();
        } catch (const SizeGuard& ex) {
            run.note = std::string("skipped: ") + ex.what();
        } catch (const Error& ex) {
            throw Error(to_string(e) + ": " + ex.what());
        }
        runs.push_back(std::move(run));
    }
    return runs;
}

/// Empty when every engine that ran agrees; otherwise the first differing pair.
std::optional<std::string> compare_runs(const std::vector<EngineRun>& runs, const Query& q,
                                        const TransactionDatabase& db, const Schemes& schemes) {
    const EngineRun* reference = nullptr;
    for (const auto& r : runs) {
        if (!r.pairs) continue;
        if (!reference) {
            reference = &r;
            continue;
        }
        if (*r.pairs == *reference->pairs) continue;
        std::vector<SolutionPair> only_ref, only_other;
        std::set_difference(reference->pairs->begin(), reference->pairs->end(), r.pairs->begin(), r.pairs->end(),
                            std::back_inserter(only_ref), canonical_less);
        std::set_difference(r.pairs->begin(), r.pairs->end(), reference->pairs->begin(), reference->pairs->end(),
                            std::back_inserter(only_other), canonical_less);
        std::ostringstream msg;
        msg << to_string(reference->engine) << " (" << reference->pairs->size() << ") vs " << to_string(r.engine)
            << " (" << r.pairs->size() << "): first difference: ";
        const bool ref_first =
            !only_ref.empty() && (only_other.empty() || canonical_less(only_ref.front(), only_other.front()));
        if (ref_first)
            msg << "only in " << to_string(reference->engine) << ": " << format_pair(only_ref.front(), q, db, schemes);
        else if (!only_other.empty())
            msg << "only in " << to_string(r.engine) << ": " << format_pair(only_other.front(), q, db, schemes);
        else
            msg << "same pairs with different supports";
        return msg.str();
    }
    return std::nullopt;
}

std::string summary(const std::vector<EngineRun>& runs) {
    std::string s;
    for (const auto& r : runs) {
        if (!s.empty()) s += ' ';
        s += to_string(r.engine) + "=" + (r.pairs ? std::to_string(r.pairs->size()) : std::string("skipped"));
    }
    return s;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    if (a.seeds > 0) {
        for (int k = 0; k < a.seeds; ++k) {
            std::mt19937_64 rng(a.seed + static_cast<std::uint64_t>(k));
            auto inst = random_instance(rng);
            auto runs = run_engines(inst.query, inst.db, inst.schemes, a);
            if (auto diff = compare_runs(runs, inst.query, inst.db, inst.schemes)) {
                out << "seed " << a.seed + static_cast<std::uint64_t>(k) << " (" << inst.family << "): MISMATCH "
                    << *diff << "\n";
                return error;
            }
        }
        out << "verified " << a.seeds << " random instances\n";
        return ok;
    }
    if (a.files.data.empty() || a.files.query.empty()) {
        err << "itemcp verify: need --data and --query, or --seeds\n";
        return error;
    }
    Inputs in = load_inputs(a.files);
    auto runs = run_engines(in.query, in.db, in.schemes, a);
    for (const auto& r : runs)
        if (!r.note.empty()) out << to_string(r.engine) << ": " << r.note << "\n";
    if (std::count_if(runs.begin(), runs.end(), [](const auto& r) { return r.pairs.has_value(); }) < 2) {
        err << "itemcp verify: fewer than two engines could run\n";
        return error;
    }
    if (auto diff = compare_runs(runs, in.query, in.db, in.schemes)) {
        out << "MISMATCH " << *diff << "\n";
        return error;
    }
    out << "agree: " << summary(runs) << "\n";
    return ok;
}

// --- bench ------------------------------------------------------------------

struct BenchArgs {
    std::string suite;
    std::string out;
    double timeout = 0;
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) {
        auto b = cell.find_first_not_of(" \t\r");
        auto e = cell.find_last_not_of(" \t\r");
        cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
    }
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string bounds_cell(const AxisSelection& sel) {
    switch (sel.mode) {
        case AxisSelection::Mode::bounds: return std::to_string(sel.lb) + ".." + std::to_string(sel.ub);
        case AxisSelection::Mode::one_of_levels: return "one";
        case AxisSelection::Mode::list: return "list";
        case AxisSelection::Mode::all: return "all";
    }
    return "";
}

std::string groups_cell(const std::optional<PartitionScheme>& scheme) {
    return scheme ? std::to_string(flatten_groups(*scheme).size()) : std::string("-");
}

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream&) {
    std::ifstream suite(a.suite);
    if (!suite) throw Error("cannot open '" + a.suite + "'");
    const auto base = std::filesystem::path(a.suite).parent_path();
    auto resolve = [&](const std::string& p) {
        if (p.empty() || std::filesystem::path(p).is_absolute()) return p;
        return (base / p).string();
    };

    std::ostringstream csv;
    csv << "id,engine,item_groups,trans_groups,item_bounds,trans_bounds,masks,masks_explored,solutions,time_s,nodes,"
           "status,message\n";
    std::string line;
    bool header_seen = false;
    while (std::getline(suite, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos || line[line.find_first_not_of(" \t")] == '#')
            continue;
        auto cells = split_csv(line);
        if (!header_seen && !cells.empty() && cells[0] == "id") {
            header_seen = true;
            continue;
        }
        cells.resize(7);
        const std::string& id = cells[0];
        InputFiles files{resolve(cells[1]), resolve(cells[2]), resolve(cells[3]), resolve(cells[4]), resolve(cells[6])};
        std::vector<std::string> engines;
        {
            std::istringstream es(cells[5].empty() ? std::string("cp;baseline") : cells[5]);
            for (std::string e; std::getline(es, e, ';');)
                if (!e.empty()) engines.push_back(e);
        }

        std::optional<Inputs> in;
        std::string load_error;
        try {
            in.emplace(load_inputs(files));
        } catch (const std::exception& ex) {
            load_error = ex.what();
        }
        for (const auto& engine : engines) {
            csv << id << ',' << engine << ',';
            if (!in) {
                csv << "-,-,-,-,-,-,0,0,0,error," << std::quoted(load_error) << "\n";
                continue;
            }
            Query q = in->query;
            std::string status = "ok";
            std::string message;
            TheoryResult r;
            const auto start = std::chrono::steady_clock::now();
            try {
                q.engine = parse_engine(engine);
                RunOptions options;
                options.deadline = deadline_after(a.timeout);
                r = run_theory(q, in->db, in->schemes, options);
                if (r.status == RunStatus::timeout) status = "to";
            } catch (const std::exception& ex) {
                status = "error";
                message = ex.what();
            }
            const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            std::string masks = "-";
            try {
                masks = MaskEnumerator(q, in->db, in->schemes).count().str();
            } catch (const std::exception&) {
            }
            csv << groups_cell(in->schemes.items) << ',' << groups_cell(in->schemes.transactions) << ','
                << bounds_cell(q.items) << ',' << bounds_cell(q.transactions) << ',' << masks << ',' << r.masks << ','
                << (status == "ok" ? std::to_string(r.pairs.size()) : std::string("-")) << ',' << std::fixed
                << std::setprecision(3) << secs << ',' << r.nodes << ',' << status << ',' << std::quoted(message)
                << "\n";
            csv.unsetf(std::ios::fixed);
        }
    }
    write_text(a.out, csv.str(), out);
    return ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constraint-based itemset mining over sub-datasets", "itemcp"};
    app.require_subcommand(1);

    MineArgs mine;
    auto* mine_cmd = app.add_subcommand("mine", "extract the theory of a query");
    add_input_options(*mine_cmd, mine.files, true);
    mine_cmd->add_option("--engine", mine.engine, "cp, baseline or oracle")
        ->check(CLI::IsMember({"cp", "baseline", "oracle"}));
    mine_cmd->add_option("--out", mine.out, "result file (default: stdout)");
    mine_cmd->add_option("--timeout", mine.timeout, "seconds; 0 disables");
    mine_cmd->add_option("--parallel", mine.parallel, "worker threads")->check(CLI::PositiveNumber);
    mine_cmd->add_flag("--materialize", mine.materialize, "baseline: build every sub-dataset before mining");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "check that cp, baseline and oracle agree");
    add_input_options(*verify_cmd, verify.files, false);
    verify_cmd->add_option("--seeds", verify.seeds, "number of random instances");
    verify_cmd->add_option("--seed", verify.seed, "first random seed");
    verify_cmd->add_option("--timeout", verify.timeout, "seconds per engine run; 0 disables");
    verify_cmd->add_option("--inject-fault", verify.inject_fault, "perturb the threshold of one engine")
        ->check(CLI::IsMember({"cp", "baseline", "oracle"}))
        ->group("");

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "run a suite of queries and report a CSV table");
    bench_cmd->add_option("--suite", bench.suite, "CSV: id,data,query,item_cats,trans_cats,engines[,item_labels]")->required();
    bench_cmd->add_option("--timeout", bench.timeout, "seconds per run; 0 disables");
    bench_cmd->add_option("--out", bench.out, "CSV file (default: stdout)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "itemcp: " << e.what() << "\n";
        return error;
    }

    try {
        if (*mine_cmd) return cmd_mine(mine, out, err);
        if (*verify_cmd) return cmd_verify(verify, out, err);
        return cmd_bench(bench, out, err);
    } catch (const std::exception& e) {
        err << "itemcp: " << e.what() << "\n";
        return error;
    }
}

}  // namespace itemcp::cli
