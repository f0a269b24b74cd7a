#include "itemcp/query.hpp"

#include "itemcp/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace itemcp {

namespace {

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string> words(std::string_view s) {
    std::vector<std::string> out;
    std::istringstream in{std::string(s)};
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

std::optional<int> to_int(std::string_view tok) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

int require_int(std::string_view tok, int line) {
    auto v = to_int(tok);
    if (!v) throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
    return *v;
}

int resolve_item(const TransactionDatabase& db, const std::string& name) {
    auto i = db.find_item(name);
    if (!i) throw ConfigError("unknown item '" + name + "'");
    return *i;
}

AxisSelection resolve_axis(const std::vector<std::string>& value, const TransactionDatabase& db, Axis axis) {
    const std::string what = axis == Axis::items ? "items_active" : "trans_active";
    if (value.size() == 1 && value[0] == "all") return AxisSelection::all();
    if (value.size() == 1 && value[0] == "one-of-levels") {
        if (axis == Axis::items) throw ConfigError("items_active does not accept one-of-levels");
        return AxisSelection::one_of_levels();
    }
    if (!value.empty() && value[0] == "list") {
        std::vector<int> members;
        for (std::size_t k = 1; k < value.size(); ++k) {
            if (axis == Axis::items) {
                members.push_back(resolve_item(db, value[k]));
            } else {
                auto id = to_int(value[k]);
                if (!id || *id < 1 || *id > db.transaction_count())
                    throw ConfigError("transaction id out of range: '" + value[k] + "'");
                members.push_back(*id - 1);
            }
        }
        std::sort(members.begin(), members.end());
        members.erase(std::unique(members.begin(), members.end()), members.end());
        return AxisSelection::list(std::move(members));
    }
    if (value.size() == 2) {
        auto lb = to_int(value[0]);
        auto ub = to_int(value[1]);
        if (lb && ub) return AxisSelection::bounds(*lb, *ub);
    }
    throw ConfigError(what + ": expected 'all', '<lb> <ub>', 'list ...'" +
                      (axis == Axis::transactions ? std::string(" or 'one-of-levels'") : std::string()));
}

void check_axis(const AxisSelection& sel, const std::optional<PartitionScheme>& scheme, int size,
                const std::string& what) {
    switch (sel.mode) {
        case AxisSelection::Mode::all: return;
        case AxisSelection::Mode::list:
            for (int k : sel.members)
                if (k < 0 || k >= size) throw ConfigError(what + ": index out of range");
            return;
        case AxisSelection::Mode::bounds: {
            if (!scheme) throw ConfigError(what + ": group bounds need a partition file");
            const int k = static_cast<int>(scheme->group_count());
            if (sel.lb < 0 || sel.lb > sel.ub || sel.ub > k)
                throw ConfigError(what + ": bounds (" + std::to_string(sel.lb) + "," + std::to_string(sel.ub) +
                                  ") invalid for " + std::to_string(k) + " groups");
            return;
        }
        case AxisSelection::Mode::one_of_levels:
            if (!scheme) throw ConfigError(what + ": one-of-levels needs a partition file");
            return;
    }
}

std::string join_names(const std::vector<const Group*>& groups, const std::vector<int>& ids) {
    std::string out;
    for (int g : ids) {
        if (!out.empty()) out += '+';
        out += groups[static_cast<std::size_t>(g)]->name;
    }
    return out.empty() ? "-" : out;
}

/// Names of level-0 groups whose union is exactly `members`, if any.
std::optional<std::string> as_group_union(const Bitset& members, const PartitionScheme& scheme) {
    Bitset covered(members.size());
    std::string out;
    for (const auto& g : scheme.groups()) {
        if (!g.members.intersects(members)) continue;
        if (!g.members.is_subset_of(members)) return std::nullopt;
        covered |= g.members;
        if (!out.empty()) out += '+';
        out += g.name;
    }
    if (covered != members || out.empty()) return std::nullopt;
    return out;
}

std::string describe_axis(const AxisSelection& sel, const std::vector<int>& ids, const Bitset& members,
                          const std::optional<PartitionScheme>& scheme, const TransactionDatabase& db, Axis axis) {
    switch (sel.mode) {
        case AxisSelection::Mode::all: return "ALL";
        case AxisSelection::Mode::bounds:
        case AxisSelection::Mode::one_of_levels: return join_names(flatten_groups(*scheme), ids);
        case AxisSelection::Mode::list: break;
    }
    if (members.all()) return "ALL";
    if (scheme)
        if (auto names = as_group_union(members, *scheme)) return *names;
    if (members.none()) return "-";
    if (axis == Axis::items) return format_itemset(db, members);
    std::string out;
    for (int j : to_indices(members)) {
        if (!out.empty()) out += ' ';
        out += std::to_string(j + 1);
    }
    return out;
}

}  // namespace

std::string to_string(EngineKind e) {
    switch (e) {
        case EngineKind::cp: return "cp";
        case EngineKind::baseline: return "baseline";
        case EngineKind::oracle: return "oracle";
    }
    return "?";
}

EngineKind parse_engine(std::string_view name) {
    if (name == "cp") return EngineKind::cp;
    if (name == "baseline") return EngineKind::baseline;
    if (name == "oracle") return EngineKind::oracle;
    throw ConfigError("unknown engine '" + std::string(name) + "'");
}

QuerySpec parse_query_spec(std::istream& in) {
    QuerySpec spec;
    std::set<std::string> seen;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto colon = s.find(':');
        if (colon == std::string_view::npos) throw ParseError(line_no, "expected 'key: value'");
        const std::string key(trim(s.substr(0, colon)));
        const auto value = words(s.substr(colon + 1));
        if (!seen.insert(key).second) throw ParseError(line_no, "repeated key '" + key + "'");

        if (key == "theta") {
            if (value.size() != 1) throw ParseError(line_no, "theta takes one value");
            spec.theta = value[0];
        } else if (key == "minsize") {
            if (value.size() != 1) throw ParseError(line_no, "minsize takes one value");
            spec.min_size = require_int(value[0], line_no);
        } else if (key == "closed") {
            if (value.size() != 1 || (value[0] != "true" && value[0] != "false"))
                throw ParseError(line_no, "closed takes true or false");
            spec.closed = value[0] == "true";
        } else if (key == "span") {
            if (value.size() != 2) throw ParseError(line_no, "span takes '<lb> <ub>'");
            spec.span = std::pair{require_int(value[0], line_no), require_int(value[1], line_no)};
        } else if (key == "require") {
            spec.require = value;
        } else if (key == "forbid") {
            spec.forbid = value;
        } else if (key == "items_active") {
            if (value.empty()) throw ParseError(line_no, "items_active needs a value");
            spec.items_active = value;
        } else if (key == "trans_active") {
            if (value.empty()) throw ParseError(line_no, "trans_active needs a value");
            spec.trans_active = value;
        } else {
            throw ParseError(line_no, "unknown key '" + key + "'");
        }
    }
    if (spec.theta.empty()) throw ParseError(line_no, "missing required key 'theta'");
    return spec;
}

QuerySpec parse_query_spec_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_query_spec(in);
}

QuerySpec load_query_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return parse_query_spec(in);
}

void validate_query(const Query& q, const TransactionDatabase& db, const Schemes& schemes) {
    if (q.items.mode == AxisSelection::Mode::one_of_levels)
        throw ConfigError("items_active does not accept one-of-levels");
    check_axis(q.items, schemes.items, db.item_count(), "items_active");
    check_axis(q.transactions, schemes.transactions, db.transaction_count(), "trans_active");
    if (q.min_size < 1 || q.min_size > db.item_count())
        throw ConfigError("minsize " + std::to_string(q.min_size) + " outside 1.." + std::to_string(db.item_count()));
    if (q.span) {
        if (!schemes.items) throw ConfigError("span needs an item partition file");
        const int k = static_cast<int>(schemes.items->group_count());
        if (q.span->first < 0 || q.span->first > q.span->second || q.span->second > k)
            throw ConfigError("span bounds invalid for " + std::to_string(k) + " item groups");
    }
    for (int i : q.required)
        if (i < 0 || i >= db.item_count()) throw ConfigError("required item out of range");
    for (int i : q.forbidden)
        if (i < 0 || i >= db.item_count()) throw ConfigError("forbidden item out of range");
}

Query build_query(const QuerySpec& spec, const TransactionDatabase& db, const Schemes& schemes) {
    Query q;
    q.theta = Threshold::parse(spec.theta);
    q.closed = spec.closed.value_or(true);
    q.min_size = spec.min_size.value_or(1);
    q.span = spec.span;
    for (const auto& name : spec.require) q.required.push_back(resolve_item(db, name));
    for (const auto& name : spec.forbid) q.forbidden.push_back(resolve_item(db, name));
    q.items = resolve_axis(spec.items_active, db, Axis::items);
    q.transactions = resolve_axis(spec.trans_active, db, Axis::transactions);
    validate_query(q, db, schemes);
    return q;
}

namespace templates {

Query fci(Threshold theta) {
    Query q;
    q.theta = theta;
    return q;
}

Query fci_span(Threshold theta, int lb, int ub) {
    Query q = fci(theta);
    q.span = std::pair{lb, ub};
    return q;
}

Query item_groups(Threshold theta, int lb, int ub) {
    Query q = fci(theta);
    q.items = AxisSelection::bounds(lb, ub);
    return q;
}

Query transaction_groups(Threshold theta, int lb, int ub) {
    Query q = fci(theta);
    q.transactions = AxisSelection::bounds(lb, ub);
    return q;
}

Query item_and_transaction_groups(Threshold theta, int lb_items, int ub_items, int lb_trans, int ub_trans) {
    Query q = fci(theta);
    q.items = AxisSelection::bounds(lb_items, ub_items);
    q.transactions = AxisSelection::bounds(lb_trans, ub_trans);
    return q;
}

Query entity_with_item(Threshold theta, int item) {
    Query q = fci(theta);
    q.closed = false;
    q.required = {item};
    q.items = AxisSelection::list({item});
    q.transactions = AxisSelection::one_of_levels();
    return q;
}

}  // namespace templates

bool canonical_less(const SolutionPair& a, const SolutionPair& b) {
    if (a.choice.item_groups != b.choice.item_groups) return a.choice.item_groups < b.choice.item_groups;
    if (a.choice.transaction_groups != b.choice.transaction_groups)
        return a.choice.transaction_groups < b.choice.transaction_groups;
    if (a.mask.items != b.mask.items) return to_indices(a.mask.items) < to_indices(b.mask.items);
    if (a.mask.transactions != b.mask.transactions)
        return to_indices(a.mask.transactions) < to_indices(b.mask.transactions);
    return to_indices(a.itemset) < to_indices(b.itemset);
}

void canonical_sort(std::vector<SolutionPair>& pairs) { std::sort(pairs.begin(), pairs.end(), canonical_less); }

std::vector<const Group*> flatten_groups(const PartitionScheme& scheme) {
    std::vector<const Group*> out;
    for (const auto& level : scheme.levels)
        for (const auto& g : level.groups) out.push_back(&g);
    return out;
}

int category_span(const Bitset& itemset, const PartitionScheme& scheme) {
    int k = 0;
    for (const auto& g : scheme.groups()) k += g.members.intersects(itemset);
    return k;
}

std::string describe_items(const SolutionPair& pair, const Query& query, const TransactionDatabase& db,
                           const Schemes& schemes) {
    return describe_axis(query.items, pair.choice.item_groups, pair.mask.items, schemes.items, db, Axis::items);
}

std::string describe_transactions(const SolutionPair& pair, const Query& query, const TransactionDatabase& db,
                                  const Schemes& schemes) {
    return describe_axis(query.transactions, pair.choice.transaction_groups, pair.mask.transactions,
                         schemes.transactions, db, Axis::transactions);
}

std::string format_pair(const SolutionPair& pair, const Query& query, const TransactionDatabase& db,
                        const Schemes& schemes) {
    return describe_items(pair, query, db, schemes) + '\t' + describe_transactions(pair, query, db, schemes) + '\t' +
           format_itemset(db, pair.itemset) + '\t' + std::to_string(pair.support) + '\t' +
           std::to_string(pair.support) + '/' + std::to_string(pair.active);
}

}  // namespace itemcp
