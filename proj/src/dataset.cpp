#include "itemcp/dataset.hpp"

#include "itemcp/error.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace itemcp {

namespace {

std::string_view trim(std::string_view s) {
    auto is_space = [](char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; };
    while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t' && s[i] != '\r') ++i;
        if (i > start) out.push_back(s.substr(start, i - start));
    }
    return out;
}

std::optional<long long> to_int(std::string_view tok) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || ptr != tok.data() + tok.size()) return std::nullopt;
    return v;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "'");
    return in;
}

}  // namespace

TransactionDatabase::TransactionDatabase(int item_count, const std::vector<std::vector<int>>& rows) {
    if (item_count < 1 || rows.empty()) throw Error("empty database");
    const auto n = static_cast<std::size_t>(item_count);
    const auto m = rows.size();
    columns_.assign(n, Bitset(m));
    rows_.assign(m, Bitset(n));
    for (std::size_t j = 0; j < m; ++j) {
        for (int i : rows[j]) {
            if (i < 0 || i >= item_count) throw Error("item index out of range");
            rows_[j].set(static_cast<std::size_t>(i));
            columns_[static_cast<std::size_t>(i)].set(j);
        }
    }
}

std::string TransactionDatabase::item_label(int item) const {
    if (!labels_.empty()) return labels_[static_cast<std::size_t>(item)];
    return std::to_string(item + 1);
}

std::optional<int> TransactionDatabase::find_item(std::string_view label_or_id) const {
    for (std::size_t i = 0; i < labels_.size(); ++i)
        if (labels_[i] == label_or_id) return static_cast<int>(i);
    if (auto v = to_int(label_or_id); v && *v >= 1 && *v <= item_count()) return static_cast<int>(*v - 1);
    return std::nullopt;
}

void TransactionDatabase::set_item_labels(std::vector<std::string> labels) {
    if (labels.size() != static_cast<std::size_t>(item_count()))
        throw ConfigError("label count does not match item count");
    labels_ = std::move(labels);
}

TransactionDatabase parse_fimi(std::istream& in) {
    std::vector<std::vector<int>> rows;
    int max_item = 0;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto tokens = split_ws(line);
        if (tokens.empty()) continue;
        std::vector<int> row;
        row.reserve(tokens.size());
        for (auto tok : tokens) {
            auto v = to_int(tok);
            if (!v || *v < 1 || *v > 1'000'000'000)
                throw ParseError(line_no, "expected a positive item id, got '" + std::string(tok) + "'");
            row.push_back(static_cast<int>(*v) - 1);
            max_item = std::max(max_item, static_cast<int>(*v));
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw Error("empty database: no transactions");
    return TransactionDatabase(max_item, rows);
}

TransactionDatabase parse_fimi_text(std::string_view text) {
    std::istringstream in{std::string(text)};
    return parse_fimi(in);
}

TransactionDatabase load_fimi(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_fimi(in);
}

std::vector<std::string> parse_item_labels(std::istream& in, int item_count) {
    std::vector<std::string> labels(static_cast<std::size_t>(item_count));
    for (int i = 0; i < item_count; ++i) labels[static_cast<std::size_t>(i)] = std::to_string(i + 1);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;
        auto tokens = split_ws(s);
        if (tokens.size() != 2) throw ParseError(line_no, "expected 'id label'");
        auto id = to_int(tokens[0]);
        if (!id || *id < 1 || *id > item_count)
            throw ParseError(line_no, "item id out of range: '" + std::string(tokens[0]) + "'");
        labels[static_cast<std::size_t>(*id - 1)] = std::string(tokens[1]);
    }
    return labels;
}

std::optional<std::pair<std::size_t, std::size_t>> PartitionScheme::find(std::string_view name) const {
    for (std::size_t l = 0; l < levels.size(); ++l)
        for (std::size_t g = 0; g < levels[l].groups.size(); ++g)
            if (levels[l].groups[g].name == name) return std::pair{l, g};
    return std::nullopt;
}

PartitionScheme parse_partition(std::istream& in, const TransactionDatabase& db, Axis axis) {
    const int size = axis == Axis::items ? db.item_count() : db.transaction_count();
    PartitionScheme scheme;
    scheme.axis = axis;

    std::vector<Bitset> seen;  // per level
    auto start_level = [&] {
        scheme.levels.emplace_back();
        seen.emplace_back(static_cast<std::size_t>(size));
    };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        auto s = trim(line);
        if (s.empty() || s.front() == '#') continue;

        auto colon = s.find(':');
        if (colon == std::string_view::npos) {
            auto tokens = split_ws(s);
            if (tokens.size() == 2 && tokens[0] == "level" && to_int(tokens[1])) {
                start_level();
                continue;
            }
            throw ParseError(line_no, "expected 'name: id ...' or 'level <k>'");
        }
        if (scheme.levels.empty()) start_level();

        auto name = trim(s.substr(0, colon));
        if (name.empty()) throw ParseError(line_no, "missing group name");
        if (scheme.find(name)) throw ParseError(line_no, "duplicate group name '" + std::string(name) + "'");

        Group group{std::string(name), Bitset(static_cast<std::size_t>(size))};
        for (auto tok : split_ws(s.substr(colon + 1))) {
            std::optional<int> index;
            if (auto v = to_int(tok); v && *v >= 1 && *v <= size) index = static_cast<int>(*v - 1);
            else if (axis == Axis::items && !to_int(tok)) index = db.find_item(tok);
            if (!index)
                throw ParseError(line_no, "index out of range or unknown: '" + std::string(tok) + "'");
            auto idx = static_cast<std::size_t>(*index);
            if (seen.back().test(idx))
                throw ParseError(line_no, "overlapping groups: index '" + std::string(tok) +
                                              "' already belongs to a group of this level");
            seen.back().set(idx);
            group.members.set(idx);
        }
        scheme.levels.back().groups.push_back(std::move(group));
    }
    if (scheme.levels.empty()) start_level();

    for (std::size_t l = 0; l < scheme.levels.size(); ++l) {
        for (int idx = 0; idx < size; ++idx) {
            if (seen[l].test(static_cast<std::size_t>(idx))) continue;
            std::string name = axis == Axis::items ? db.item_label(idx) : "t" + std::to_string(idx + 1);
            if (scheme.find(name)) name = "#" + std::to_string(idx + 1) + "@" + std::to_string(l + 1);
            Group g{name, Bitset(static_cast<std::size_t>(size))};
            g.members.set(static_cast<std::size_t>(idx));
            scheme.levels[l].groups.push_back(std::move(g));
        }
    }
    return scheme;
}

PartitionScheme parse_partition_text(std::string_view text, const TransactionDatabase& db, Axis axis) {
    std::istringstream in{std::string(text)};
    return parse_partition(in, db, axis);
}

PartitionScheme load_partition(const std::string& path, const TransactionDatabase& db, Axis axis) {
    auto in = open_or_throw(path);
    return parse_partition(in, db, axis);
}

Bitset cover(const TransactionDatabase& db, const Bitset& itemset, const SubDatasetMask& mask) {
    Bitset result = mask.transactions;
    for (auto i = itemset.find_first(); i != Bitset::npos; i = itemset.find_next(i))
        result &= db.column(static_cast<int>(i));
    return result;
}

Frequency frequency(const TransactionDatabase& db, const Bitset& itemset, const SubDatasetMask& mask) {
    const auto active = mask.transactions.count();
    if (active == 0) throw UndefinedFrequency();
    return {cover(db, itemset, mask).count(), active};
}

Bitset closure(const TransactionDatabase& db, const Bitset& itemset, const SubDatasetMask& mask) {
    const Bitset covered = cover(db, itemset, mask);
    if (covered.none()) throw EmptyCover();
    Bitset result = mask.items;
    for (auto j = covered.find_first(); j != Bitset::npos; j = covered.find_next(j))
        result &= db.row(static_cast<int>(j));
    return result;
}

std::string format_itemset(const TransactionDatabase& db, const Bitset& itemset) {
    std::string out;
    for (auto i = itemset.find_first(); i != Bitset::npos; i = itemset.find_next(i)) {
        if (!out.empty()) out += ' ';
        out += db.item_label(static_cast<int>(i));
    }
    return out;
}

}  // namespace itemcp
