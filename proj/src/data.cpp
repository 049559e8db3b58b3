#include "treebench/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "treebench/rng.hpp"

namespace treebench {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.push_back("");
    return out;
}

std::optional<double> parse_number(const std::string& s) {
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc{} || ptr != end) return std::nullopt;
    return v;
}

std::string format_threshold(double t) {
    std::ostringstream os;
    os.precision(12);
    os << t;
    return os.str();
}

} // namespace

RawDataset load_csv(const std::string& path, const std::string& label_column,
                    const std::vector<std::pair<std::string, ColumnKind>>& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_csv_line(line);

    int label_idx = -1;
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == label_column) label_idx = static_cast<int>(i);
    if (label_idx < 0) throw std::runtime_error("missing label column: " + label_column);

    std::vector<std::vector<std::string>> cells(header.size());
    std::vector<std::string> raw_labels;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size())
            throw std::runtime_error("ragged row in " + path + ": expected " +
                                     std::to_string(header.size()) + " fields, got " +
                                     std::to_string(fields.size()));
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (fields[i].empty())
                throw std::runtime_error("missing value in column '" + header[i] + "'");
            if (static_cast<int>(i) == label_idx) raw_labels.push_back(fields[i]);
            else cells[i].push_back(fields[i]);
        }
    }
    if (raw_labels.empty()) throw std::runtime_error("no data rows in " + path);

    std::set<std::string> label_values(raw_labels.begin(), raw_labels.end());
    if (label_values.size() != 2)
        throw std::runtime_error("label column must have exactly 2 distinct values, found " +
                                 std::to_string(label_values.size()));
    const std::string& positive = *std::next(label_values.begin());  // lexicographically larger -> 1

    RawDataset d;
    for (const auto& l : raw_labels) d.labels.push_back(l == positive ? 1 : 0);

    for (std::size_t i = 0; i < header.size(); ++i) {
        if (static_cast<int>(i) == label_idx) continue;
        ColumnKind kind;
        bool overridden = false;
        for (const auto& [name, k] : schema)
            if (name == header[i]) { kind = k; overridden = true; }
        if (!overridden) {
            bool all_numeric = true;
            for (const auto& v : cells[i])
                if (!parse_number(v)) { all_numeric = false; break; }
            kind = all_numeric ? ColumnKind::Numeric : ColumnKind::Categorical;
        }
        d.columns.push_back(RawColumn{header[i], kind});
        if (kind == ColumnKind::Numeric) {
            std::vector<double> vals;
            vals.reserve(cells[i].size());
            for (const auto& v : cells[i]) {
                auto num = parse_number(v);
                if (!num)
                    throw std::runtime_error("mixed column '" + header[i] +
                                             "': non-numeric value '" + v +
                                             "' in a numeric column");
                vals.push_back(*num);
            }
            d.numeric.push_back(std::move(vals));
            d.category.emplace_back();
        } else {
            d.numeric.emplace_back();
            d.category.push_back(cells[i]);
        }
    }
    return d;
}

Binarizer binarize_fit(const RawDataset& raw, int quantile_count, int max_categories) {
    if (quantile_count < 1) throw std::invalid_argument("quantile_count must be >= 1");
    if (max_categories < 1) throw std::invalid_argument("max_categories must be >= 1");
    Binarizer b;
    for (int c = 0; c < raw.column_count(); ++c) {
        Binarizer::ColumnRule rule;
        rule.name = raw.columns[c].name;
        rule.kind = raw.columns[c].kind;
        if (rule.kind == ColumnKind::Numeric) {
            std::vector<double> sorted = raw.numeric[c];
            std::sort(sorted.begin(), sorted.end());
            int n = static_cast<int>(sorted.size());
            double max_value = sorted.back();
            for (int i = 1; i <= quantile_count; ++i) {
                // nearest-rank: value at ceil(level * n) in sorted order
                double level = static_cast<double>(i) / (quantile_count + 1);
                int rank = static_cast<int>(std::ceil(level * n));
                rank = std::clamp(rank, 1, n);
                double t = sorted[rank - 1];
                if (t >= max_value) continue;  // "value <= t" would be all-ones
                if (rule.thresholds.empty() || t > rule.thresholds.back())
                    rule.thresholds.push_back(t);
            }
        } else {
            std::map<std::string, int> freq;
            for (const auto& v : raw.category[c]) ++freq[v];
            std::vector<std::pair<std::string, int>> ordered(freq.begin(), freq.end());
            std::sort(ordered.begin(), ordered.end(), [](const auto& a, const auto& b) {
                if (a.second != b.second) return a.second > b.second;
                return a.first < b.first;
            });
            int keep = std::min<int>(max_categories, static_cast<int>(ordered.size()));
            for (int i = 0; i < keep; ++i) rule.categories.push_back(ordered[i].first);
            std::sort(rule.categories.begin(), rule.categories.end());
        }
        b.rules.push_back(std::move(rule));
    }
    return b;
}

Binarizer binarize_fit_midpoints(const RawDataset& raw) {
    Binarizer b;
    for (int c = 0; c < raw.column_count(); ++c) {
        Binarizer::ColumnRule rule;
        rule.name = raw.columns[c].name;
        rule.kind = raw.columns[c].kind;
        if (rule.kind == ColumnKind::Numeric) {
            std::vector<double> sorted = raw.numeric[c];
            std::sort(sorted.begin(), sorted.end());
            sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i)
                rule.thresholds.push_back((sorted[i] + sorted[i + 1]) / 2.0);
        } else {
            std::set<std::string> values(raw.category[c].begin(), raw.category[c].end());
            rule.categories.assign(values.begin(), values.end());
        }
        b.rules.push_back(std::move(rule));
    }
    return b;
}

namespace {

void check_schema(const Binarizer& b, const RawDataset& raw) {
    if (static_cast<int>(b.rules.size()) != raw.column_count())
        throw std::runtime_error("binarizer schema mismatch: column count differs");
    for (int c = 0; c < raw.column_count(); ++c) {
        if (b.rules[c].name != raw.columns[c].name || b.rules[c].kind != raw.columns[c].kind)
            throw std::runtime_error("binarizer schema mismatch at column '" +
                                     raw.columns[c].name + "'");
    }
}

struct Predicate {
    int column;
    int index_in_column;
    int global_index;
};

BitVec evaluate_predicate(const Binarizer& b, const RawDataset& raw, const Predicate& p) {
    const auto& rule = b.rules[p.column];
    int n = raw.row_count();
    BitVec bits(n);
    if (rule.kind == ColumnKind::Numeric) {
        double t = rule.thresholds[p.index_in_column];
        const auto& vals = raw.numeric[p.column];
        for (int i = 0; i < n; ++i)
            if (vals[i] <= t) bits.set(i);
    } else {
        const std::string& v = rule.categories[p.index_in_column];
        const auto& vals = raw.category[p.column];
        for (int i = 0; i < n; ++i)
            if (vals[i] == v) bits.set(i);
    }
    return bits;
}

std::string predicate_name(const Binarizer& b, const Predicate& p) {
    const auto& rule = b.rules[p.column];
    if (rule.kind == ColumnKind::Numeric)
        return rule.name + "<=" + format_threshold(rule.thresholds[p.index_in_column]);
    return rule.name + "=" + rule.categories[p.index_in_column];
}

std::vector<Predicate> all_predicates(const Binarizer& b) {
    std::vector<Predicate> ps;
    int global = 0;
    for (int c = 0; c < static_cast<int>(b.rules.size()); ++c)
        for (int i = 0; i < b.rules[c].predicate_count(); ++i)
            ps.push_back(Predicate{c, i, global++});
    return ps;
}

BitVec labels_bitvec(const RawDataset& raw) {
    BitVec labels(raw.row_count());
    for (int i = 0; i < raw.row_count(); ++i)
        if (raw.labels[i] == 1) labels.set(i);
    return labels;
}

} // namespace

BinaryDataset binarize_apply(const Binarizer& b, const RawDataset& raw) {
    check_schema(b, raw);
    BinaryDataset d;
    d.instance_count = raw.row_count();
    d.labels = labels_bitvec(raw);
    for (const Predicate& p : all_predicates(b)) {
        BitVec bits = evaluate_predicate(b, raw, p);
        int c = bits.count();
        if (c == 0 || c == d.instance_count) continue;  // degenerate on this data
        d.features.push_back(std::move(bits));
        d.feature_names.push_back(predicate_name(b, p));
        d.predicate_ids.push_back(p.global_index);
    }
    d.feature_count = static_cast<int>(d.features.size());
    return d;
}

BinaryDataset binarize_apply(const Binarizer& b, const RawDataset& raw,
                             const std::vector<int>& keep_predicates) {
    check_schema(b, raw);
    std::vector<Predicate> all = all_predicates(b);
    BinaryDataset d;
    d.instance_count = raw.row_count();
    d.labels = labels_bitvec(raw);
    for (int g : keep_predicates) {
        if (g < 0 || g >= static_cast<int>(all.size()))
            throw std::out_of_range("predicate index out of range: " + std::to_string(g));
        const Predicate& p = all[g];
        d.features.push_back(evaluate_predicate(b, raw, p));
        d.feature_names.push_back(predicate_name(b, p));
        d.predicate_ids.push_back(g);
    }
    d.feature_count = static_cast<int>(d.features.size());
    return d;
}

std::vector<std::pair<std::vector<int>, std::vector<int>>>
stratified_kfold(const BinaryDataset& d, int k, std::uint64_t seed) {
    int n = d.instance_count;
    if (k < 2 || k > n)
        throw std::invalid_argument("fold count " + std::to_string(k) +
                                    " out of range for " + std::to_string(n) + " instances");
    Rng rng(seed);
    std::vector<std::vector<int>> folds(k);
    int cursor = 0;
    for (int cls = 0; cls < 2; ++cls) {
        std::vector<int> members;
        for (int i = 0; i < n; ++i)
            if ((d.labels.test(i) ? 1 : 0) == cls) members.push_back(i);
        rng.shuffle(members);
        // The fold cursor carries over between classes so remainders spread
        // across different folds instead of piling onto the first ones.
        for (int idx : members) {
            folds[cursor % k].push_back(idx);
            ++cursor;
        }
    }
    std::vector<std::pair<std::vector<int>, std::vector<int>>> out;
    for (int f = 0; f < k; ++f) {
        std::vector<int> val = folds[f];
        std::sort(val.begin(), val.end());
        std::vector<int> train;
        train.reserve(n - val.size());
        for (int g = 0; g < k; ++g)
            if (g != f) train.insert(train.end(), folds[g].begin(), folds[g].end());
        std::sort(train.begin(), train.end());
        out.emplace_back(std::move(train), std::move(val));
    }
    return out;
}

BinaryDataset subset_dataset(const BinaryDataset& d, const std::vector<int>& indices) {
    BinaryDataset out;
    out.instance_count = static_cast<int>(indices.size());
    out.feature_count = d.feature_count;
    out.feature_names = d.feature_names;
    out.predicate_ids = d.predicate_ids;
    out.labels = BitVec(out.instance_count);
    for (int j = 0; j < out.instance_count; ++j)
        if (d.labels.test(indices[j])) out.labels.set(j);
    for (int f = 0; f < d.feature_count; ++f) {
        BitVec bits(out.instance_count);
        for (int j = 0; j < out.instance_count; ++j)
            if (d.features[f].test(indices[j])) bits.set(j);
        out.features.push_back(std::move(bits));
    }
    return out;
}

} // namespace treebench
