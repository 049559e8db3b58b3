#include "treebench/tree.hpp"

#include <algorithm>
#include <stdexcept>

#include "treebench/data.hpp"

namespace treebench {

Tree Tree::leaf(int label) {
    if (label != 0 && label != 1) throw std::invalid_argument("leaf label must be 0 or 1");
    Tree t;
    t.nodes_[0].label = label;
    return t;
}

Tree Tree::branch(int feature, const Tree& left, const Tree& right) {
    if (feature < 0) throw std::invalid_argument("branch feature id must be >= 0");
    Tree t;
    t.nodes_.clear();
    int nl = static_cast<int>(left.nodes_.size());
    t.nodes_.push_back(Node{feature, 1, 1 + nl, 0});
    for (const Node& n : left.nodes_) {
        Node c = n;
        if (!c.is_leaf()) { c.left += 1; c.right += 1; }
        t.nodes_.push_back(c);
    }
    for (const Node& n : right.nodes_) {
        Node c = n;
        if (!c.is_leaf()) { c.left += 1 + nl; c.right += 1 + nl; }
        t.nodes_.push_back(c);
    }
    return t;
}

namespace {

int depth_rec(const std::vector<Tree::Node>& nodes, int i) {
    const auto& n = nodes[i];
    if (n.is_leaf()) return 0;
    return 1 + std::max(depth_rec(nodes, n.left), depth_rec(nodes, n.right));
}

} // namespace

int Tree::depth() const { return depth_rec(nodes_, 0); }

int Tree::leaf_count() const {
    int c = 0;
    for (const auto& n : nodes_) c += n.is_leaf() ? 1 : 0;
    return c;
}

int Tree::max_feature_id() const {
    int m = -1;
    for (const auto& n : nodes_)
        if (!n.is_leaf()) m = std::max(m, n.feature);
    return m;
}

std::vector<int> Tree::used_features() const {
    std::vector<int> fs;
    for (const auto& n : nodes_)
        if (!n.is_leaf()) fs.push_back(n.feature);
    std::sort(fs.begin(), fs.end());
    fs.erase(std::unique(fs.begin(), fs.end()), fs.end());
    return fs;
}

namespace {

bool equal_rec(const Tree& a, int ia, const Tree& b, int ib) {
    const auto& na = a.node(ia);
    const auto& nb = b.node(ib);
    if (na.is_leaf() != nb.is_leaf()) return false;
    if (na.is_leaf()) return na.label == nb.label;
    if (na.feature != nb.feature) return false;
    return equal_rec(a, na.left, b, nb.left) && equal_rec(a, na.right, b, nb.right);
}

} // namespace

bool Tree::operator==(const Tree& o) const { return equal_rec(*this, 0, o, 0); }

Tree Tree::subtree(int node_index) const {
    const Node& n = nodes_[node_index];
    if (n.is_leaf()) return Tree::leaf(n.label);
    return Tree::branch(n.feature, subtree(n.left), subtree(n.right));
}

int predict(const Tree& t, const BitVec& instance) {
    int i = 0;
    while (!t.node(i).is_leaf()) {
        const auto& n = t.node(i);
        if (n.feature >= instance.size())
            throw std::out_of_range("feature id " + std::to_string(n.feature) +
                                    " out of range for instance of arity " +
                                    std::to_string(instance.size()));
        i = instance.test(n.feature) ? n.right : n.left;
    }
    return t.node(i).label;
}

namespace {

void check_arity(const Tree& t, const BinaryDataset& d) {
    if (t.max_feature_id() >= d.feature_count)
        throw std::out_of_range("tree references feature id beyond dataset feature count");
}

template <typename LeafFn>
void route(const Tree& t, const BinaryDataset& d, int node, const BitVec& subset, LeafFn&& fn) {
    const auto& n = t.node(node);
    if (n.is_leaf()) {
        fn(n, subset);
        return;
    }
    route(t, d, n.right, subset & d.features[n.feature], fn);
    route(t, d, n.left, subset.and_not(d.features[n.feature]), fn);
}

} // namespace

BitVec predict_all(const Tree& t, const BinaryDataset& d) {
    check_arity(t, d);
    BitVec out(d.instance_count);
    route(t, d, 0, BitVec::ones(d.instance_count), [&](const Tree::Node& n, const BitVec& s) {
        if (n.label == 1) out = out | s;
    });
    return out;
}

namespace {

void leaf_stats_rec(const Tree& t, const BinaryDataset& d, int node, const BitVec& subset,
                    std::vector<LeafStats>& out) {
    const auto& n = t.node(node);
    if (n.is_leaf()) {
        int cnt = subset.count();
        int pos = BitVec::count_and(subset, d.labels);
        out.push_back(LeafStats{cnt, std::min(pos, cnt - pos)});
        return;
    }
    leaf_stats_rec(t, d, n.left, subset.and_not(d.features[n.feature]), out);
    leaf_stats_rec(t, d, n.right, subset & d.features[n.feature], out);
}

} // namespace

std::vector<LeafStats> leaf_stats(const Tree& t, const BinaryDataset& d) {
    check_arity(t, d);
    std::vector<LeafStats> out;
    leaf_stats_rec(t, d, 0, BitVec::ones(d.instance_count), out);
    return out;
}

namespace {

// Sum over instances of branching nodes visited.
long long path_length_sum(const Tree& t, const BinaryDataset& d, int node, const BitVec& subset) {
    const auto& n = t.node(node);
    if (n.is_leaf()) return 0;
    return subset.count() +
           path_length_sum(t, d, n.left, subset.and_not(d.features[n.feature])) +
           path_length_sum(t, d, n.right, subset & d.features[n.feature]);
}

} // namespace

TreeMetrics tree_metrics(const Tree& t, const BinaryDataset& d) {
    check_arity(t, d);
    TreeMetrics m;
    m.leaves = t.leaf_count();
    m.branching_nodes = t.branching_count();
    m.depth = t.depth();
    long long total = path_length_sum(t, d, 0, BitVec::ones(d.instance_count));
    m.question_length = d.instance_count > 0 ? static_cast<double>(total) / d.instance_count : 0.0;
    return m;
}

namespace {

Tree relabel_rec(const Tree& t, const BinaryDataset& d, int node, const BitVec& subset) {
    const auto& n = t.node(node);
    if (n.is_leaf()) {
        int cnt = subset.count();
        int pos = BitVec::count_and(subset, d.labels);
        return Tree::leaf(pos > cnt - pos ? 1 : 0);
    }
    return Tree::branch(n.feature,
                        relabel_rec(t, d, n.left, subset.and_not(d.features[n.feature])),
                        relabel_rec(t, d, n.right, subset & d.features[n.feature]));
}

} // namespace

Tree relabel_by_majority(const Tree& t, const BinaryDataset& d) {
    check_arity(t, d);
    return relabel_rec(t, d, 0, BitVec::ones(d.instance_count));
}

namespace {

void serialize_rec(const Tree& t, int node, std::string& out) {
    const auto& n = t.node(node);
    if (n.is_leaf()) {
        out += 'L';
        out += static_cast<char>('0' + n.label);
        return;
    }
    out += 'B';
    out += std::to_string(n.feature);
    out += '(';
    serialize_rec(t, n.left, out);
    out += ',';
    serialize_rec(t, n.right, out);
    out += ')';
}

} // namespace

std::string serialize(const Tree& t) {
    std::string out;
    serialize_rec(t, 0, out);
    return out;
}

namespace {

struct Parser {
    const std::string& s;
    std::size_t pos = 0;

    char peek() const {
        if (pos >= s.size()) throw std::invalid_argument("tree text truncated: " + s);
        return s[pos];
    }
    char take() { char c = peek(); ++pos; return c; }
    void expect(char c) {
        if (take() != c)
            throw std::invalid_argument("malformed tree text near offset " + std::to_string(pos) +
                                        ": " + s);
    }

    Tree parse_node() {
        char c = take();
        if (c == 'L') {
            char l = take();
            if (l != '0' && l != '1') throw std::invalid_argument("bad leaf label in: " + s);
            return Tree::leaf(l - '0');
        }
        if (c != 'B') throw std::invalid_argument("expected 'L' or 'B' in: " + s);
        int feature = 0;
        bool any = false;
        while (pos < s.size() && s[pos] >= '0' && s[pos] <= '9') {
            feature = feature * 10 + (s[pos] - '0');
            ++pos;
            any = true;
        }
        if (!any) throw std::invalid_argument("missing feature id in: " + s);
        expect('(');
        Tree left = parse_node();
        expect(',');
        Tree right = parse_node();
        expect(')');
        return Tree::branch(feature, left, right);
    }
};

} // namespace

Tree deserialize(const std::string& text) {
    Parser p{text};
    Tree t = p.parse_node();
    if (p.pos != text.size())
        throw std::invalid_argument("trailing characters in tree text: " + text);
    return t;
}

namespace {

// Streams the canonical serialization one chunk at a time.
struct SerCursor {
    const Tree& t;
    // Pending work, top of stack last. node >= 0 emits that subtree; node < 0
    // emits the literal char.
    struct Item { int node; char lit; };
    std::vector<Item> stack;
    std::string buf;
    std::size_t buf_pos = 0;

    explicit SerCursor(const Tree& tree) : t(tree) { stack.push_back({0, 0}); }

    // Returns -1 when exhausted.
    int next_char() {
        while (buf_pos >= buf.size()) {
            if (stack.empty()) return -1;
            Item it = stack.back();
            stack.pop_back();
            buf.clear();
            buf_pos = 0;
            if (it.node < 0) {
                buf += it.lit;
                continue;
            }
            const auto& n = t.node(it.node);
            if (n.is_leaf()) {
                buf += 'L';
                buf += static_cast<char>('0' + n.label);
            } else {
                buf += 'B';
                buf += std::to_string(n.feature);
                buf += '(';
                stack.push_back({-1, ')'});
                stack.push_back({n.right, 0});
                stack.push_back({-1, ','});
                stack.push_back({n.left, 0});
            }
        }
        return static_cast<unsigned char>(buf[buf_pos++]);
    }
};

} // namespace

bool canonical_less(const Tree& a, const Tree& b) {
    SerCursor ca(a), cb(b);
    for (;;) {
        int x = ca.next_char();
        int y = cb.next_char();
        if (x != y) return x < y;
        if (x < 0) return false;  // equal
    }
}

nlohmann::json tree_to_json(const Tree& t) {
    const auto& n = t.node(0);
    if (n.is_leaf()) return nlohmann::json{{"label", n.label}};
    return nlohmann::json{{"feature", n.feature},
                          {"left", tree_to_json(t.subtree(n.left))},
                          {"right", tree_to_json(t.subtree(n.right))}};
}

Tree tree_from_json(const nlohmann::json& j) {
    if (j.contains("label")) return Tree::leaf(j.at("label").get<int>());
    return Tree::branch(j.at("feature").get<int>(),
                        tree_from_json(j.at("left")),
                        tree_from_json(j.at("right")));
}

} // namespace treebench
