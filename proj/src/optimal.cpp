#include "treebench/optimal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace treebench {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-12;

// Lexicographic order of the decimal representations, as they appear in the
// canonical serialization (a proper prefix sorts first because the successor
// characters '(' and ',' precede every digit).
int cmp_decimal(int a, int b) {
    char ba[16], bb[16];
    int la = std::snprintf(ba, sizeof ba, "%d", a);
    int lb = std::snprintf(bb, sizeof bb, "%d", b);
    int c = std::memcmp(ba, bb, static_cast<std::size_t>(std::min(la, lb)));
    if (c != 0) return c;
    return la - lb;
}

struct SubResult {
    bool feasible = false;
    double value = kInf;
    int nodes = 0;
    Tree tree;
};

// True if `cand` beats `best` under (value, node count, canonical text).
bool improves(const SubResult& cand, const SubResult& best) {
    if (!cand.feasible) return false;
    if (!best.feasible) return true;
    if (cand.value < best.value - kTieTol) return true;
    if (cand.value > best.value + kTieTol) return false;
    if (cand.nodes != best.nodes) return cand.nodes < best.nodes;
    return canonical_less(cand.tree, best.tree);
}

struct CacheKey {
    BitVec subset;
    int depth;
    int budget;
    std::uint64_t h1, h2;

    CacheKey(const BitVec& s, int d, int b) : subset(s), depth(d), budget(b) {
        s.hash128(static_cast<std::uint64_t>(d) * 131 + static_cast<std::uint64_t>(b), h1, h2);
    }
};

struct CacheKeyHash {
    std::size_t operator()(const CacheKey& k) const { return k.h1; }
};

struct CacheKeyEq {
    // 128-bit hash first as a fast reject, then the full key so a collision
    // can never alias two subproblems.
    bool operator()(const CacheKey& a, const CacheKey& b) const {
        return a.h1 == b.h1 && a.h2 == b.h2 && a.depth == b.depth && a.budget == b.budget &&
               a.subset == b.subset;
    }
};

int majority_label(int n, int pos) { return pos > n - pos ? 1 : 0; }

class Solver {
public:
    Solver(const BinaryDataset& d, ObjectiveKind kind, const ObjectiveParams& params,
           const Penalties& pen, const SolveOptions& opts)
        : d_(d), obj_(kind, params), pen_(pen), opts_(opts),
          leaf_penalty_(pen.lambda_cost * d.instance_count) {}

    SubResult solve_root(int max_depth, int max_branching) {
        BitVec all = BitVec::ones(d_.instance_count);
        return solve_node(all, d_.instance_count, d_.positives(), max_depth, max_branching);
    }

    CacheStats stats() const { return stats_; }

private:
    double leaf_cost(int n, int pos) const {
        return obj_.from_counts(n, pos) + leaf_penalty_;
    }

    SubResult leaf_result(int n, int pos) const {
        SubResult r;
        if (n < pen_.min_support) return r;
        r.feasible = true;
        r.value = leaf_cost(n, pos);
        r.nodes = 0;
        r.tree = Tree::leaf(majority_label(n, pos));
        return r;
    }

    SubResult solve_node(const BitVec& S, int n, int pos, int depth, int budget) {
        // A tree with b branching nodes never exceeds depth b, and depth d
        // admits at most 2^d - 1 branchings; canonicalizing merges states.
        depth = std::min(depth, budget);
        if (depth < 30) budget = std::min(budget, (1 << depth) - 1);
        if (depth == 0 || budget == 0) return leaf_result(n, pos);

        CacheKey key(S, depth, budget);
        auto it = cache_.find(key);
        if (it != cache_.end()) {
            ++stats_.hits;
            return it->second;
        }

        SubResult best = leaf_result(n, pos);
        if (opts_.use_depth2_solver && depth == 1) {
            SubResult stump = best_stump(S, n, pos);
            if (improves(stump, best)) best = stump;
        } else if (opts_.use_depth2_solver && depth == 2) {
            return solve_depth2_block(S, n, pos, budget);  // caches its own entries
        } else {
            for (int f = 0; f < d_.feature_count; ++f) {
                int n1 = BitVec::count_and(S, d_.features[f]);
                int n0 = n - n1;
                if (n1 < pen_.min_support || n0 < pen_.min_support) continue;
                int pos1 = BitVec::count_and3(S, d_.features[f], d_.labels);
                int pos0 = pos - pos1;
                BitVec S1 = S & d_.features[f];
                BitVec S0 = S.and_not(d_.features[f]);
                double base = pen_.omega_cost * n;
                for (int l = 0; l < budget; ++l) {
                    int r = budget - 1 - l;
                    SubResult left = solve_node(S0, n0, pos0, depth - 1, l);
                    if (!left.feasible) continue;
                    if (base + left.value > best.value + kTieTol && best.feasible) continue;
                    SubResult right = solve_node(S1, n1, pos1, depth - 1, r);
                    if (!right.feasible) continue;
                    SubResult cand;
                    cand.feasible = true;
                    cand.value = base + left.value + right.value;
                    cand.nodes = 1 + left.nodes + right.nodes;
                    if (!best.feasible || cand.value <= best.value + kTieTol) {
                        cand.tree = Tree::branch(f, left.tree, right.tree);
                        if (improves(cand, best)) best = cand;
                    }
                }
            }
        }

        ++stats_.subproblems;
        cache_.emplace(std::move(key), best);
        return best;
    }

    // ---- terminal solvers on co-occurrence counts ----

    struct SideChoice {
        bool feasible = false;
        double value = kInf;
        int nodes = 0;       // 0 leaf, 1 split
        int feature = -1;
        int lab_left = 0;    // leaf label lives here when nodes == 0
        int lab_right = 0;
    };

    // Order matching canonical serialization: a split ("B...") precedes a
    // leaf ("L...").
    static bool side_text_less(const SideChoice& a, const SideChoice& b) {
        if (a.nodes != b.nodes) return a.nodes > b.nodes;
        if (a.nodes == 0) return a.lab_left < b.lab_left;
        int c = cmp_decimal(a.feature, b.feature);
        if (c != 0) return c < 0;
        if (a.lab_left != b.lab_left) return a.lab_left < b.lab_left;
        return a.lab_right < b.lab_right;
    }

    static bool side_improves(const SideChoice& cand, const SideChoice& best) {
        if (!cand.feasible) return false;
        if (!best.feasible) return true;
        if (cand.value < best.value - kTieTol) return true;
        if (cand.value > best.value + kTieTol) return false;
        if (cand.nodes != best.nodes) return cand.nodes < best.nodes;
        return side_text_less(cand, best);
    }

    struct LeafOpt {
        bool feasible;
        double value;
        int label;
    };

    LeafOpt leaf_opt(int n, int pos) const {
        if (n < pen_.min_support) return {false, kInf, 0};
        return {true, leaf_cost(n, pos), majority_label(n, pos)};
    }

    SideChoice side_leaf(int n, int pos) const {
        SideChoice s;
        LeafOpt l = leaf_opt(n, pos);
        if (!l.feasible) return s;
        s.feasible = true;
        s.value = l.value;
        s.nodes = 0;
        s.lab_left = l.label;
        return s;
    }

    Tree side_tree(const SideChoice& s) const {
        if (s.nodes == 0) return Tree::leaf(s.lab_left);
        return Tree::branch(s.feature, Tree::leaf(s.lab_left), Tree::leaf(s.lab_right));
    }

    SubResult best_stump(const BitVec& S, int n, int pos) {
        SubResult best;
        int best_f = -1;
        double best_v = kInf;
        int lab0 = 0, lab1 = 0;
        for (int f = 0; f < d_.feature_count; ++f) {
            int n1 = BitVec::count_and(S, d_.features[f]);
            int n0 = n - n1;
            if (n1 < pen_.min_support || n0 < pen_.min_support) continue;
            int pos1 = BitVec::count_and3(S, d_.features[f], d_.labels);
            int pos0 = pos - pos1;
            double v = pen_.omega_cost * n + leaf_cost(n0, pos0) + leaf_cost(n1, pos1);
            bool take = best_f < 0 || v < best_v - kTieTol ||
                        (v <= best_v + kTieTol && cmp_decimal(f, best_f) < 0);
            if (take) {
                best_f = f;
                best_v = v;
                lab0 = majority_label(n0, pos0);
                lab1 = majority_label(n1, pos1);
            }
        }
        if (best_f < 0) return best;
        best.feasible = true;
        best.value = best_v;
        best.nodes = 1;
        best.tree = Tree::branch(best_f, Tree::leaf(lab0), Tree::leaf(lab1));
        return best;
    }

    // Solves the depth-2 subproblem for all budgets 1..3 from single and
    // pairwise feature counts, caching each budget's entry.
    SubResult solve_depth2_block(const BitVec& S, int n, int pos, int budget) {
        const int F = d_.feature_count;
        std::vector<BitVec> SF(F);
        std::vector<int> cnt(F), cpos(F);
        for (int f = 0; f < F; ++f) {
            SF[f] = S & d_.features[f];
            cnt[f] = SF[f].count();
            cpos[f] = BitVec::count_and(SF[f], d_.labels);
        }
        // pair[i][j] = counts inside S & f_i & f_j
        std::vector<int> pair_cnt(static_cast<std::size_t>(F) * F, 0);
        std::vector<int> pair_pos(static_cast<std::size_t>(F) * F, 0);
        for (int i = 0; i < F; ++i) {
            for (int j = i + 1; j < F; ++j) {
                int c = BitVec::count_and(SF[i], d_.features[j]);
                int p = BitVec::count_and3(SF[i], d_.features[j], d_.labels);
                pair_cnt[i * F + j] = pair_cnt[j * F + i] = c;
                pair_pos[i * F + j] = pair_pos[j * F + i] = p;
            }
        }

        SubResult best_by_budget[4];
        best_by_budget[0] = leaf_result(n, pos);
        for (int b = 1; b <= 3; ++b) best_by_budget[b] = best_by_budget[0];

        struct RootChoice {
            bool feasible = false;
            double value = kInf;
            int nodes = 0;
            int root = -1;
            SideChoice left, right;
        };
        auto root_improves = [](const RootChoice& cand, const RootChoice& best) {
            if (!cand.feasible) return false;
            if (!best.feasible) return true;
            if (cand.value < best.value - kTieTol) return true;
            if (cand.value > best.value + kTieTol) return false;
            if (cand.nodes != best.nodes) return cand.nodes < best.nodes;
            int c = cmp_decimal(cand.root, best.root);
            if (c != 0) return c < 0;
            if (side_text_less(cand.left, best.left)) return true;
            if (side_text_less(best.left, cand.left)) return false;
            return side_text_less(cand.right, best.right);
        };

        RootChoice best_root[4];  // best branch candidate per budget 1..3

        for (int r = 0; r < F; ++r) {
            int n1 = cnt[r], p1 = cpos[r];
            int n0 = n - n1, p0 = pos - p1;
            if (n1 < pen_.min_support || n0 < pen_.min_support) continue;
            double base = pen_.omega_cost * n;

            SideChoice left_leaf = side_leaf(n0, p0);
            SideChoice right_leaf = side_leaf(n1, p1);
            SideChoice left_split, right_split;
            for (int j = 0; j < F; ++j) {
                if (j == r) continue;
                int n11 = pair_cnt[r * F + j], p11 = pair_pos[r * F + j];
                int n10 = n1 - n11, p10 = p1 - p11;
                int n01 = cnt[j] - n11, p01 = cpos[j] - p11;
                int n00 = n0 - n01, p00 = p0 - p01;
                // left side of the root: instances with f_r = 0, split by f_j
                if (n00 >= pen_.min_support && n01 >= pen_.min_support) {
                    SideChoice c;
                    c.feasible = true;
                    c.nodes = 1;
                    c.feature = j;
                    c.value = pen_.omega_cost * n0 + leaf_cost(n00, p00) + leaf_cost(n01, p01);
                    c.lab_left = majority_label(n00, p00);
                    c.lab_right = majority_label(n01, p01);
                    if (side_improves(c, left_split)) left_split = c;
                }
                // right side: instances with f_r = 1, split by f_j
                if (n10 >= pen_.min_support && n11 >= pen_.min_support) {
                    SideChoice c;
                    c.feasible = true;
                    c.nodes = 1;
                    c.feature = j;
                    c.value = pen_.omega_cost * n1 + leaf_cost(n10, p10) + leaf_cost(n11, p11);
                    c.lab_left = majority_label(n10, p10);
                    c.lab_right = majority_label(n11, p11);
                    if (side_improves(c, right_split)) right_split = c;
                }
            }

            const SideChoice* left_opts[2] = {&left_leaf, &left_split};
            const SideChoice* right_opts[2] = {&right_leaf, &right_split};
            for (const SideChoice* lo : left_opts) {
                if (!lo->feasible) continue;
                for (const SideChoice* ro : right_opts) {
                    if (!ro->feasible) continue;
                    RootChoice cand;
                    cand.feasible = true;
                    cand.root = r;
                    cand.left = *lo;
                    cand.right = *ro;
                    cand.nodes = 1 + lo->nodes + ro->nodes;
                    cand.value = base + lo->value + ro->value;
                    for (int b = cand.nodes; b <= 3; ++b)
                        if (root_improves(cand, best_root[b])) best_root[b] = cand;
                }
            }
        }

        for (int b = 1; b <= 3; ++b) {
            if (!best_root[b].feasible) continue;
            SubResult cand;
            cand.feasible = true;
            cand.value = best_root[b].value;
            cand.nodes = best_root[b].nodes;
            cand.tree = Tree::branch(best_root[b].root, side_tree(best_root[b].left),
                                     side_tree(best_root[b].right));
            if (improves(cand, best_by_budget[b])) best_by_budget[b] = cand;
        }

        // Cache the canonical entries this block resolves: (depth 1, budget 1)
        // and (depth 2, budgets 2..3).
        {
            CacheKey k1(S, 1, 1);
            if (cache_.find(k1) == cache_.end()) {
                ++stats_.subproblems;
                cache_.emplace(std::move(k1), best_by_budget[1]);
            }
        }
        for (int b = 2; b <= 3; ++b) {
            CacheKey kb(S, 2, b);
            if (cache_.find(kb) == cache_.end()) {
                ++stats_.subproblems;
                cache_.emplace(std::move(kb), best_by_budget[b]);
            }
        }
        return best_by_budget[std::min(budget, 3)];
    }

    const BinaryDataset& d_;
    LeafObjective obj_;
    Penalties pen_;
    SolveOptions opts_;
    double leaf_penalty_;
    std::unordered_map<CacheKey, SubResult, CacheKeyHash, CacheKeyEq> cache_;
    CacheStats stats_;
};

void validate(const BinaryDataset& d, const SolveLimits& limits, const Penalties& pen) {
    if (d.instance_count < 1) throw std::invalid_argument("dataset is empty");
    if (limits.max_depth < 0 || limits.max_branching < 0)
        throw std::invalid_argument("limits must be nonnegative");
    if (limits.max_depth < 30 && limits.max_branching > (1 << limits.max_depth) - 1)
        throw std::invalid_argument("max_branching exceeds 2^max_depth - 1");
    if (pen.lambda_cost < 0.0 || pen.omega_cost < 0.0)
        throw std::invalid_argument("penalties must be nonnegative");
    if (pen.min_support < 1) throw std::invalid_argument("min_support must be >= 1");
    if (pen.min_support > d.instance_count)
        throw std::runtime_error("min_support " + std::to_string(pen.min_support) +
                                 " exceeds instance count: no feasible tree");
}

} // namespace

Solution solve(const BinaryDataset& d, ObjectiveKind kind, const ObjectiveParams& params,
               const SolveLimits& limits, const Penalties& pen, const SolveOptions& opts) {
    validate(d, limits, pen);
    Solver solver(d, kind, params, pen, opts);
    SubResult root = solver.solve_root(limits.max_depth, limits.max_branching);
    if (!root.feasible) throw std::runtime_error("no feasible tree under the given limits");
    Solution sol;
    sol.tree = root.tree;
    sol.objective_value = objective_of_tree(root.tree, d, kind, params, pen);
    sol.cache_stats = solver.stats();
    return sol;
}

namespace {

double objective_rec(const Tree& t, const BinaryDataset& d, int node, const BitVec& subset,
                     const LeafObjective& obj, const Penalties& pen, double leaf_penalty) {
    const auto& nd = t.node(node);
    int n = subset.count();
    if (nd.is_leaf()) {
        if (n < pen.min_support) return kInf;
        return obj.from_counts(n, BitVec::count_and(subset, d.labels)) + leaf_penalty;
    }
    double left = objective_rec(t, d, nd.left, subset.and_not(d.features[nd.feature]), obj, pen,
                                leaf_penalty);
    double right = objective_rec(t, d, nd.right, subset & d.features[nd.feature], obj, pen,
                                 leaf_penalty);
    return pen.omega_cost * n + left + right;
}

} // namespace

double objective_of_tree(const Tree& t, const BinaryDataset& d, ObjectiveKind kind,
                         const ObjectiveParams& params, const Penalties& pen) {
    if (t.max_feature_id() >= d.feature_count)
        throw std::out_of_range("tree references feature id beyond dataset feature count");
    LeafObjective obj(kind, params);
    return objective_rec(t, d, 0, BitVec::ones(d.instance_count), obj, pen,
                         pen.lambda_cost * d.instance_count);
}

namespace {

std::vector<Tree> enumerate_rec(int features, int depth, int budget,
                                std::vector<std::vector<std::vector<Tree>>>& memo) {
    if (depth < 0) depth = 0;
    budget = std::min(budget, depth < 30 ? (1 << depth) - 1 : budget);
    if (budget < 0) budget = 0;
    auto& slot = memo[depth][budget];
    if (!slot.empty()) return slot;
    std::vector<Tree> out;
    std::set<std::string> seen;
    auto add = [&](const Tree& t) {
        if (seen.insert(serialize(t)).second) out.push_back(t);
    };
    add(Tree::leaf(0));
    if (depth > 0 && budget > 0) {
        for (int f = 0; f < features; ++f) {
            for (int l = 0; l < budget; ++l) {
                const auto& lefts = enumerate_rec(features, depth - 1, l, memo);
                const auto& rights = enumerate_rec(features, depth - 1, budget - 1 - l, memo);
                for (const Tree& lt : lefts)
                    for (const Tree& rt : rights) add(Tree::branch(f, lt, rt));
            }
        }
    }
    slot = out;
    return slot;
}

} // namespace

std::vector<Tree> enumerate_trees(const BinaryDataset& d, const SolveLimits& limits) {
    if (d.feature_count > 10 || limits.max_depth > 3)
        throw std::invalid_argument(
            "enumerate_trees guard: requires feature_count <= 10 and max_depth <= 3");
    std::vector<std::vector<std::vector<Tree>>> memo(
        limits.max_depth + 1, std::vector<std::vector<Tree>>(
                                  std::max(limits.max_branching, 0) + 1));
    return enumerate_rec(d.feature_count, limits.max_depth, limits.max_branching, memo);
}

} // namespace treebench
