#include "treebench/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "treebench/greedy.hpp"
#include "treebench/metrics.hpp"
#include "treebench/parallel.hpp"
#include "treebench/synth.hpp"

namespace treebench::cli {

namespace {

using nlohmann::json;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_raw(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
    auto end = std::chrono::steady_clock::now();
    return std::chrono::duration<double, std::milli>(end - start).count();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    return out;
}

std::vector<std::pair<std::string, ColumnKind>> load_schema(const std::string& path) {
    std::vector<std::pair<std::string, ColumnKind>> schema;
    if (path.empty()) return schema;
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error("schema line must be 'name,kind': " + line);
        std::string name = line.substr(0, comma);
        std::string kind = line.substr(comma + 1);
        if (kind == "numeric") schema.emplace_back(name, ColumnKind::Numeric);
        else if (kind == "categorical") schema.emplace_back(name, ColumnKind::Categorical);
        else throw std::runtime_error("unknown column kind in schema: " + kind);
    }
    return schema;
}

struct Loaded {
    RawDataset raw;
    Binarizer binarizer;
    BinaryDataset train;
};

Loaded load_and_binarize(const DataInput& in, const std::string& numeric_mode = "binary") {
    Loaded l;
    l.raw = load_csv(in.path, in.label_column, load_schema(in.schema_path));
    l.binarizer = numeric_mode == "raw" ? binarize_fit_midpoints(l.raw)
                                        : binarize_fit(l.raw, in.quantiles, in.max_categories);
    l.train = binarize_apply(l.binarizer, l.raw);
    if (l.train.feature_count == 0)
        throw std::runtime_error("binarization produced no non-degenerate features");
    return l;
}

BinaryDataset load_aligned_test(const Loaded& l, const std::string& path, const DataInput& in) {
    RawDataset raw = load_csv(path, in.label_column, load_schema(in.schema_path));
    return binarize_apply(l.binarizer, raw, l.train.predicate_ids);
}

json model_json(const std::string& method, ObjectiveKind objective, double value,
                const Tree& tree, const BinaryDataset& train) {
    TreeMetrics tm = tree_metrics(tree, train);
    return json{{"format", "treebench-tree v1"},
                {"method", method},
                {"objective", objective_name(objective)},
                {"objective_value", value},
                {"serialized", serialize(tree)},
                {"tree", tree_to_json(tree)},
                {"feature_names", train.feature_names},
                {"metrics",
                 {{"leaves", tm.leaves},
                  {"branching_nodes", tm.branching_nodes},
                  {"depth", tm.depth},
                  {"train_question_length", tm.question_length},
                  {"train_accuracy", accuracy(tree, train)}}}};
}

constexpr const char* kReportVersion = "# treebench-report v1";

std::string report_header(bool timings) {
    std::string h =
        "run,method,objective,tune,seed,chosen,train_acc,test_acc,leaves,depth,"
        "question_length,tdr,fdr,error";
    if (timings) h += ",wall_ms";
    return h;
}

struct ReportRow {
    std::string run;
    std::string method;
    std::string objective;
    std::string tune = "none";
    std::uint64_t seed = 0;
    std::string chosen;
    std::string train_acc, test_acc;
    std::string leaves, depth, qlen;
    std::string tdr, fdr;
    std::string error;
    double wall_ms = 0.0;

    std::string line(bool timings) const {
        std::string s = run + "," + method + "," + objective + "," + tune + "," +
                        std::to_string(seed) + "," + chosen + "," + train_acc + "," + test_acc +
                        "," + leaves + "," + depth + "," + qlen + "," + tdr + "," + fdr + "," +
                        error;
        if (timings) s += "," + fmt(wall_ms);
        return s;
    }
};

void fill_tree_fields(ReportRow& row, const Tree& tree, const BinaryDataset& train,
                      const BinaryDataset* test, const Tree* truth) {
    row.train_acc = fmt(accuracy(tree, train));
    const BinaryDataset& eval = test ? *test : train;
    TreeMetrics tm = tree_metrics(tree, eval);
    if (test) row.test_acc = fmt(accuracy(tree, *test));
    row.leaves = std::to_string(tm.leaves);
    row.depth = std::to_string(tm.depth);
    row.qlen = fmt(tm.question_length);
    if (truth) {
        auto [tdr, fdr] = tdr_fdr(tree, *truth);
        row.tdr = fmt(tdr);
        row.fdr = fmt(fdr);
    }
}

} // namespace

int run_fit(const FitConfig& cfg) {
    if (cfg.method != "optimal" && cfg.method != "greedy")
        throw std::invalid_argument("method must be optimal or greedy");
    if (cfg.method == "optimal" && cfg.numeric_mode == "raw")
        throw std::invalid_argument("raw-threshold mode applies to the greedy method only");

    Loaded l = load_and_binarize(cfg.data, cfg.method == "greedy" ? cfg.numeric_mode : "binary");
    BinaryDataset test;
    bool has_test = !cfg.test_path.empty();
    if (has_test) test = load_aligned_test(l, cfg.test_path, cfg.data);

    Tree tree;
    double value = 0.0;
    auto start = std::chrono::steady_clock::now();
    if (cfg.method == "optimal") {
        int branching = cfg.max_branching >= 0 ? cfg.max_branching : (1 << cfg.max_depth) - 1;
        SolveLimits limits{cfg.max_depth, branching};
        Penalties pen{cfg.lambda, cfg.omega, cfg.min_support};
        Solution sol = solve(l.train, cfg.objective, cfg.params, limits, pen,
                             SolveOptions{cfg.use_depth2});
        tree = sol.tree;
        value = sol.objective_value;
    } else {
        GrowConfig gc;
        gc.kind = cfg.objective;
        gc.params = cfg.params;
        gc.max_depth = cfg.no_depth_limit ? kGreedyDepthCap : cfg.max_depth;
        gc.min_support = cfg.min_support;
        gc.numeric_mode =
            cfg.numeric_mode == "raw" ? NumericMode::RawThresholds : NumericMode::BinaryFeatures;
        tree = cfg.ccp ? fit_tuned(l.train, gc, cfg.seed) : grow(l.train, gc);
        value = objective_of_tree(tree, l.train, cfg.objective, cfg.params, Penalties{});
    }
    double wall = elapsed_ms(start);

    if (!cfg.out_model.empty()) {
        json j = model_json(cfg.method, cfg.objective, value, tree, l.train);
        if (has_test) j["metrics"]["test_accuracy"] = accuracy(tree, test);
        open_out(cfg.out_model) << j.dump(2) << "\n";
    }
    if (!cfg.out_report.empty()) {
        ReportRow row;
        row.run = "fit";
        row.method = cfg.method;
        row.objective = objective_name(cfg.objective);
        row.tune = cfg.method == "greedy" && cfg.ccp ? "ccp" : "none";
        row.seed = cfg.seed;
        row.chosen = "";
        row.wall_ms = wall;
        fill_tree_fields(row, tree, l.train, has_test ? &test : nullptr, nullptr);
        auto out = open_out(cfg.out_report);
        out << kReportVersion << "\n" << report_header(cfg.timings) << "\n";
        out << row.line(cfg.timings) << "\n";
    }
    std::cout << "fitted " << cfg.method << " tree: " << serialize(tree)
              << " objective=" << fmt(value) << "\n";
    return 0;
}

int run_tune(const TuneConfig& cfg) {
    Loaded l = load_and_binarize(cfg.data);
    TuneResult res = tune(l.train, cfg.objective, cfg.params, cfg.method, cfg.k, cfg.max_depth,
                          cfg.seed, cfg.jobs, SolveOptions{cfg.use_depth2});

    if (!cfg.out_cv_table.empty()) {
        auto out = open_out(cfg.out_cv_table);
        out << "# treebench-cv v1\nsetting,fold,val_accuracy,failed\n";
        for (const auto& row : res.table)
            out << fmt(row.setting) << "," << row.fold << "," << fmt(row.val_accuracy) << ","
                << (row.failed ? 1 : 0) << "\n";
    }
    if (!cfg.out_model.empty()) {
        json j = model_json("optimal", cfg.objective, res.final.objective_value, res.final.tree,
                            l.train);
        j["tune_method"] = tune_method_name(cfg.method);
        j["chosen_setting"] = res.chosen_setting;
        if (!cfg.test_path.empty()) {
            BinaryDataset test = load_aligned_test(l, cfg.test_path, cfg.data);
            j["metrics"]["test_accuracy"] = accuracy(res.final.tree, test);
        }
        open_out(cfg.out_model) << j.dump(2) << "\n";
    }
    std::cout << "tuned " << tune_method_name(cfg.method) << ": chosen setting "
              << fmt(res.chosen_setting) << ", tree " << serialize(res.final.tree) << "\n";
    return 0;
}

namespace {

void write_raw_csv(const std::string& path, const RawDataset& raw) {
    auto out = open_out(path);
    for (int c = 0; c < raw.column_count(); ++c) out << raw.columns[c].name << ",";
    out << "y\n";
    for (int r = 0; r < raw.row_count(); ++r) {
        for (int c = 0; c < raw.column_count(); ++c) {
            if (raw.columns[c].kind == ColumnKind::Numeric) out << fmt_raw(raw.numeric[c][r]);
            else out << raw.category[c][r];
            out << ",";
        }
        out << raw.labels[r] << "\n";
    }
}

} // namespace

int run_synth(const SynthConfig& cfg) {
    if (cfg.kind == "tree") {
        SyntheticTreeConfig tc;
        tc.n = cfg.n;
        tc.p = cfg.p;
        tc.depth = cfg.depth;
        tc.feature_noise = cfg.feature_noise;
        tc.class_noise = cfg.class_noise;
        tc.test_per_leaf = cfg.test_per_leaf;
        tc.min_leaf = cfg.min_leaf;
        tc.seed = cfg.seed;
        SyntheticBundle b = gen_tree_dataset(tc);
        if (!cfg.out_train.empty()) write_raw_csv(cfg.out_train, b.train_raw);
        if (!cfg.out_test.empty()) write_raw_csv(cfg.out_test, b.test_raw);
        if (!cfg.out_truth.empty()) {
            json thresholds = json::array();
            for (const auto& rule : b.binarizer.rules)
                thresholds.push_back(json{{"column", rule.name}, {"thresholds", rule.thresholds}});
            json j{{"format", "treebench-truth v1"},
                   {"kind", "tree"},
                   {"feasible", b.feasible},
                   {"seed", cfg.seed},
                   {"tree", tree_to_json(b.truth)},
                   {"serialized", serialize(b.truth)},
                   {"truth_features", b.truth_features},
                   {"feature_names", b.train.feature_names},
                   {"binarizer", thresholds}};
            open_out(cfg.out_truth) << j.dump(2) << "\n";
        }
        std::cout << "synth tree: " << b.truth.leaf_count() << " truth leaves, train " << cfg.n
                  << ", test " << b.test.instance_count
                  << (b.feasible ? "" : " (infeasible truth, degenerate bundle)") << "\n";
        return 0;
    }
    if (cfg.kind == "linear") {
        SyntheticLinearResult r = gen_linear_dataset(cfg.n, cfg.p, cfg.feature_noise,
                                                     cfg.class_noise, cfg.test_size, cfg.seed);
        if (!cfg.out_train.empty()) write_raw_csv(cfg.out_train, r.train_raw);
        if (!cfg.out_test.empty()) write_raw_csv(cfg.out_test, r.test_raw);
        std::cout << "synth linear: train " << cfg.n << ", test " << cfg.test_size << "\n";
        return 0;
    }
    throw std::invalid_argument("synth kind must be tree or linear");
}

namespace {

struct MethodSpec {
    std::string label;
    enum class Algo { Optimal, GreedyCcp, GreedyPlain } algo;
    TuneMethod tune = TuneMethod::None;
    int depth_override = -1;
};

MethodSpec parse_method(const std::string& token) {
    MethodSpec spec;
    spec.label = token;
    std::vector<std::string> parts;
    std::stringstream ss(token);
    std::string part;
    while (std::getline(ss, part, ':')) parts.push_back(part);
    if (parts.size() >= 3 && parts[2].size() > 1 && parts[2][0] == 'd')
        spec.depth_override = std::stoi(parts[2].substr(1));
    if (parts.empty()) throw std::invalid_argument("empty method spec");
    if (parts[0] == "optimal") {
        spec.algo = MethodSpec::Algo::Optimal;
        spec.tune = tune_method_from_name(parts.size() > 1 ? parts[1] : "none");
    } else if (parts[0] == "greedy") {
        std::string mode = parts.size() > 1 ? parts[1] : "none";
        if (mode == "ccp") spec.algo = MethodSpec::Algo::GreedyCcp;
        else if (mode == "none") spec.algo = MethodSpec::Algo::GreedyPlain;
        else throw std::invalid_argument("greedy mode must be ccp or none: " + token);
    } else {
        throw std::invalid_argument("unknown method: " + token);
    }
    return spec;
}

std::vector<MethodSpec> parse_methods(const std::string& csv) {
    std::vector<MethodSpec> out;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) out.push_back(parse_method(token));
    }
    if (out.empty()) throw std::invalid_argument("no methods given");
    return out;
}

} // namespace

int run_benchmark(const BenchConfig& cfg) {
    std::vector<MethodSpec> methods = parse_methods(cfg.methods);
    bool data_mode = !cfg.data.path.empty();

    Loaded fixed;
    BinaryDataset fixed_test;
    bool fixed_has_test = false;
    if (data_mode) {
        fixed = load_and_binarize(cfg.data);
        if (!cfg.test_path.empty()) {
            fixed_test = load_aligned_test(fixed, cfg.test_path, cfg.data);
            fixed_has_test = true;
        }
    }

    std::ofstream out;
    bool to_file = !cfg.out.empty();
    if (to_file) out = open_out(cfg.out);
    std::ostream& os = to_file ? static_cast<std::ostream&>(out) : std::cout;
    os << kReportVersion << "\n" << report_header(cfg.timings) << "\n";

    bool any_error = false;
    const int M = static_cast<int>(methods.size());
    for (int rep = 0; rep < cfg.reps; ++rep) {
        std::uint64_t rep_seed = cfg.seed + static_cast<std::uint64_t>(rep);

        BinaryDataset train, test;
        const Tree* truth = nullptr;
        Tree truth_tree;
        bool has_test = false;
        std::string gen_error;
        if (data_mode) {
            train = fixed.train;
            if (fixed_has_test) { test = fixed_test; has_test = true; }
        } else {
            try {
                if (cfg.synth_kind == "tree") {
                    SyntheticTreeConfig tc;
                    tc.n = cfg.n;
                    tc.p = cfg.p;
                    tc.depth = cfg.depth;
                    tc.feature_noise = cfg.feature_noise;
                    tc.class_noise = cfg.class_noise;
                    tc.test_per_leaf = cfg.test_per_leaf;
                    tc.seed = rep_seed;
                    SyntheticBundle b = gen_tree_dataset(tc);
                    train = std::move(b.train);
                    test = std::move(b.test);
                    truth_tree = b.truth;
                    truth = &truth_tree;
                    has_test = true;
                } else if (cfg.synth_kind == "linear") {
                    auto r = gen_linear_dataset(cfg.n, cfg.p, cfg.feature_noise, cfg.class_noise,
                                                cfg.test_per_leaf * (1 << cfg.depth), rep_seed);
                    train = std::move(r.train);
                    test = std::move(r.test);
                    has_test = true;
                } else {
                    throw std::invalid_argument("synth kind must be tree or linear");
                }
            } catch (const std::exception& e) {
                gen_error = e.what();
            }
        }

        std::vector<ReportRow> rows(M);
        run_indexed_jobs(M, cfg.jobs, [&](int mi) {
            const MethodSpec& m = methods[mi];
            ReportRow& row = rows[mi];
            row.run = data_mode ? cfg.data.path : cfg.synth_kind + "-" + std::to_string(rep);
            row.method = m.label;
            row.seed = rep_seed;
            int depth = m.depth_override >= 0 ? m.depth_override : cfg.max_depth;
            if (!gen_error.empty()) {
                row.error = gen_error;
                return;
            }
            try {
                auto start = std::chrono::steady_clock::now();
                Tree tree;
                if (m.algo == MethodSpec::Algo::Optimal) {
                    row.objective = objective_name(cfg.objective);
                    row.tune = tune_method_name(m.tune);
                    TuneResult res = tune(train, cfg.objective, ObjectiveParams{}, m.tune, cfg.k,
                                          depth, rep_seed, 1, SolveOptions{cfg.use_depth2});
                    tree = res.final.tree;
                    row.chosen = fmt(res.chosen_setting);
                } else {
                    row.objective = objective_name(cfg.greedy_objective);
                    row.tune = m.algo == MethodSpec::Algo::GreedyCcp ? "ccp" : "none";
                    GrowConfig gc;
                    gc.kind = cfg.greedy_objective;
                    gc.max_depth = depth;
                    tree = m.algo == MethodSpec::Algo::GreedyCcp ? fit_tuned(train, gc, rep_seed)
                                                                 : grow(train, gc);
                }
                row.wall_ms = elapsed_ms(start);
                fill_tree_fields(row, tree, train, has_test ? &test : nullptr, truth);
            } catch (const std::exception& e) {
                row.error = e.what();
            }
        });

        for (const auto& row : rows) {
            if (!row.error.empty()) any_error = true;
            os << row.line(cfg.timings) << "\n";
        }
        os.flush();
    }
    return any_error ? 2 : 0;
}

int run_swa_sweep(const SwaConfig& cfg) {
    BinaryDataset train, test;
    if (!cfg.data.path.empty()) {
        Loaded l = load_and_binarize(cfg.data);
        train = l.train;
        if (cfg.test_path.empty())
            throw std::invalid_argument("swa needs a test set for test accuracy");
        test = load_aligned_test(l, cfg.test_path, cfg.data);
    } else if (cfg.synth_kind == "tree") {
        SyntheticTreeConfig tc;
        tc.n = cfg.n;
        tc.p = cfg.p;
        tc.depth = cfg.depth;
        tc.feature_noise = cfg.feature_noise;
        tc.class_noise = cfg.class_noise;
        tc.seed = cfg.seed;
        SyntheticBundle b = gen_tree_dataset(tc);
        train = std::move(b.train);
        test = std::move(b.test);
    } else if (cfg.synth_kind == "linear") {
        auto r = gen_linear_dataset(cfg.n, cfg.p, cfg.feature_noise, cfg.class_noise,
                                    cfg.n * 8, cfg.seed);
        train = std::move(r.train);
        test = std::move(r.test);
    } else {
        throw std::invalid_argument("swa needs either --data or a synth kind");
    }

    // (leaves -> test accuracies); duplicate sizes average before SWA.
    std::map<int, std::vector<double>> observed;
    if (cfg.method == "optimal") {
        for (int b = 0; b < cfg.max_size; ++b) {
            SolveLimits limits{cfg.max_depth, b};
            Solution sol = solve(train, cfg.objective, ObjectiveParams{}, limits, Penalties{},
                                 SolveOptions{cfg.use_depth2});
            observed[sol.tree.leaf_count()].push_back(accuracy(sol.tree, test));
        }
    } else if (cfg.method == "greedy") {
        GrowConfig gc;
        gc.kind = cfg.objective;
        gc.max_depth = cfg.max_depth;
        Tree full = grow(train, gc);
        CcpPath path = ccp_path(full, train);
        for (double alpha : ccp_midpoints(path)) {
            Tree pruned = prune_at(path, alpha);
            observed[pruned.leaf_count()].push_back(accuracy(pruned, test));
        }
    } else {
        throw std::invalid_argument("swa method must be optimal or greedy");
    }
    if (observed.empty()) throw std::runtime_error("empty sweep");

    ParetoCurve curve;
    for (const auto& [size, accs] : observed) {
        double mean = 0.0;
        for (double a : accs) mean += a;
        curve.points[size] = mean / accs.size();
    }
    double value = swa(curve, cfg.max_size);

    if (!cfg.out.empty()) {
        auto out = open_out(cfg.out);
        out << "# treebench-swa v1\nleaves,test_accuracy\n";
        for (const auto& [size, acc] : curve.points) out << size << "," << fmt(acc) << "\n";
        out << "# swa_" << cfg.max_size << " = " << fmt(value) << "\n";
    }
    std::cout << "swa_" << cfg.max_size << " " << fmt(value) << "\n";
    return 0;
}

int run_rank(const RankConfig& cfg) {
    std::ifstream in(cfg.scores_path);
    if (!in) throw std::runtime_error("cannot open scores file: " + cfg.scores_path);
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty scores file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    ScoreMatrix m;
    {
        std::stringstream ss(line);
        std::string tok;
        bool first = true;
        while (std::getline(ss, tok, ',')) {
            if (first) { first = false; continue; }  // dataset id column
            m.methods.push_back(tok);
        }
    }
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string tok;
        std::vector<double> row;
        bool first = true;
        while (std::getline(ss, tok, ',')) {
            if (first) {
                m.datasets.push_back(tok);
                first = false;
            } else {
                row.push_back(std::stod(tok));
            }
        }
        m.scores.push_back(std::move(row));
    }

    std::vector<double> ranks = average_ranks(m);
    double cd = nemenyi_cd(static_cast<int>(m.methods.size()),
                           static_cast<int>(m.datasets.size()), cfg.alpha);
    json j{{"format", "treebench-rank v1"},
           {"methods", m.methods},
           {"mean_ranks", ranks},
           {"alpha", cfg.alpha},
           {"datasets", m.datasets.size()},
           {"critical_distance", cd}};
    if (!cfg.out.empty()) open_out(cfg.out) << j.dump(2) << "\n";
    else std::cout << j.dump(2) << "\n";
    return 0;
}

int run_binarize(const BinarizeConfig& cfg) {
    Loaded l = load_and_binarize(cfg.data, cfg.numeric_mode);
    auto write_binary = [&](const std::string& path, const BinaryDataset& d) {
        auto out = open_out(path);
        for (const auto& name : d.feature_names) out << name << ",";
        out << cfg.data.label_column << "\n";
        for (int i = 0; i < d.instance_count; ++i) {
            for (int f = 0; f < d.feature_count; ++f) out << (d.features[f].test(i) ? 1 : 0) << ",";
            out << (d.labels.test(i) ? 1 : 0) << "\n";
        }
    };
    if (!cfg.out_train.empty()) write_binary(cfg.out_train, l.train);
    if (!cfg.test_path.empty() && !cfg.out_test.empty())
        write_binary(cfg.out_test, load_aligned_test(l, cfg.test_path, cfg.data));
    std::cout << "binarized " << l.train.instance_count << " instances into "
              << l.train.feature_count << " features\n";
    return 0;
}

} // namespace treebench::cli
