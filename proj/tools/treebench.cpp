#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "treebench/cli.hpp"

namespace tb = treebench;

namespace {

void add_data_flags(CLI::App* cmd, tb::cli::DataInput& data) {
    cmd->add_option("--data", data.path, "training CSV with header row");
    cmd->add_option("--label", data.label_column, "label column name");
    cmd->add_option("--schema", data.schema_path, "optional column-kind file (name,kind lines)");
    cmd->add_option("--quantiles", data.quantiles, "quantile thresholds per numeric column");
    cmd->add_option("--max-categories", data.max_categories, "retained categories per column");
}

std::string objective_help() {
    std::string s = "objective kind:";
    for (int i = 0; i < tb::kObjectiveKindCount; ++i)
        s += " " + tb::objective_name(static_cast<tb::ObjectiveKind>(i));
    return s;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"treebench: optimal and greedy decision trees over binary features"};
    app.require_subcommand(1);

    tb::cli::FitConfig fit;
    std::string fit_objective = "accuracy";
    auto* cmd_fit = app.add_subcommand("fit", "train a single tree");
    add_data_flags(cmd_fit, fit.data);
    cmd_fit->add_option("--test", fit.test_path, "test CSV (binarized with train thresholds)");
    cmd_fit->add_option("--method", fit.method, "optimal | greedy");
    cmd_fit->add_option("--objective", fit_objective, objective_help());
    cmd_fit->add_option("--max-depth", fit.max_depth, "maximum tree depth");
    cmd_fit->add_option("--max-branching", fit.max_branching, "branching node limit (default 2^d-1)");
    cmd_fit->add_option("--lambda", fit.lambda, "per-leaf complexity cost factor");
    cmd_fit->add_option("--omega", fit.omega, "question-length cost factor");
    cmd_fit->add_option("--min-support", fit.min_support, "hard minimum leaf size");
    cmd_fit->add_flag("--no-depth-limit", fit.no_depth_limit, "greedy: cap depth at 20 instead");
    cmd_fit->add_flag("--ccp", fit.ccp, "greedy: cost-complexity tuned selection");
    std::string fit_tune;
    cmd_fit->add_option("--tune", fit_tune, "none | ccp (alias for --ccp)");
    cmd_fit->add_option("--numeric-mode", fit.numeric_mode, "binary | raw (greedy only)");
    cmd_fit->add_option("--seed", fit.seed, "RNG seed");
    cmd_fit->add_flag("!--no-depth2", fit.use_depth2, "disable the depth-2 terminal solver");
    cmd_fit->add_flag("--timings", fit.timings, "append wall_ms to the report");
    cmd_fit->add_option("--out", fit.out_model, "model JSON path");
    cmd_fit->add_option("--report", fit.out_report, "report CSV path");

    tb::cli::TuneConfig tune;
    std::string tune_method = "size", tune_objective = "accuracy";
    auto* cmd_tune = app.add_subcommand("tune", "cross-validated complexity tuning (optimal)");
    add_data_flags(cmd_tune, tune.data);
    cmd_tune->add_option("--test", tune.test_path, "test CSV");
    cmd_tune->add_option("--method,--tune", tune_method, "none|depth|size|cost|support|qlen|smooth");
    cmd_tune->add_option("--objective", tune_objective, objective_help());
    cmd_tune->add_option("--k", tune.k, "grid size");
    cmd_tune->add_option("--max-depth", tune.max_depth, "maximum tree depth");
    cmd_tune->add_option("--seed", tune.seed, "RNG seed");
    cmd_tune->add_option("--jobs", tune.jobs, "parallel workers");
    cmd_tune->add_flag("!--no-depth2", tune.use_depth2, "disable the depth-2 terminal solver");
    cmd_tune->add_option("--out", tune.out_model, "model JSON path");
    cmd_tune->add_option("--cv-table", tune.out_cv_table, "per-setting CV table CSV");

    tb::cli::SynthConfig synth;
    auto* cmd_synth = app.add_subcommand("synth", "generate synthetic benchmark data");
    cmd_synth->add_option("--kind", synth.kind, "tree | linear");
    cmd_synth->add_option("--n", synth.n, "train instances");
    cmd_synth->add_option("--p", synth.p, "numeric features");
    cmd_synth->add_option("--depth", synth.depth, "true tree depth");
    cmd_synth->add_option("--feature-noise", synth.feature_noise, "uniform noise half-width");
    cmd_synth->add_option("--class-noise", synth.class_noise, "label flip fraction");
    cmd_synth->add_option("--test-per-leaf", synth.test_per_leaf, "test instances per truth leaf");
    cmd_synth->add_option("--test-size", synth.test_size, "test instances (linear)");
    cmd_synth->add_option("--min-leaf", synth.min_leaf, "minimum train instances per truth leaf");
    cmd_synth->add_option("--seed", synth.seed, "RNG seed");
    cmd_synth->add_option("--out-train", synth.out_train, "train CSV path");
    cmd_synth->add_option("--out-test", synth.out_test, "test CSV path");
    cmd_synth->add_option("--out-truth", synth.out_truth, "truth tree JSON path");

    tb::cli::BenchConfig bench;
    std::string bench_objective = "accuracy", bench_greedy_objective = "gini";
    auto* cmd_bench = app.add_subcommand("bench", "replicated method-matrix benchmark");
    cmd_bench->add_option("--synth", bench.synth_kind, "tree | linear");
    add_data_flags(cmd_bench, bench.data);
    cmd_bench->add_option("--test", bench.test_path, "test CSV (data mode)");
    cmd_bench->add_option("--n", bench.n, "train instances");
    cmd_bench->add_option("--p", bench.p, "numeric features");
    cmd_bench->add_option("--depth", bench.depth, "true tree depth");
    cmd_bench->add_option("--feature-noise", bench.feature_noise, "feature noise half-width");
    cmd_bench->add_option("--class-noise", bench.class_noise, "label flip fraction");
    cmd_bench->add_option("--test-per-leaf", bench.test_per_leaf, "test instances per truth leaf");
    cmd_bench->add_option("--reps", bench.reps, "replications");
    cmd_bench->add_option("--methods", bench.methods,
                          "comma list: optimal:<tune> | greedy:ccp | greedy:none [:d<depth>]");
    cmd_bench->add_option("--objective", bench_objective, "optimal objective");
    cmd_bench->add_option("--greedy-objective", bench_greedy_objective, "greedy objective");
    cmd_bench->add_option("--max-depth", bench.max_depth, "depth limit for all methods");
    cmd_bench->add_option("--k", bench.k, "tuning grid size");
    cmd_bench->add_option("--seed", bench.seed, "base seed; rep r uses seed+r");
    cmd_bench->add_option("--jobs", bench.jobs, "parallel workers per replication");
    cmd_bench->add_flag("!--no-depth2", bench.use_depth2, "disable the depth-2 terminal solver");
    cmd_bench->add_flag("--timings", bench.timings, "append wall_ms to the report");
    cmd_bench->add_option("--out", bench.out, "report CSV path (default stdout)");

    tb::cli::SwaConfig swa;
    std::string swa_objective = "accuracy";
    auto* cmd_swa = app.add_subcommand("swa", "size sweep and size-weighted accuracy");
    add_data_flags(cmd_swa, swa.data);
    cmd_swa->add_option("--test", swa.test_path, "test CSV (data mode)");
    cmd_swa->add_option("--synth", swa.synth_kind, "tree | linear (instead of --data)");
    cmd_swa->add_option("--n", swa.n, "train instances");
    cmd_swa->add_option("--p", swa.p, "numeric features");
    cmd_swa->add_option("--depth", swa.depth, "true tree depth");
    cmd_swa->add_option("--feature-noise", swa.feature_noise, "feature noise half-width");
    cmd_swa->add_option("--class-noise", swa.class_noise, "label flip fraction");
    cmd_swa->add_option("--method", swa.method, "optimal | greedy");
    cmd_swa->add_option("--objective", swa_objective, objective_help());
    cmd_swa->add_option("--max-depth", swa.max_depth, "solver depth limit");
    cmd_swa->add_option("--max-size", swa.max_size, "SWA upper leaf count n");
    cmd_swa->add_option("--seed", swa.seed, "RNG seed");
    cmd_swa->add_flag("!--no-depth2", swa.use_depth2, "disable the depth-2 terminal solver");
    cmd_swa->add_option("--out", swa.out, "curve CSV path");

    tb::cli::RankConfig rank;
    auto* cmd_rank = app.add_subcommand("rank", "average ranks and Nemenyi critical distance");
    cmd_rank->add_option("--scores", rank.scores_path, "score matrix CSV (rows=datasets)")
        ->required();
    cmd_rank->add_option("--alpha", rank.alpha, "0.05 or 0.10");
    cmd_rank->add_option("--out", rank.out, "summary JSON path (default stdout)");

    tb::cli::BinarizeConfig binz;
    auto* cmd_binz = app.add_subcommand("binarize", "emit quantile/one-hot binarized data");
    add_data_flags(cmd_binz, binz.data);
    cmd_binz->add_option("--test", binz.test_path, "test CSV to binarize with train thresholds");
    cmd_binz->add_option("--numeric-mode", binz.numeric_mode, "binary | raw");
    cmd_binz->add_option("--out-train", binz.out_train, "binarized train CSV");
    cmd_binz->add_option("--out-test", binz.out_test, "binarized test CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;  // config error
    }

    try {
        if (cmd_fit->parsed()) {
            fit.objective = tb::objective_from_name(fit_objective);
            if (!fit_tune.empty()) {
                if (fit_tune != "none" && fit_tune != "ccp")
                    throw std::invalid_argument("fit --tune must be none or ccp");
                fit.ccp = fit_tune == "ccp";
            }
            return tb::cli::run_fit(fit);
        }
        if (cmd_tune->parsed()) {
            tune.method = tb::tune_method_from_name(tune_method);
            tune.objective = tb::objective_from_name(tune_objective);
            return tb::cli::run_tune(tune);
        }
        if (cmd_synth->parsed()) return tb::cli::run_synth(synth);
        if (cmd_bench->parsed()) {
            bench.objective = tb::objective_from_name(bench_objective);
            bench.greedy_objective = tb::objective_from_name(bench_greedy_objective);
            return tb::cli::run_benchmark(bench);
        }
        if (cmd_swa->parsed()) {
            swa.objective = tb::objective_from_name(swa_objective);
            return tb::cli::run_swa_sweep(swa);
        }
        if (cmd_rank->parsed()) return tb::cli::run_rank(rank);
        if (cmd_binz->parsed()) return tb::cli::run_binarize(binz);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
