// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: train, select, crossval, predict, benchmark.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <tsfuzzy/tsfuzzy.hpp>

namespace {

using namespace tsfuzzy;

struct RunConfig {
    std::string data_path;
    std::string model_path;
    std::string out_path;
    std::string scatter_path;
    std::string activity_column;
    std::string benchmark_kind = "two-regime";
    std::size_t clusters = 2;
    double fuzziness = 2.0;
    double epsilon = 1e-4;
    std::size_t max_iterations = 200;
    std::size_t restarts = 8;
    std::uint64_t seed = 42;
    std::optional<std::size_t> antecedent_keep;
    std::optional<std::size_t> consequent_keep;
    bool unit_weights = false;
    std::size_t benchmark_size = 200;
    double noise = 0.0;
};

// Metrics and tables print with 6 significant digits so logs compare across runs.
std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Data files keep full precision.
std::string fmt_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ClusteringConfig clustering_config(const RunConfig& run) {
    ClusteringConfig config;
    config.cluster_count = run.clusters;
    config.fuzziness = run.fuzziness;
    config.tolerance = run.epsilon;
    config.max_iterations = run.max_iterations;
    config.seed = run.seed;
    config.restarts = run.restarts;
    config.validate();
    return config;
}

PipelineConfig pipeline_config(const RunConfig& run) {
    PipelineConfig config;
    config.clustering = clustering_config(run);
    config.antecedent_keep = run.antecedent_keep;
    config.consequent_keep = run.consequent_keep;
    config.unit_weights = run.unit_weights;
    return config;
}

Provenance provenance_of(const RunConfig& run) {
    Provenance prov;
    prov.clusters = run.clusters;
    prov.fuzziness = run.fuzziness;
    prov.tolerance = run.epsilon;
    prov.max_iterations = run.max_iterations;
    prov.seed = run.seed;
    prov.antecedent_keep = run.antecedent_keep;
    prov.consequent_keep = run.consequent_keep;
    prov.unit_weights = run.unit_weights;
    return prov;
}

void print_selection(const SelectionReport& report, const Dataset& data) {
    std::cout << "consequent ranking (error-reduction ratios, prior-weighted):\n";
    const auto& ranking = report.consequents;
    for (std::size_t rank = 0; rank < ranking.aggregate_order.size(); ++rank) {
        const std::size_t column = ranking.aggregate_order[rank];
        double score = 0.0;
        for (std::size_t j = 0; j < ranking.columns.size(); ++j)
            if (ranking.columns[j] == column) score = ranking.aggregate_scores[j];
        std::cout << "  " << rank + 1 << ". " << data.column_names[column] << "  "
                  << fmt6(score) << '\n';
    }
    std::cout << "antecedent elimination (interclass separability):\n";
    if (report.dropped_antecedents.empty()) std::cout << "  (nothing removed)\n";
    for (std::size_t step = 0; step < report.dropped_antecedents.size(); ++step)
        std::cout << "  " << step + 1 << ". removed " <<
            data.column_names[report.dropped_antecedents[step]] << "  score-after "
                  << fmt6(report.antecedents.scores_after_removal[step]) << '\n';
    auto list_names = [&data](const std::vector<std::size_t>& columns) {
        std::string out;
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i > 0) out += ", ";
            out += data.column_names[columns[i]];
        }
        return out.empty() ? std::string("(none)") : out;
    };
    std::cout << "kept antecedents:   " << list_names(report.kept_antecedents) << '\n';
    std::cout << "dropped antecedents: " << list_names(report.dropped_antecedents) << '\n';
    std::cout << "kept consequents:   " << list_names(report.kept_consequents) << '\n';
    std::cout << "dropped consequents: " << list_names(report.dropped_consequents) << '\n';
}

int cmd_train(const RunConfig& run) {
    const Dataset data = load_csv(run.data_path, run.activity_column);
    const PipelineFit fit = fit_pipeline(data, pipeline_config(run));
    save_model(fit.model, run.model_path, provenance_of(run));
    const EvaluationResult eval = evaluate(fit.model, data);
    std::cout << "train-rmse " << fmt6(eval.rmse) << '\n';
    std::cout << "train-r2   " << fmt6(eval.r2) << '\n';
    std::cout << "iterations " << fit.clustering.iterations
              << (fit.clustering.converged ? " (converged)" : " (iteration budget reached)") << '\n';
    std::cout << "model written to " << run.model_path << '\n';
    return 0;
}

int cmd_select(const RunConfig& run) {
    const Dataset data = load_csv(run.data_path, run.activity_column);
    RunConfig selecting = run;
    if (!selecting.antecedent_keep && !selecting.consequent_keep)
        selecting.consequent_keep = data.width(); // rank everything, drop nothing
    const PipelineFit fit = fit_pipeline(data, pipeline_config(selecting));
    print_selection(*fit.selection, data);
    if (!run.out_path.empty()) {
        write_selection_rows(*fit.selection, data.column_names, run.out_path);
        std::cout << "selection rows written to " << run.out_path << '\n';
    }
    if (!run.model_path.empty()) {
        save_model(fit.model, run.model_path, provenance_of(selecting));
        std::cout << "reduced model written to " << run.model_path << '\n';
    }
    const EvaluationResult eval = evaluate(fit.model, data);
    std::cout << "train-rmse " << fmt6(eval.rmse) << '\n';
    std::cout << "train-r2   " << fmt6(eval.r2) << '\n';
    return 0;
}

int cmd_crossval(const RunConfig& run) {
    const Dataset data = load_csv(run.data_path, run.activity_column);
    const CrossValReport report = loo_crossval(data, pipeline_config(run));
    std::cout << "method      train-rmse  test-rmse   train-r2    test-r2\n";
    std::cout << "ts-fuzzy    " << fmt6(report.metrics.train_rmse) << "      "
              << fmt6(report.metrics.test_rmse) << "    " << fmt6(report.metrics.train_r2)
              << "    " << fmt6(report.metrics.test_r2) << '\n';
    std::size_t stubborn = 0;
    for (const FoldDiagnostic& fold : report.per_fold)
        if (!fold.converged) ++stubborn;
    if (stubborn > 0)
        std::cout << stubborn << " of " << report.per_fold.size()
                  << " folds hit the iteration budget\n";
    if (!run.scatter_path.empty()) {
        write_scatter_rows(report, run.scatter_path);
        std::cout << "scatter rows written to " << run.scatter_path << '\n';
    }
    return 0;
}

int cmd_predict(const RunConfig& run) {
    const StoredModel stored = load_model(run.model_path);
    const TSModel& model = stored.model;
    const CsvTable table = read_csv_table(run.data_path);
    if (model.column_names.empty())
        throw config_error("model carries no column names; cannot match by name");

    // Only the columns the rules read are required; anything else in the CSV is
    // ignored and unused model columns fall back to their stored means.
    std::vector<std::size_t> used_columns = model.antecedent_columns;
    for (std::size_t column : model.consequent_columns)
        if (std::find(used_columns.begin(), used_columns.end(), column) == used_columns.end())
            used_columns.push_back(column);

    std::vector<std::pair<std::size_t, std::size_t>> gather; // model column, csv column
    for (std::size_t column : used_columns) {
        const std::string& name = model.column_names[column];
        bool found = false;
        for (std::size_t j = 0; j < table.column_names.size(); ++j) {
            if (table.column_names[j] == name) {
                gather.emplace_back(column, j);
                found = true;
                break;
            }
        }
        if (!found) throw config_error("input is missing required column '" + name + "'");
    }

    std::ofstream file(run.out_path);
    if (!file) throw io_error("cannot write " + run.out_path);
    file << "prediction\n";
    std::vector<double> input(model.input_width());
    for (std::size_t r = 0; r < table.values.rows(); ++r) {
        input = model.centering.column_means; // unused columns contribute zero after centering
        for (const auto& [column, csv_column] : gather) input[column] = table.values(r, csv_column);
        file << fmt_full(model.predict(input).value) << '\n';
    }
    if (!file) throw io_error("failed writing " + run.out_path);
    std::cout << table.values.rows() << " predictions written to " << run.out_path << '\n';
    return 0;
}

int cmd_benchmark(const RunConfig& run) {
    const Benchmark bench =
        generate_benchmark(parse_benchmark_kind(run.benchmark_kind), run.benchmark_size,
                           run.noise, run.seed);
    save_csv(bench.dataset, run.out_path);
    std::cout << bench.dataset.size() << " rows (" << run.benchmark_kind << ", noise "
              << fmt6(run.noise) << ") written to " << run.out_path << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Compact Takagi-Sugeno fuzzy regression models: clustering-based "
                 "identification, OLS/separability reduction, cross-validated reporting"};
    app.require_subcommand(1);

    RunConfig run;
    std::size_t antecedent_keep = 0;
    std::size_t consequent_keep = 0;

    auto add_clustering_flags = [&](CLI::App* cmd) {
        cmd->add_option("--clusters", run.clusters, "number of rules/clusters")->capture_default_str();
        cmd->add_option("--fuzziness", run.fuzziness, "weighting exponent m > 1")->capture_default_str();
        cmd->add_option("--epsilon", run.epsilon, "partition convergence tolerance")->capture_default_str();
        cmd->add_option("--max-iter", run.max_iterations, "iteration budget")->capture_default_str();
        cmd->add_option("--restarts", run.restarts, "random restarts, best objective wins")->capture_default_str();
        cmd->add_option("--seed", run.seed, "random seed")->capture_default_str();
        cmd->add_flag("--unit-weights", run.unit_weights, "force every rule weight to 1");
        cmd->add_option("--activity", run.activity_column, "activity column name (default: last column)");
    };
    auto add_keep_flags = [&](CLI::App* cmd) {
        cmd->add_option("--keep-antecedent", antecedent_keep, "antecedent columns to keep");
        cmd->add_option("--keep-consequent", consequent_keep, "consequent columns to keep");
    };

    CLI::App* train = app.add_subcommand("train", "fit a model on a CSV and save it");
    train->add_option("--data", run.data_path, "input CSV")->required();
    train->add_option("--model", run.model_path, "output model file")->required();
    add_clustering_flags(train);

    CLI::App* select = app.add_subcommand("select", "rank and reduce columns, retrain");
    select->add_option("--data", run.data_path, "input CSV")->required();
    select->add_option("--model", run.model_path, "output model file");
    select->add_option("--out", run.out_path, "selection report rows (CSV)");
    add_clustering_flags(select);
    add_keep_flags(select);

    CLI::App* crossval = app.add_subcommand("crossval", "leave-one-out cross-validation");
    crossval->add_option("--data", run.data_path, "input CSV")->required();
    crossval->add_option("--scatter-out", run.scatter_path, "observed/predicted rows (CSV)");
    add_clustering_flags(crossval);
    add_keep_flags(crossval);

    CLI::App* predict = app.add_subcommand("predict", "apply a saved model to a CSV");
    predict->add_option("--model", run.model_path, "model file")->required();
    predict->add_option("--data", run.data_path, "input CSV (columns matched by name)")->required();
    predict->add_option("--out", run.out_path, "output predictions file")->required();

    CLI::App* benchmark = app.add_subcommand("benchmark", "generate a synthetic dataset");
    benchmark->add_option("--benchmark-kind", run.benchmark_kind,
                          "two-regime | sigmoid-blend | irrelevant-descriptor")
        ->capture_default_str();
    benchmark->add_option("--size", run.benchmark_size, "number of rows")->capture_default_str();
    benchmark->add_option("--noise", run.noise, "noise standard deviation")->capture_default_str();
    benchmark->add_option("--seed", run.seed, "random seed")->capture_default_str();
    benchmark->add_option("--out", run.out_path, "output CSV")->required();

    CLI11_PARSE(app, argc, argv);

    if (select->count("--keep-antecedent") || crossval->count("--keep-antecedent"))
        run.antecedent_keep = antecedent_keep;
    if (select->count("--keep-consequent") || crossval->count("--keep-consequent"))
        run.consequent_keep = consequent_keep;

    try {
        if (app.got_subcommand(train)) return cmd_train(run);
        if (app.got_subcommand(select)) return cmd_select(run);
        if (app.got_subcommand(crossval)) return cmd_crossval(run);
        if (app.got_subcommand(predict)) return cmd_predict(run);
        if (app.got_subcommand(benchmark)) return cmd_benchmark(run);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
