// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_EVALUATION_HPP
#define TSFUZZY_EVALUATION_HPP

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <span>
#include <utility>
#include <vector>

#include "common.hpp"
#include "errors.hpp"
#include "pipeline.hpp"

namespace tsfuzzy {

/// Root mean squared error.
inline double rmse(std::span<const double> observed, std::span<const double> predicted) {
    if (observed.size() != predicted.size()) throw shape_error("rmse: length mismatch");
    if (observed.empty()) throw shape_error("rmse: empty input");
    double sum = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double d = observed[i] - predicted[i];
        sum += d * d;
    }
    return std::sqrt(sum / static_cast<double>(observed.size()));
}

/// Coefficient of determination, 1 - SS_res / SS_tot. Negative values are
/// legal (a model worse than predicting the mean).
inline double r_squared(std::span<const double> observed, std::span<const double> predicted) {
    if (observed.size() != predicted.size()) throw shape_error("r_squared: length mismatch");
    if (observed.size() < 2) throw shape_error("r_squared: need at least two observations");
    double mean = 0.0;
    for (double v : observed) mean += v;
    mean /= static_cast<double>(observed.size());
    double ss_tot = 0.0;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        ss_tot += (observed[i] - mean) * (observed[i] - mean);
        ss_res += (observed[i] - predicted[i]) * (observed[i] - predicted[i]);
    }
    if (ss_tot == 0.0)
        throw numeric_error("r_squared: observed values are constant, variance undefined");
    return 1.0 - ss_res / ss_tot;
}

struct Metrics {
    double train_rmse = 0.0;
    double test_rmse = 0.0;
    double train_r2 = 0.0;
    double test_r2 = 0.0;

    friend bool operator==(const Metrics&, const Metrics&) = default;
};

struct EvaluationResult {
    double rmse = 0.0;
    double r2 = 0.0; // NaN when the observed activity is constant
    std::vector<double> residuals;
};

/// Metrics and residuals of a model over a raw (uncentered) dataset.
inline EvaluationResult evaluate(const TSModel& model, const Dataset& data) {
    const std::vector<double> predicted = model.predict_batch(data.descriptors);
    EvaluationResult result;
    result.residuals.resize(data.size());
    for (std::size_t i = 0; i < data.size(); ++i)
        result.residuals[i] = data.activity[i] - predicted[i];
    result.rmse = rmse(data.activity, predicted);
    try {
        result.r2 = r_squared(data.activity, predicted);
    } catch (const numeric_error&) {
        result.r2 = std::numeric_limits<double>::quiet_NaN();
    }
    return result;
}

struct FoldDiagnostic {
    std::size_t fold = 0;
    bool converged = false;
    std::size_t iterations = 0;

    friend bool operator==(const FoldDiagnostic&, const FoldDiagnostic&) = default;
};

struct CrossValReport {
    Metrics metrics;
    std::vector<std::pair<double, double>> pooled_predictions; // (observed, held-out prediction)
    std::vector<std::pair<double, double>> train_predictions;  // (observed, all-data fit)
    std::vector<FoldDiagnostic> per_fold;

    friend bool operator==(const CrossValReport&, const CrossValReport&) = default;
};

/// observed,predicted,split rows for external plotting: the all-data fit
/// tagged `train`, the pooled held-out predictions tagged `test`.
inline void write_scatter_rows(const CrossValReport& report, const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file) throw io_error("cannot write " + path.string());
    file << "observed,predicted,split\n";
    for (const auto& [observed, predicted] : report.train_predictions)
        file << detail::format_double(observed) << ',' << detail::format_double(predicted)
             << ",train\n";
    for (const auto& [observed, predicted] : report.pooled_predictions)
        file << detail::format_double(observed) << ',' << detail::format_double(predicted)
             << ",test\n";
    if (!file) throw io_error("failed writing " + path.string());
}

inline std::uint64_t fold_seed(std::uint64_t master_seed, std::size_t fold) {
    return mix_seed(master_seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(fold) + 1)));
}

/// Leave-one-out cross-validation of the full identification pipeline. Every
/// fold re-centers and re-fits (including selection when configured) on its
/// own training rows; test metrics pool the held-out predictions, train
/// metrics come from a final fit on all rows.
inline CrossValReport loo_crossval(const Dataset& raw, const PipelineConfig& config) {
    if (raw.centered) throw state_error("loo_crossval: expected an uncentered dataset");
    const std::size_t n = raw.size();
    if (n < config.clustering.cluster_count + 2)
        throw config_error("loo_crossval: need at least cluster_count + 2 samples");

    CrossValReport report;

    const PipelineFit full_fit = fit_pipeline(raw, config);
    const std::vector<double> fitted = full_fit.model.predict_batch(raw.descriptors);
    report.train_predictions.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        report.train_predictions.emplace_back(raw.activity[i], fitted[i]);
    report.metrics.train_rmse = rmse(raw.activity, fitted);
    report.metrics.train_r2 = r_squared(raw.activity, fitted);

    std::vector<double> held_out(n);
    report.per_fold.reserve(n);
    for (std::size_t k = 0; k < n; ++k) {
        const Dataset fold_data = drop_row(raw, k);
        PipelineConfig fold_config = config;
        fold_config.clustering.seed = fold_seed(config.clustering.seed, k);
        const PipelineFit fit = fit_pipeline(fold_data, fold_config);
        held_out[k] = fit.model.predict(raw.descriptors.row(k)).value;
        report.per_fold.push_back({k, fit.clustering.converged, fit.clustering.iterations});
    }
    report.pooled_predictions.reserve(n);
    for (std::size_t k = 0; k < n; ++k)
        report.pooled_predictions.emplace_back(raw.activity[k], held_out[k]);
    report.metrics.test_rmse = rmse(raw.activity, held_out);
    report.metrics.test_r2 = r_squared(raw.activity, held_out);
    return report;
}

} // namespace tsfuzzy

#endif // TSFUZZY_EVALUATION_HPP
