// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_PIPELINE_HPP
#define TSFUZZY_PIPELINE_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clustering.hpp"
#include "dataio.hpp"
#include "selection.hpp"

namespace tsfuzzy {

/// End-to-end identification settings: clustering plus optional reduction.
struct PipelineConfig {
    ClusteringConfig clustering;
    std::optional<std::size_t> consequent_keep; // top-ranked consequent columns to retain
    std::optional<std::size_t> antecedent_keep; // antecedent columns left after elimination
    bool unit_weights = false;                  // override trained rule weights at inference

    bool selection_requested() const {
        return consequent_keep.has_value() || antecedent_keep.has_value();
    }
};

struct SelectionReport {
    ConsequentRanking consequents;
    FisherTrace antecedents;
    std::vector<std::size_t> kept_consequents;    // dataset column ids, ascending
    std::vector<std::size_t> dropped_consequents; // ranking order among the dropped
    std::vector<std::size_t> kept_antecedents;    // ascending
    std::vector<std::size_t> dropped_antecedents; // elimination order
};

struct PipelineFit {
    TSModel model;
    ClusteringResult clustering; // the clustering behind the final model
    std::optional<SelectionReport> selection;
};

/// Machine-readable selection report: section,rank,name,score rows covering
/// the consequent ranking, the elimination steps, and the kept antecedents
/// (scored with the separability of the final kept set).
inline void write_selection_rows(const SelectionReport& report,
                                 std::span<const std::string> column_names,
                                 const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file) throw io_error("cannot write " + path.string());
    file << "section,rank,name,score\n";
    const ConsequentRanking& ranking = report.consequents;
    for (std::size_t rank = 0; rank < ranking.aggregate_order.size(); ++rank) {
        const std::size_t column = ranking.aggregate_order[rank];
        double score = 0.0;
        for (std::size_t j = 0; j < ranking.columns.size(); ++j)
            if (ranking.columns[j] == column) score = ranking.aggregate_scores[j];
        file << "consequent," << rank + 1 << ',' << column_names[column] << ','
             << detail::format_double(score) << '\n';
    }
    for (std::size_t step = 0; step < report.dropped_antecedents.size(); ++step)
        file << "antecedent_dropped," << step + 1 << ','
             << column_names[report.dropped_antecedents[step]] << ','
             << detail::format_double(report.antecedents.scores_after_removal[step]) << '\n';
    const double kept_score = fisher_score(
        linalg::select_symmetric(report.antecedents.full.between, report.kept_antecedents),
        linalg::select_symmetric(report.antecedents.full.within, report.kept_antecedents));
    for (std::size_t i = 0; i < report.kept_antecedents.size(); ++i)
        file << "antecedent_kept," << i + 1 << ',' << column_names[report.kept_antecedents[i]]
             << ',' << detail::format_double(kept_score) << '\n';
    if (!file) throw io_error("failed writing " + path.string());
}

/// Centers the data, clusters with every column serving as both antecedent and
/// consequent, optionally reduces the column sets (consequents by OLS ranking,
/// antecedents by separability elimination) and retrains on the kept columns.
inline PipelineFit fit_pipeline(const Dataset& raw, const PipelineConfig& config) {
    if (raw.centered) throw state_error("fit_pipeline: expected an uncentered dataset");
    raw.validate();
    const Dataset centered = mean_center(raw);
    const std::size_t width = centered.width();

    std::vector<std::size_t> all_columns(width);
    std::iota(all_columns.begin(), all_columns.end(), std::size_t{0});

    PipelineFit fit;
    fit.clustering = cluster(centered, config.clustering, all_columns, all_columns);

    if (config.selection_requested()) {
        const std::size_t keep_consequents = config.consequent_keep.value_or(width);
        const std::size_t keep_antecedents = config.antecedent_keep.value_or(width);
        if (keep_consequents > width)
            throw config_error("consequent keep count exceeds the column count");
        if (keep_antecedents > width)
            throw config_error("antecedent keep count exceeds the column count");

        SelectionReport report;
        report.consequents = rank_consequents(centered, fit.clustering);
        report.kept_consequents.assign(report.consequents.aggregate_order.begin(),
                                       report.consequents.aggregate_order.begin() +
                                           static_cast<std::ptrdiff_t>(keep_consequents));
        std::sort(report.kept_consequents.begin(), report.kept_consequents.end());
        report.dropped_consequents.assign(report.consequents.aggregate_order.begin() +
                                              static_cast<std::ptrdiff_t>(keep_consequents),
                                          report.consequents.aggregate_order.end());

        report.antecedents = rank_antecedents(fit.clustering.prototypes, centered.descriptors,
                                              fit.clustering.partition, keep_antecedents);
        report.dropped_antecedents = report.antecedents.elimination_order;
        for (std::size_t column : all_columns) {
            if (std::find(report.dropped_antecedents.begin(), report.dropped_antecedents.end(),
                          column) == report.dropped_antecedents.end())
                report.kept_antecedents.push_back(column);
        }

        const bool reduced = report.kept_antecedents.size() != width ||
                             report.kept_consequents.size() != width;
        if (reduced)
            fit.clustering = cluster(centered, config.clustering, report.kept_antecedents,
                                     report.kept_consequents);
        fit.selection = std::move(report);
    }

    fit.model = to_ts_model(fit.clustering, centered.centering(), centered.column_names);
    if (config.unit_weights) fit.model = fit.model.with_unit_weights();
    return fit;
}

} // namespace tsfuzzy

#endif // TSFUZZY_PIPELINE_HPP
