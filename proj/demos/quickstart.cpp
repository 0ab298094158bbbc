// SPDX-License-Identifier: Apache-2.0
//
// Minimal end-to-end walkthrough: generate a synthetic dataset, identify a
// two-rule model, print the recovered local models and cross-validated
// metrics.

#include <cstdio>

#include <tsfuzzy/tsfuzzy.hpp>

int main() {
    using namespace tsfuzzy;

    const Benchmark bench = generate_benchmark(BenchmarkKind::two_regime, 200, 0.05, 42);

    PipelineConfig config;
    config.clustering.cluster_count = 2;

    const PipelineFit fit = fit_pipeline(bench.dataset, config);
    std::printf("clustering: %zu iterations, %s\n", fit.clustering.iterations,
                fit.clustering.converged ? "converged" : "budget reached");

    const Centering& centering = fit.model.centering;
    for (std::size_t i = 0; i < fit.model.rules.size(); ++i) {
        const Rule& rule = fit.model.rules[i];
        double raw_offset = rule.consequent.offset + centering.activity_mean;
        for (std::size_t j = 0; j < rule.consequent.gains.size(); ++j)
            raw_offset -= rule.consequent.gains[j] *
                          centering.column_means[fit.model.consequent_columns[j]];
        std::printf("rule %zu: y = %.3f * x + %.3f   (center %.3f, variance %.3f)\n", i + 1,
                    rule.consequent.gains[0], raw_offset,
                    rule.antecedent.centers[0] + centering.column_means[0],
                    rule.antecedent.variances[0]);
    }

    const CrossValReport report = loo_crossval(bench.dataset, config);
    std::printf("train rmse %.4f   r2 %.4f\n", report.metrics.train_rmse,
                report.metrics.train_r2);
    std::printf("test  rmse %.4f   r2 %.4f   (leave-one-out)\n", report.metrics.test_rmse,
                report.metrics.test_r2);
    return 0;
}
