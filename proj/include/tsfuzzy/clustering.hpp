// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_CLUSTERING_HPP
#define TSFUZZY_CLUSTERING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "common.hpp"
#include "dataio.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace tsfuzzy {

/// Fuzzy partition: one row per cluster, one column per data point.
struct PartitionMatrix {
    linalg::Matrix memberships;

    std::size_t clusters() const { return memberships.rows(); }
    std::size_t points() const { return memberships.cols(); }

    /// Checks the fuzzy partitioning constraints: entries in [0,1], columns
    /// summing to 1, row sums inside (0, N).
    void validate(double tolerance = 1e-9) const {
        const std::size_t c = clusters();
        const std::size_t n = points();
        if (c == 0 || n == 0) throw invalid_parameter("partition matrix is empty");
        for (std::size_t i = 0; i < c; ++i)
            for (std::size_t k = 0; k < n; ++k) {
                const double mu = memberships(i, k);
                if (!(mu >= -tolerance && mu <= 1.0 + tolerance) || !std::isfinite(mu))
                    throw invalid_parameter("membership outside [0,1] at cluster " +
                                            std::to_string(i) + ", point " + std::to_string(k));
            }
        for (std::size_t k = 0; k < n; ++k) {
            double sum = 0.0;
            for (std::size_t i = 0; i < c; ++i) sum += memberships(i, k);
            if (std::abs(sum - 1.0) > tolerance)
                throw invalid_parameter("memberships of point " + std::to_string(k) +
                                        " do not sum to 1");
        }
        for (std::size_t i = 0; i < c; ++i) {
            double sum = 0.0;
            for (std::size_t k = 0; k < n; ++k) sum += memberships(i, k);
            if (!(sum > 0.0))
                throw invalid_parameter("cluster " + std::to_string(i) + " has zero total membership");
            if (sum > static_cast<double>(n) + tolerance)
                throw invalid_parameter("cluster " + std::to_string(i) + " exceeds the point count");
        }
    }

    friend bool operator==(const PartitionMatrix&, const PartitionMatrix&) = default;
};

/// One cluster of the mixture: antecedent Gaussian, local linear model,
/// model-error variance, prior and derived rule weight.
struct ClusterPrototype {
    std::vector<double> center;        // antecedent-space weighted mean
    std::vector<double> variances;     // antecedent-space weighted variances, floored
    std::vector<double> theta;         // local model: gains then offset
    double model_error_variance = 0.0; // weighted residual variance, floored
    double prior = 0.0;                // share of total membership
    double rule_weight = 0.0;          // prior times the Gaussian normalization constants

    friend bool operator==(const ClusterPrototype&, const ClusterPrototype&) = default;
};

struct ClusteringConfig {
    std::size_t cluster_count = 2;
    double fuzziness = 2.0;  // weighting exponent m
    double tolerance = 1e-4; // stop when successive partitions differ less (max-norm)
    std::size_t max_iterations = 200;
    std::uint64_t seed = 42;
    double variance_floor = 1e-8; // scale applied to the per-column data variance
    std::size_t restarts = 8;     // independent random initializations; lowest objective wins

    void validate() const {
        if (cluster_count < 1) throw config_error("cluster count must be at least 1");
        if (!(fuzziness > 1.0)) throw config_error("fuzziness exponent must exceed 1");
        if (!(tolerance > 0.0)) throw config_error("tolerance must be positive");
        if (max_iterations < 1) throw config_error("max_iterations must be at least 1");
        if (!(variance_floor >= 0.0)) throw config_error("variance floor must be non-negative");
        if (restarts < 1) throw config_error("restarts must be at least 1");
    }

    friend bool operator==(const ClusteringConfig&, const ClusteringConfig&) = default;
};

struct ClusteringDiagnostics {
    std::size_t degenerate_rescues = 0;    // clusters re-seeded after losing all mass
    std::size_t rank_deficient_solves = 0; // weighted LS solves that fell back to the pseudo-inverse

    friend bool operator==(const ClusteringDiagnostics&, const ClusteringDiagnostics&) = default;
};

struct ClusteringResult {
    std::vector<ClusterPrototype> prototypes;
    PartitionMatrix partition;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace; // objective value after each iteration
    ClusteringDiagnostics diagnostics;
    std::vector<std::size_t> antecedent_columns;
    std::vector<std::size_t> consequent_columns;

    friend bool operator==(const ClusteringResult&, const ClusteringResult&) = default;
};

/// Random fuzzy partition: uniform draws, columns normalized to sum 1.
inline PartitionMatrix init_partition(std::size_t points, std::size_t clusters, std::uint64_t seed) {
    if (clusters < 1) throw config_error("init_partition: cluster count must be at least 1");
    if (points < clusters)
        throw config_error("init_partition: need at least as many points as clusters");
    PartitionMatrix partition{linalg::Matrix(clusters, points)};
    Rng rng(seed);
    for (std::size_t k = 0; k < points; ++k) {
        double sum = 0.0;
        for (std::size_t i = 0; i < clusters; ++i) {
            const double v = rng.uniform();
            partition.memberships(i, k) = v;
            sum += v;
        }
        if (sum <= 0.0) {
            for (std::size_t i = 0; i < clusters; ++i)
                partition.memberships(i, k) = 1.0 / static_cast<double>(clusters);
        } else {
            for (std::size_t i = 0; i < clusters; ++i) partition.memberships(i, k) /= sum;
        }
    }
    return partition;
}

struct WlsSolution {
    std::vector<double> theta;
    bool rank_deficient = false;
};

/// Weighted least squares through the eigendecomposition of the normal matrix.
/// Rank-deficient systems get the minimum-norm solution and a flag.
inline WlsSolution weighted_least_squares(const linalg::Matrix& regressors,
                                          std::span<const double> weights,
                                          std::span<const double> targets) {
    const std::size_t n = regressors.rows();
    const std::size_t p = regressors.cols();
    if (weights.size() != n || targets.size() != n)
        throw shape_error("weighted_least_squares: row count mismatch");
    if (p == 0) throw shape_error("weighted_least_squares: no regressor columns");
    double weight_sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw invalid_parameter("weighted_least_squares: negative weight");
        weight_sum += w;
    }
    if (!(weight_sum > 0.0))
        throw invalid_parameter("weighted_least_squares: weights must not be all zero");

    linalg::Matrix normal(p, p);
    std::vector<double> rhs(p, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = weights[k];
        if (w == 0.0) continue;
        const auto row = regressors.row(k);
        for (std::size_t i = 0; i < p; ++i) {
            rhs[i] += w * row[i] * targets[k];
            for (std::size_t j = i; j < p; ++j) normal(i, j) += w * row[i] * row[j];
        }
    }
    for (std::size_t i = 0; i < p; ++i)
        for (std::size_t j = 0; j < i; ++j) normal(i, j) = normal(j, i);

    const auto eigen = linalg::jacobi_eigen(normal);
    double largest = 0.0;
    for (double value : eigen.values) largest = std::max(largest, std::abs(value));
    const double cutoff = largest * static_cast<double>(p) *
                          std::numeric_limits<double>::epsilon() * 64.0;

    WlsSolution solution;
    solution.theta.assign(p, 0.0);
    for (std::size_t e = 0; e < p; ++e) {
        const double value = eigen.values[e];
        if (!(value > cutoff)) {
            solution.rank_deficient = true;
            continue;
        }
        double projection = 0.0;
        for (std::size_t i = 0; i < p; ++i) projection += eigen.vectors(i, e) * rhs[i];
        const double coefficient = projection / value;
        for (std::size_t i = 0; i < p; ++i) solution.theta[i] += coefficient * eigen.vectors(i, e);
    }
    return solution;
}

namespace detail {

/// Regression matrix for the consequent columns with the appended unit column.
inline linalg::Matrix augmented_regressors(const Dataset& data,
                                           std::span<const std::size_t> consequent_columns) {
    linalg::Matrix phi(data.size(), consequent_columns.size() + 1);
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (std::size_t j = 0; j < consequent_columns.size(); ++j)
            phi(r, j) = data.descriptors(r, consequent_columns[j]);
        phi(r, consequent_columns.size()) = 1.0;
    }
    return phi;
}

inline double local_output(const ClusterPrototype& prototype, const Dataset& data, std::size_t row,
                           std::span<const std::size_t> consequent_columns) {
    double value = prototype.theta.back();
    for (std::size_t j = 0; j < consequent_columns.size(); ++j)
        value += prototype.theta[j] * data.descriptors(row, consequent_columns[j]);
    return value;
}

inline void check_columns(const Dataset& data, std::span<const std::size_t> columns,
                          const char* what, bool require_nonempty) {
    if (require_nonempty && columns.empty())
        throw config_error(std::string(what) + " column set must not be empty");
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] >= data.width())
            throw config_error(std::string(what) + " column index out of range");
        for (std::size_t j = i + 1; j < columns.size(); ++j)
            if (columns[i] == columns[j])
                throw config_error(std::string(what) + " columns contain a duplicate");
    }
}

} // namespace detail

/// One alternating-optimization half-step: centers, variances, local models,
/// model-error variances, priors and rule weights from the current partition.
/// A cluster whose fuzzified mass collapses is re-seeded at the point the
/// surviving local models fit worst.
inline std::vector<ClusterPrototype> update_prototypes(
    const Dataset& data, const PartitionMatrix& partition, const ClusteringConfig& config,
    std::span<const std::size_t> antecedent_columns,
    std::span<const std::size_t> consequent_columns,
    ClusteringDiagnostics* diagnostics = nullptr) {
    const std::size_t n = data.size();
    const std::size_t c = partition.clusters();
    if (partition.points() != n)
        throw shape_error("update_prototypes: partition and dataset disagree on the point count");
    detail::check_columns(data, antecedent_columns, "antecedent", true);
    detail::check_columns(data, consequent_columns, "consequent", false);
    const double m = config.fuzziness;

    // Variance floors scale with the spread of each column.
    std::vector<double> column_floor(antecedent_columns.size());
    for (std::size_t j = 0; j < antecedent_columns.size(); ++j) {
        const double var = linalg::column_variance(data.descriptors, antecedent_columns[j]);
        column_floor[j] = config.variance_floor * var > 0.0 ? config.variance_floor * var : 1e-30;
    }
    double activity_variance = 0.0;
    {
        double mean = 0.0;
        for (double v : data.activity) mean += v;
        mean /= static_cast<double>(n);
        for (double v : data.activity) activity_variance += (v - mean) * (v - mean);
        activity_variance /= static_cast<double>(n);
    }
    const double residual_floor =
        config.variance_floor * activity_variance > 0.0 ? config.variance_floor * activity_variance : 1e-30;

    const linalg::Matrix phi = detail::augmented_regressors(data, consequent_columns);

    std::vector<ClusterPrototype> prototypes(c);
    std::vector<bool> degenerate(c, false);
    std::vector<double> fuzzed(n);
    for (std::size_t i = 0; i < c; ++i) {
        ClusterPrototype& proto = prototypes[i];
        double mass = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            fuzzed[k] = std::pow(partition.memberships(i, k), m);
            mass += fuzzed[k];
        }
        double prior = 0.0;
        for (std::size_t k = 0; k < n; ++k) prior += partition.memberships(i, k);
        proto.prior = prior / static_cast<double>(n);

        if (mass < 1e-12) {
            degenerate[i] = true;
            continue;
        }

        proto.center.assign(antecedent_columns.size(), 0.0);
        proto.variances.assign(antecedent_columns.size(), 0.0);
        for (std::size_t j = 0; j < antecedent_columns.size(); ++j) {
            const std::size_t col = antecedent_columns[j];
            double mean = 0.0;
            for (std::size_t k = 0; k < n; ++k) mean += fuzzed[k] * data.descriptors(k, col);
            mean /= mass;
            double var = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double d = data.descriptors(k, col) - mean;
                var += fuzzed[k] * d * d;
            }
            var /= mass;
            proto.center[j] = mean;
            proto.variances[j] = std::max(var, column_floor[j]);
        }

        WlsSolution wls = weighted_least_squares(phi, fuzzed, data.activity);
        if (wls.rank_deficient && diagnostics) ++diagnostics->rank_deficient_solves;
        proto.theta = std::move(wls.theta);

        double residual_variance = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double r = data.activity[k] - detail::local_output(proto, data, k, consequent_columns);
            residual_variance += fuzzed[k] * r * r;
        }
        residual_variance /= mass;
        proto.model_error_variance = std::max(residual_variance, residual_floor);
    }

    // Rescue starved clusters: re-seed at the points the surviving models fit worst.
    bool rescued = false;
    std::vector<bool> taken(n, false);
    for (std::size_t i = 0; i < c; ++i) {
        if (!degenerate[i]) continue;
        rescued = true;
        if (diagnostics) ++diagnostics->degenerate_rescues;

        std::size_t worst = 0;
        double worst_score = -1.0;
        for (std::size_t k = 0; k < n; ++k) {
            if (taken[k]) continue;
            double best_fit = std::numeric_limits<double>::infinity();
            for (std::size_t other = 0; other < c; ++other) {
                if (degenerate[other]) continue;
                const double r =
                    data.activity[k] - detail::local_output(prototypes[other], data, k, consequent_columns);
                best_fit = std::min(best_fit, r * r);
            }
            if (!std::isfinite(best_fit)) {
                // no surviving cluster at all: fall back to activity magnitude
                best_fit = data.activity[k] * data.activity[k];
            }
            if (best_fit > worst_score) {
                worst_score = best_fit;
                worst = k;
            }
        }
        taken[worst] = true;

        ClusterPrototype& proto = prototypes[i];
        proto.center.resize(antecedent_columns.size());
        proto.variances.resize(antecedent_columns.size());
        for (std::size_t j = 0; j < antecedent_columns.size(); ++j) {
            proto.center[j] = data.descriptors(worst, antecedent_columns[j]);
            const double var = linalg::column_variance(data.descriptors, antecedent_columns[j]);
            proto.variances[j] = std::max(var, column_floor[j]);
        }
        proto.theta.assign(consequent_columns.size() + 1, 0.0);
        proto.theta.back() = data.activity[worst];
        proto.model_error_variance = std::max(activity_variance, residual_floor);
        proto.prior = 1.0 / static_cast<double>(n);
    }
    if (rescued) {
        double total = 0.0;
        for (const ClusterPrototype& proto : prototypes) total += proto.prior;
        for (ClusterPrototype& proto : prototypes) proto.prior /= total;
    }

    for (ClusterPrototype& proto : prototypes) {
        double log_weight = std::log(proto.prior);
        for (double var : proto.variances)
            log_weight -= 0.5 * std::log(2.0 * std::numbers::pi * var);
        proto.rule_weight = std::exp(log_weight);
    }
    return prototypes;
}

/// log(1 / D^2): log rule weight plus the antecedent log membership plus the
/// log Gaussian density of the local-model residual.
inline linalg::Matrix log_inverse_distances(const Dataset& data,
                                            std::span<const ClusterPrototype> prototypes,
                                            std::span<const std::size_t> antecedent_columns,
                                            std::span<const std::size_t> consequent_columns) {
    const std::size_t n = data.size();
    const std::size_t c = prototypes.size();
    if (c == 0) throw invalid_parameter("log_inverse_distances: no prototypes");
    linalg::Matrix log_inv(c, n);
    for (std::size_t i = 0; i < c; ++i) {
        const ClusterPrototype& proto = prototypes[i];
        if (proto.center.size() != antecedent_columns.size() ||
            proto.theta.size() != consequent_columns.size() + 1)
            throw shape_error("log_inverse_distances: prototype does not match the column sets");
        if (!(proto.model_error_variance > 0.0))
            throw invalid_parameter("log_inverse_distances: non-positive model-error variance");
        const double log_weight = proto.rule_weight > 0.0
                                      ? std::log(proto.rule_weight)
                                      : -std::numeric_limits<double>::infinity();
        const double log_residual_norm =
            -0.5 * std::log(2.0 * std::numbers::pi * proto.model_error_variance);
        for (std::size_t k = 0; k < n; ++k) {
            double log_membership = 0.0;
            for (std::size_t j = 0; j < antecedent_columns.size(); ++j) {
                if (!(proto.variances[j] > 0.0))
                    throw invalid_parameter("log_inverse_distances: non-positive variance");
                const double d = data.descriptors(k, antecedent_columns[j]) - proto.center[j];
                log_membership -= 0.5 * d * d / proto.variances[j];
            }
            const double r = data.activity[k] - detail::local_output(proto, data, k, consequent_columns);
            log_inv(i, k) = log_weight + log_membership + log_residual_norm -
                            r * r / (2.0 * proto.model_error_variance);
        }
    }
    return log_inv;
}

/// Squared distances D^2 = exp(-log(1/D^2)). The clustering loop never forms
/// these; they exist for direct inspection and the partition-update contract.
inline linalg::Matrix compute_distances(const Dataset& data,
                                        std::span<const ClusterPrototype> prototypes,
                                        std::span<const std::size_t> antecedent_columns,
                                        std::span<const std::size_t> consequent_columns) {
    linalg::Matrix log_inv =
        log_inverse_distances(data, prototypes, antecedent_columns, consequent_columns);
    linalg::Matrix d2(log_inv.rows(), log_inv.cols());
    for (std::size_t i = 0; i < log_inv.rows(); ++i)
        for (std::size_t k = 0; k < log_inv.cols(); ++k) d2(i, k) = std::exp(-log_inv(i, k));
    return d2;
}

/// Partition update from log(1/D^2) values: a softmax over clusters with
/// exponent 1/(m-1), evaluated with the usual max-shift for stability.
inline PartitionMatrix update_partition_from_log(const linalg::Matrix& log_inverse_d2,
                                                 double fuzziness) {
    if (!(fuzziness > 1.0)) throw config_error("fuzziness exponent must exceed 1");
    const std::size_t c = log_inverse_d2.rows();
    const std::size_t n = log_inverse_d2.cols();
    if (c == 0 || n == 0) throw shape_error("update_partition: empty distance matrix");
    const double sharpness = 1.0 / (fuzziness - 1.0);
    PartitionMatrix partition{linalg::Matrix(c, n)};
    std::vector<double> scaled(c);
    for (std::size_t k = 0; k < n; ++k) {
        double top = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < c; ++i) {
            scaled[i] = sharpness * log_inverse_d2(i, k);
            top = std::max(top, scaled[i]);
        }
        if (top == -std::numeric_limits<double>::infinity()) {
            // every cluster reports zero likelihood; fall back to uniform
            for (std::size_t i = 0; i < c; ++i)
                partition.memberships(i, k) = 1.0 / static_cast<double>(c);
            continue;
        }
        if (top == std::numeric_limits<double>::infinity()) {
            // saturated likelihoods; split the point among the saturated clusters
            std::size_t saturated = 0;
            for (std::size_t i = 0; i < c; ++i)
                if (scaled[i] == top) ++saturated;
            for (std::size_t i = 0; i < c; ++i)
                partition.memberships(i, k) =
                    scaled[i] == top ? 1.0 / static_cast<double>(saturated) : 0.0;
            continue;
        }
        double denom = 0.0;
        for (std::size_t i = 0; i < c; ++i) {
            scaled[i] = std::exp(scaled[i] - top);
            denom += scaled[i];
        }
        for (std::size_t i = 0; i < c; ++i) partition.memberships(i, k) = scaled[i] / denom;
    }
    return partition;
}

/// Partition update from squared distances (all strictly positive).
inline PartitionMatrix update_partition(const linalg::Matrix& squared_distances, double fuzziness) {
    linalg::Matrix log_inv(squared_distances.rows(), squared_distances.cols());
    for (std::size_t i = 0; i < squared_distances.rows(); ++i)
        for (std::size_t k = 0; k < squared_distances.cols(); ++k) {
            const double d2 = squared_distances(i, k);
            if (!(d2 > 0.0))
                throw invalid_parameter("update_partition: squared distances must be positive");
            log_inv(i, k) = -std::log(d2);
        }
    return update_partition_from_log(log_inv, fuzziness);
}

/// Weighted objective: sum of mu^m * D^2.
inline double objective(const PartitionMatrix& partition, const linalg::Matrix& squared_distances,
                        double fuzziness) {
    if (partition.clusters() != squared_distances.rows() ||
        partition.points() != squared_distances.cols())
        throw shape_error("objective: partition and distances disagree");
    double total = 0.0;
    for (std::size_t i = 0; i < partition.clusters(); ++i)
        for (std::size_t k = 0; k < partition.points(); ++k)
            total += std::pow(partition.memberships(i, k), fuzziness) * squared_distances(i, k);
    return total;
}

/// Same objective evaluated from log(1/D^2) without materializing D^2.
inline double objective_from_log(const PartitionMatrix& partition,
                                 const linalg::Matrix& log_inverse_d2, double fuzziness) {
    if (partition.clusters() != log_inverse_d2.rows() ||
        partition.points() != log_inverse_d2.cols())
        throw shape_error("objective: partition and distances disagree");
    double total = 0.0;
    for (std::size_t i = 0; i < partition.clusters(); ++i)
        for (std::size_t k = 0; k < partition.points(); ++k) {
            const double mu = partition.memberships(i, k);
            if (mu <= 0.0) continue;
            total += std::exp(fuzziness * std::log(mu) - log_inverse_d2(i, k));
        }
    return total;
}

/// Observer invoked after each iteration with the revised partition and the
/// prototypes that produced it.
using IterationObserver =
    std::function<void(std::size_t iteration, const PartitionMatrix&, std::span<const ClusterPrototype>)>;

namespace detail {

inline ClusteringResult cluster_once(const Dataset& data, const ClusteringConfig& config,
                                     std::uint64_t seed,
                                     const std::vector<std::size_t>& antecedent_columns,
                                     const std::vector<std::size_t>& consequent_columns,
                                     const IterationObserver& observer) {
    ClusteringResult result;
    result.antecedent_columns = antecedent_columns;
    result.consequent_columns = consequent_columns;

    PartitionMatrix partition = init_partition(data.size(), config.cluster_count, seed);
    std::vector<ClusterPrototype> prototypes;
    for (std::size_t iteration = 1; iteration <= config.max_iterations; ++iteration) {
        prototypes = update_prototypes(data, partition, config, result.antecedent_columns,
                                       result.consequent_columns, &result.diagnostics);
        const linalg::Matrix log_inv = log_inverse_distances(
            data, prototypes, result.antecedent_columns, result.consequent_columns);
        PartitionMatrix revised = update_partition_from_log(log_inv, config.fuzziness);

        double shift = 0.0;
        for (std::size_t i = 0; i < revised.clusters(); ++i)
            for (std::size_t k = 0; k < revised.points(); ++k)
                shift = std::max(shift,
                                 std::abs(revised.memberships(i, k) - partition.memberships(i, k)));

        partition = std::move(revised);
        result.objective_trace.push_back(objective_from_log(partition, log_inv, config.fuzziness));
        result.iterations = iteration;
        if (observer) observer(iteration, partition, prototypes);
        if (shift < config.tolerance) {
            result.converged = true;
            break;
        }
    }
    result.prototypes = std::move(prototypes);
    result.partition = std::move(partition);
    return result;
}

} // namespace detail

/// Alternating optimization: prototypes from the partition, distances from the
/// prototypes, partition from the distances, until the partition stops moving
/// (max-norm below the tolerance) or the iteration budget runs out.
///
/// The exponential distance makes the loop sensitive to its random start, so
/// the run is repeated from `restarts` derived seeds and the attempt with the
/// lowest final objective is returned. The first attempt uses the configured
/// seed itself; everything stays deterministic for a given seed.
inline ClusteringResult cluster(const Dataset& data, const ClusteringConfig& config,
                                std::vector<std::size_t> antecedent_columns,
                                std::vector<std::size_t> consequent_columns,
                                const IterationObserver& observer = {}) {
    config.validate();
    if (data.size() < config.cluster_count)
        throw config_error("cluster: need at least as many points as clusters");
    detail::check_columns(data, antecedent_columns, "antecedent", true);
    detail::check_columns(data, consequent_columns, "consequent", false);

    ClusteringResult best;
    bool have_best = false;
    for (std::size_t attempt = 0; attempt < config.restarts; ++attempt) {
        const std::uint64_t seed =
            attempt == 0 ? config.seed
                         : mix_seed(config.seed ^ (0xD1B54A32D192ED03ULL * attempt));
        ClusteringResult run = detail::cluster_once(data, config, seed, antecedent_columns,
                                                    consequent_columns, observer);
        if (!have_best || run.objective_trace.back() < best.objective_trace.back()) {
            best = std::move(run);
            have_best = true;
        }
    }
    return best;
}

/// Assembles the rule base from a clustering result. Centering and column
/// names come from the dataset the clustering ran on.
inline TSModel to_ts_model(const ClusteringResult& result, Centering centering,
                           std::vector<std::string> column_names = {}) {
    if (result.prototypes.empty())
        throw invalid_parameter("to_ts_model: clustering result has no prototypes");
    TSModel model;
    model.antecedent_columns = result.antecedent_columns;
    model.consequent_columns = result.consequent_columns;
    model.centering = std::move(centering);
    model.column_names = std::move(column_names);
    for (const ClusterPrototype& proto : result.prototypes) {
        Rule rule;
        rule.antecedent.centers = proto.center;
        rule.antecedent.variances = proto.variances;
        rule.consequent.gains.assign(proto.theta.begin(), proto.theta.end() - 1);
        rule.consequent.offset = proto.theta.back();
        rule.weight = proto.rule_weight;
        model.rules.push_back(std::move(rule));
    }
    model.validate();
    return model;
}

} // namespace tsfuzzy

#endif // TSFUZZY_CLUSTERING_HPP
