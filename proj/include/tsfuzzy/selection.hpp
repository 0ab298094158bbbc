// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_SELECTION_HPP
#define TSFUZZY_SELECTION_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "clustering.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace tsfuzzy {

/// Gram-Schmidt factorization B = W A: W has mutually orthogonal columns,
/// A is upper triangular with unit diagonal. `solution` holds the coefficients
/// of a least-squares target in the orthogonal basis when one was supplied.
struct OlsDecomposition {
    linalg::Matrix orthogonal;     // W, same shape as the input
    linalg::Matrix triangular;     // A, p x p
    std::vector<double> solution;  // g, empty without a target
    std::vector<bool> degenerate;  // columns that vanished during orthogonalization
};

namespace detail {

/// Modified Gram-Schmidt with a second sweep. Columns that vanish (exact or
/// near-exact linear dependence) become zero columns of W; their triangular
/// row keeps only the unit diagonal.
inline OlsDecomposition gram_schmidt_impl(const linalg::Matrix& basis, const double* target) {
    const std::size_t n = basis.rows();
    const std::size_t p = basis.cols();
    if (p == 0) throw shape_error("gram_schmidt: no columns");
    if (n < p) throw shape_error("gram_schmidt: fewer rows than columns");

    OlsDecomposition dec;
    dec.orthogonal = basis;
    dec.triangular = linalg::Matrix::identity(p);
    dec.degenerate.assign(p, false);

    std::vector<double> squared(p, 0.0);
    std::vector<double> work(n);
    for (std::size_t j = 0; j < p; ++j) {
        for (std::size_t r = 0; r < n; ++r) work[r] = basis(r, j);
        const double original = std::sqrt(linalg::squared_norm(work));
        for (int sweep = 0; sweep < 2; ++sweep) {
            for (std::size_t i = 0; i < j; ++i) {
                if (dec.degenerate[i]) continue;
                double projection = 0.0;
                for (std::size_t r = 0; r < n; ++r) projection += dec.orthogonal(r, i) * work[r];
                projection /= squared[i];
                dec.triangular(i, j) += projection;
                for (std::size_t r = 0; r < n; ++r) work[r] -= projection * dec.orthogonal(r, i);
            }
        }
        const double remaining = std::sqrt(linalg::squared_norm(work));
        if (remaining <= 1e-12 * original || original == 0.0) {
            dec.degenerate[j] = true;
            for (std::size_t r = 0; r < n; ++r) dec.orthogonal(r, j) = 0.0;
            squared[j] = 0.0;
        } else {
            for (std::size_t r = 0; r < n; ++r) dec.orthogonal(r, j) = work[r];
            squared[j] = remaining * remaining;
        }
    }

    if (target != nullptr) {
        dec.solution.assign(p, 0.0);
        for (std::size_t j = 0; j < p; ++j) {
            if (dec.degenerate[j]) continue;
            double projection = 0.0;
            for (std::size_t r = 0; r < n; ++r) projection += dec.orthogonal(r, j) * target[r];
            dec.solution[j] = projection / squared[j];
        }
    }
    return dec;
}

} // namespace detail

inline OlsDecomposition gram_schmidt(const linalg::Matrix& basis) {
    return detail::gram_schmidt_impl(basis, nullptr);
}

inline OlsDecomposition gram_schmidt(const linalg::Matrix& basis, std::span<const double> target) {
    if (target.size() != basis.rows()) throw shape_error("gram_schmidt: target length mismatch");
    return detail::gram_schmidt_impl(basis, target.data());
}

/// Error-reduction ratio of each regressor column for one cluster: rows are
/// scaled by the square root of the memberships, the target likewise, and each
/// orthogonalized column's share of the weighted output energy is returned.
inline std::vector<double> ols_rank_consequents(const linalg::Matrix& regressors,
                                                std::span<const double> memberships,
                                                std::span<const double> activity) {
    const std::size_t n = regressors.rows();
    if (memberships.size() != n || activity.size() != n)
        throw shape_error("ols_rank_consequents: row count mismatch");
    linalg::Matrix weighted(n, regressors.cols());
    std::vector<double> target(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (!(memberships[r] >= 0.0))
            throw invalid_parameter("ols_rank_consequents: negative membership");
        const double scale = std::sqrt(memberships[r]);
        for (std::size_t j = 0; j < regressors.cols(); ++j)
            weighted(r, j) = scale * regressors(r, j);
        target[r] = scale * activity[r];
    }
    const double energy = linalg::squared_norm(target);
    if (!(energy > 0.0))
        throw numeric_error("ols_rank_consequents: weighted output energy is zero, ratios undefined");

    const OlsDecomposition dec = gram_schmidt(weighted, target);
    std::vector<double> ratios(regressors.cols(), 0.0);
    for (std::size_t j = 0; j < regressors.cols(); ++j) {
        if (dec.degenerate[j]) continue;
        const double wsq = linalg::squared_norm(dec.orthogonal.column(j));
        ratios[j] = dec.solution[j] * dec.solution[j] * wsq / energy;
    }
    return ratios;
}

struct AggregateRanking {
    std::vector<std::size_t> order; // positions, best first
    std::vector<double> scores;     // one per position
};

/// Prior-weighted mean of the per-cluster ratios; descending order with ties
/// broken toward the lower column index.
inline AggregateRanking aggregate_ranking(const linalg::Matrix& per_cluster_ratios,
                                          std::span<const double> priors) {
    const std::size_t c = per_cluster_ratios.rows();
    const std::size_t p = per_cluster_ratios.cols();
    if (priors.size() != c) throw shape_error("aggregate_ranking: prior count mismatch");
    double total = 0.0;
    for (double prior : priors) total += prior;
    if (std::abs(total - 1.0) > 1e-6)
        throw invalid_parameter("aggregate_ranking: priors must sum to 1");

    AggregateRanking result;
    result.scores.assign(p, 0.0);
    for (std::size_t i = 0; i < c; ++i)
        for (std::size_t j = 0; j < p; ++j)
            result.scores[j] += priors[i] * per_cluster_ratios(i, j);
    result.order.resize(p);
    std::iota(result.order.begin(), result.order.end(), std::size_t{0});
    std::sort(result.order.begin(), result.order.end(), [&](std::size_t a, std::size_t b) {
        if (result.scores[a] != result.scores[b]) return result.scores[a] > result.scores[b];
        return a < b;
    });
    return result;
}

/// Consequent ranking for a whole clustering result, expressed in dataset
/// column ids. The appended unit regressor is always retained and is not a
/// ranking candidate.
struct ConsequentRanking {
    linalg::Matrix per_cluster_ratios;        // clusters x candidate columns
    std::vector<std::size_t> columns;         // dataset column ids of the candidates
    std::vector<std::size_t> aggregate_order; // dataset column ids, best first
    std::vector<double> aggregate_scores;     // aligned with `columns`
};

inline ConsequentRanking rank_consequents(const Dataset& data, const ClusteringResult& clustering) {
    const std::vector<std::size_t>& columns = clustering.consequent_columns;
    ConsequentRanking ranking;
    ranking.columns = columns;
    const std::size_t c = clustering.prototypes.size();
    ranking.per_cluster_ratios = linalg::Matrix(c, columns.size());
    if (columns.empty()) return ranking;

    const linalg::Matrix phi = detail::augmented_regressors(data, columns);
    std::vector<double> priors(c);
    for (std::size_t i = 0; i < c; ++i) {
        priors[i] = clustering.prototypes[i].prior;
        const std::vector<double> ratios =
            ols_rank_consequents(phi, clustering.partition.memberships.row(i), data.activity);
        for (std::size_t j = 0; j < columns.size(); ++j)
            ranking.per_cluster_ratios(i, j) = ratios[j];
    }
    const AggregateRanking aggregate = aggregate_ranking(ranking.per_cluster_ratios, priors);
    ranking.aggregate_scores = aggregate.scores;
    ranking.aggregate_order.reserve(columns.size());
    for (std::size_t position : aggregate.order)
        ranking.aggregate_order.push_back(columns[position]);
    return ranking;
}

// --- Fisher interclass separability ----------------------------------------

struct FisherCovariances {
    linalg::Matrix within;            // prior-weighted sum of the cluster covariances
    linalg::Matrix between;           // prior-weighted scatter of the centers
    linalg::Matrix total;             // within + between
    std::vector<double> grand_center; // prior-weighted mean of the centers
};

/// Within/between-class covariances of the antecedent space. The cluster
/// covariances are the diagonal antecedent variances; the data and partition
/// are checked for shape agreement with the prototypes.
inline FisherCovariances fisher_covariances(std::span<const ClusterPrototype> prototypes,
                                            const linalg::Matrix& antecedent_data,
                                            const PartitionMatrix& partition) {
    if (prototypes.empty()) throw invalid_parameter("fisher_covariances: no prototypes");
    const std::size_t dims = prototypes.front().center.size();
    for (const ClusterPrototype& proto : prototypes)
        if (proto.center.size() != dims || proto.variances.size() != dims)
            throw shape_error("fisher_covariances: prototypes disagree on dimension");
    if (antecedent_data.cols() != dims)
        throw shape_error("fisher_covariances: data width does not match the prototypes");
    if (partition.clusters() != prototypes.size() || partition.points() != antecedent_data.rows())
        throw shape_error("fisher_covariances: partition shape mismatch");

    FisherCovariances cov;
    cov.grand_center.assign(dims, 0.0);
    for (const ClusterPrototype& proto : prototypes)
        for (std::size_t j = 0; j < dims; ++j) cov.grand_center[j] += proto.prior * proto.center[j];

    cov.within = linalg::Matrix(dims, dims);
    cov.between = linalg::Matrix(dims, dims);
    for (const ClusterPrototype& proto : prototypes) {
        for (std::size_t j = 0; j < dims; ++j) cov.within(j, j) += proto.prior * proto.variances[j];
        for (std::size_t a = 0; a < dims; ++a) {
            const double da = proto.center[a] - cov.grand_center[a];
            for (std::size_t b = 0; b < dims; ++b) {
                const double db = proto.center[b] - cov.grand_center[b];
                cov.between(a, b) += proto.prior * da * db;
            }
        }
    }
    cov.total = linalg::Matrix(dims, dims);
    for (std::size_t a = 0; a < dims; ++a)
        for (std::size_t b = 0; b < dims; ++b) cov.total(a, b) = cov.within(a, b) + cov.between(a, b);
    return cov;
}

/// det(between) / det(within), via log-determinants. The within matrix gets a
/// relative ridge before factorization; a between matrix that is singular (as
/// it always is when the centers span fewer dimensions) yields exactly 0.
inline double fisher_score(const linalg::Matrix& between, const linalg::Matrix& within) {
    const std::size_t dims = within.rows();
    if (within.cols() != dims || between.rows() != dims || between.cols() != dims)
        throw shape_error("fisher_score: covariance shapes disagree");
    if (dims == 0) throw shape_error("fisher_score: empty covariances");

    const double ridge = 1e-10 * std::max(linalg::trace(within), 0.0) / static_cast<double>(dims);
    linalg::Matrix ridged = within;
    for (std::size_t j = 0; j < dims; ++j) ridged(j, j) += ridge;
    const linalg::Cholesky factor = linalg::cholesky(ridged);
    if (!factor.ok)
        throw numeric_error("fisher_score: within-class covariance singular at dimension " +
                            std::to_string(factor.failed_index));
    double log_det_within = 0.0;
    for (std::size_t j = 0; j < dims; ++j) log_det_within += 2.0 * std::log(factor.lower(j, j));

    const linalg::SymmetricEigen eigen = linalg::jacobi_eigen(between);
    double largest = 0.0;
    for (double value : eigen.values) largest = std::max(largest, std::abs(value));
    const double cutoff =
        largest * static_cast<double>(dims) * std::numeric_limits<double>::epsilon() * 64.0;
    double log_det_between = 0.0;
    for (double value : eigen.values) {
        if (!(value > cutoff)) return 0.0;
        log_det_between += std::log(value);
    }
    return std::exp(log_det_between - log_det_within);
}

/// Backward elimination trace over the antecedent dimensions.
struct FisherTrace {
    std::vector<std::size_t> elimination_order; // least needed first
    std::vector<double> scores_after_removal;   // separability after each removal
    FisherCovariances full;                     // covariances at the full feature set
};

/// Repeatedly removes the dimension whose removal leaves the highest
/// separability, until `keep` dimensions remain. Indices refer to columns of
/// the antecedent data (positions in the prototype centers).
inline FisherTrace rank_antecedents(std::span<const ClusterPrototype> prototypes,
                                    const linalg::Matrix& antecedent_data,
                                    const PartitionMatrix& partition, std::size_t keep) {
    FisherTrace trace;
    trace.full = fisher_covariances(prototypes, antecedent_data, partition);
    const std::size_t dims = trace.full.within.rows();
    if (keep < 1 || keep > dims)
        throw config_error("rank_antecedents: keep must be between 1 and the dimension count");

    std::vector<std::size_t> remaining(dims);
    std::iota(remaining.begin(), remaining.end(), std::size_t{0});
    while (remaining.size() > keep) {
        std::size_t best_position = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        std::vector<std::size_t> candidate;
        candidate.reserve(remaining.size() - 1);
        for (std::size_t drop = 0; drop < remaining.size(); ++drop) {
            candidate.clear();
            for (std::size_t idx = 0; idx < remaining.size(); ++idx)
                if (idx != drop) candidate.push_back(remaining[idx]);
            const double score =
                fisher_score(linalg::select_symmetric(trace.full.between, candidate),
                             linalg::select_symmetric(trace.full.within, candidate));
            if (score > best_score) {
                best_score = score;
                best_position = drop;
            }
        }
        trace.elimination_order.push_back(remaining[best_position]);
        trace.scores_after_removal.push_back(best_score);
        remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best_position));
    }
    return trace;
}

} // namespace tsfuzzy

#endif // TSFUZZY_SELECTION_HPP
