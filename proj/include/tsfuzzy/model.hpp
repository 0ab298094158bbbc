// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_MODEL_HPP
#define TSFUZZY_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"

namespace tsfuzzy {

/// Below this total activation the normalized mean is 0/0; predict falls back
/// to the rule whose antecedent center is nearest in variance-scaled distance.
inline constexpr double activation_floor = 1e-300;

/// Gaussian membership value exp(-(x - center)^2 / (2 variance)).
inline double gaussian_mf(double center, double variance, double x) {
    if (!(variance > 0.0))
        throw invalid_parameter("gaussian_mf: variance must be strictly positive");
    const double d = x - center;
    return std::exp(-0.5 * d * d / variance);
}

/// Axis-aligned multivariate Gaussian membership function: one center and one
/// variance per antecedent dimension.
struct GaussianAntecedent {
    std::vector<double> centers;
    std::vector<double> variances;

    friend bool operator==(const GaussianAntecedent&, const GaussianAntecedent&) = default;

    std::size_t dimensions() const { return centers.size(); }

    void validate() const {
        if (centers.empty()) throw invalid_parameter("antecedent needs at least one dimension");
        if (centers.size() != variances.size())
            throw shape_error("antecedent centers and variances differ in length");
        for (double v : variances)
            if (!(v > 0.0) || !std::isfinite(v))
                throw invalid_parameter("antecedent variance must be strictly positive");
        for (double c : centers)
            if (!std::isfinite(c)) throw invalid_parameter("antecedent center must be finite");
    }

    /// Sum over dimensions of the log membership values.
    double log_membership(std::span<const double> x) const {
        if (x.size() != centers.size())
            throw shape_error("antecedent evaluated with mismatched input dimension");
        double s = 0.0;
        for (std::size_t j = 0; j < centers.size(); ++j) {
            if (!(variances[j] > 0.0))
                throw invalid_parameter("gaussian_mf: variance must be strictly positive");
            const double d = x[j] - centers[j];
            s -= 0.5 * d * d / variances[j];
        }
        return s;
    }

    /// Squared distance to the center, scaled by the per-dimension variances.
    double scaled_distance(std::span<const double> x) const {
        return -2.0 * log_membership(x);
    }
};

/// Affine local model a^T phi + b.
struct LocalLinearModel {
    std::vector<double> gains;
    double offset = 0.0;

    friend bool operator==(const LocalLinearModel&, const LocalLinearModel&) = default;

    double evaluate(std::span<const double> phi) const {
        if (phi.size() != gains.size())
            throw shape_error("local model evaluated with mismatched input dimension");
        double s = offset;
        for (std::size_t j = 0; j < gains.size(); ++j) s += gains[j] * phi[j];
        return s;
    }
};

/// One fuzzy rule: Gaussian antecedent, affine consequent, and a rule weight.
/// Trained weights can exceed 1 (they carry Gaussian normalization constants);
/// only activation ratios matter in inference.
struct Rule {
    GaussianAntecedent antecedent;
    LocalLinearModel consequent;
    double weight = 1.0;

    friend bool operator==(const Rule&, const Rule&) = default;
};

/// Degree of fulfillment w * prod_j A_j(x_j). The per-dimension factors are
/// accumulated in log space and exponentiated once so long products of small
/// Gaussian factors do not underflow pairwise.
inline double rule_activation(const Rule& rule, std::span<const double> x) {
    if (!(rule.weight >= 0.0))
        throw invalid_parameter("rule_activation: rule weight must be non-negative");
    const double lm = rule.antecedent.log_membership(x);
    if (rule.weight == 0.0) return 0.0;
    return rule.weight * std::exp(lm);
}

/// Per-column input means plus the activity mean subtracted during training.
struct Centering {
    std::vector<double> column_means;
    double activity_mean = 0.0;

    friend bool operator==(const Centering&, const Centering&) = default;
};

struct Prediction {
    double value = 0.0;
    std::vector<double> rule_activations;
};

/// A trained Takagi-Sugeno model. Immutable after construction; predict and
/// predict_batch are pure and safe to call concurrently.
///
/// Inputs to predict are raw (uncentered) descriptor vectors of the full
/// dataset width; the stored centering is applied internally and the rules see
/// only the antecedent/consequent column subsets.
struct TSModel {
    std::vector<Rule> rules;
    std::vector<std::size_t> antecedent_columns;
    std::vector<std::size_t> consequent_columns;
    Centering centering;
    std::vector<std::string> column_names; // optional; used for name-matched prediction

    std::size_t input_width() const { return centering.column_means.size(); }
    std::size_t rule_count() const { return rules.size(); }

    void validate() const {
        if (rules.empty()) throw invalid_parameter("model needs at least one rule");
        const std::size_t width = input_width();
        auto check_columns = [width](const std::vector<std::size_t>& cols, const char* what) {
            for (std::size_t i = 0; i < cols.size(); ++i) {
                if (cols[i] >= width) throw shape_error(std::string(what) + " column index out of range");
                for (std::size_t j = i + 1; j < cols.size(); ++j)
                    if (cols[i] == cols[j])
                        throw invalid_parameter(std::string(what) + " columns contain a duplicate");
            }
        };
        check_columns(antecedent_columns, "antecedent");
        check_columns(consequent_columns, "consequent");
        if (antecedent_columns.empty())
            throw invalid_parameter("model needs at least one antecedent column");
        if (!column_names.empty() && column_names.size() != width)
            throw shape_error("column names do not match the model input width");
        for (const Rule& rule : rules) {
            rule.antecedent.validate();
            if (rule.antecedent.dimensions() != antecedent_columns.size())
                throw shape_error("rule antecedent dimension does not match the column set");
            if (rule.consequent.gains.size() != consequent_columns.size())
                throw shape_error("rule consequent dimension does not match the column set");
            if (!(rule.weight >= 0.0) || !std::isfinite(rule.weight))
                throw invalid_parameter("rule weight must be finite and non-negative");
            if (!std::isfinite(rule.consequent.offset))
                throw invalid_parameter("rule offset must be finite");
            for (double g : rule.consequent.gains)
                if (!std::isfinite(g)) throw invalid_parameter("rule gain must be finite");
        }
        for (double mu : centering.column_means)
            if (!std::isfinite(mu)) throw invalid_parameter("column mean must be finite");
        if (!std::isfinite(centering.activity_mean))
            throw invalid_parameter("activity mean must be finite");
    }

    /// Normalized fuzzy mean of the local model outputs.
    Prediction predict(std::span<const double> input) const {
        if (input.size() != input_width())
            throw shape_error("predict: input has wrong number of columns");

        std::vector<double> x(antecedent_columns.size());
        for (std::size_t j = 0; j < x.size(); ++j) {
            const std::size_t col = antecedent_columns[j];
            x[j] = input[col] - centering.column_means[col];
        }
        std::vector<double> phi(consequent_columns.size());
        for (std::size_t j = 0; j < phi.size(); ++j) {
            const std::size_t col = consequent_columns[j];
            phi[j] = input[col] - centering.column_means[col];
        }

        Prediction out;
        out.rule_activations.resize(rules.size());
        std::vector<double> locals(rules.size());
        double total = 0.0;
        double weighted = 0.0;
        for (std::size_t i = 0; i < rules.size(); ++i) {
            const double beta = rule_activation(rules[i], x);
            locals[i] = rules[i].consequent.evaluate(phi);
            out.rule_activations[i] = beta;
            total += beta;
            weighted += beta * locals[i];
        }

        double value;
        if (total < activation_floor) {
            std::size_t nearest = 0;
            double best = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < rules.size(); ++i) {
                const double d = rules[i].antecedent.scaled_distance(x);
                if (d < best) {
                    best = d;
                    nearest = i;
                }
            }
            value = locals[nearest];
        } else {
            value = weighted / total;
        }
        out.value = value + centering.activity_mean;
        return out;
    }

    /// predict applied to every row.
    std::vector<double> predict_batch(const linalg::Matrix& inputs) const {
        if (inputs.rows() == 0) return {};
        if (inputs.cols() != input_width())
            throw shape_error("predict_batch: input has wrong number of columns");
        std::vector<double> out;
        out.reserve(inputs.rows());
        for (std::size_t r = 0; r < inputs.rows(); ++r)
            out.push_back(predict(inputs.row(r)).value);
        return out;
    }

    /// Copy with every rule weight forced to 1 (user override of trained weights).
    TSModel with_unit_weights() const {
        TSModel out = *this;
        for (Rule& rule : out.rules) rule.weight = 1.0;
        return out;
    }

    friend bool operator==(const TSModel&, const TSModel&) = default;
};

} // namespace tsfuzzy

#endif // TSFUZZY_MODEL_HPP
