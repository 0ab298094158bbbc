// SPDX-License-Identifier: Apache-2.0
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include <tsfuzzy/common.hpp>
#include <tsfuzzy/model.hpp>

using namespace tsfuzzy;

namespace {

Rule make_rule(std::vector<double> centers, std::vector<double> variances,
               std::vector<double> gains, double offset, double weight) {
    Rule rule;
    rule.antecedent.centers = std::move(centers);
    rule.antecedent.variances = std::move(variances);
    rule.consequent.gains = std::move(gains);
    rule.consequent.offset = offset;
    rule.weight = weight;
    return rule;
}

/// 1-D model over a single column with zero centering; both column sets = {0}.
TSModel make_1d_model(std::vector<Rule> rules) {
    TSModel model;
    model.rules = std::move(rules);
    model.antecedent_columns = {0};
    model.consequent_columns = {0};
    model.centering.column_means = {0.0};
    model.centering.activity_mean = 0.0;
    model.validate();
    return model;
}

} // namespace

TEST_CASE("gaussian_mf evaluates the Gaussian and rejects bad variance") {
    CHECK(gaussian_mf(0.0, 1.0, 0.0) == 1.0);
    CHECK(gaussian_mf(3.5, 0.7, 3.5) == 1.0);
    CHECK(gaussian_mf(0.0, 1.0, 1.37) == gaussian_mf(0.0, 1.0, -1.37));
    CHECK(gaussian_mf(2.0, 0.5, 3.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
    CHECK(gaussian_mf(2.0, 0.5, 3.0) == doctest::Approx(0.367879).epsilon(1e-5));
    CHECK_THROWS_AS(gaussian_mf(0.0, 0.0, 1.0), invalid_parameter);
    CHECK_THROWS_AS(gaussian_mf(0.0, -0.3, 1.0), invalid_parameter);
}

TEST_CASE("rule_activation at the center, with zero weight, and in 2-D") {
    Rule rule = make_rule({0.5, -1.0}, {1.0, 2.0}, {}, 0.0, 1.0);
    const std::vector<double> at_center{0.5, -1.0};
    CHECK(rule_activation(rule, at_center) == 1.0);

    rule.weight = 0.0;
    const std::vector<double> anywhere{3.0, 4.0};
    CHECK(rule_activation(rule, anywhere) == 0.0);

    Rule unit = make_rule({0.0, 0.0}, {1.0, 1.0}, {}, 0.0, 1.0);
    const std::vector<double> ones{1.0, 1.0};
    CHECK(rule_activation(unit, ones) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));

    const std::vector<double> too_short{1.0};
    CHECK_THROWS_AS(rule_activation(unit, too_short), shape_error);
    Rule negative = make_rule({0.0}, {1.0}, {}, 0.0, -0.1);
    const std::vector<double> x{0.0};
    CHECK_THROWS_AS(rule_activation(negative, x), invalid_parameter);
}

TEST_CASE("product form and exponential-of-sum form agree to 1e-12 relative") {
    Rng rng(101);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t dims = 1 + rng.below(5);
        Rule rule;
        std::vector<double> x(dims);
        for (std::size_t j = 0; j < dims; ++j) {
            rule.antecedent.centers.push_back(rng.uniform(-3.0, 3.0));
            rule.antecedent.variances.push_back(rng.uniform(0.1, 4.0));
            x[j] = rule.antecedent.centers[j] +
                   rng.uniform(-3.0, 3.0) * std::sqrt(rule.antecedent.variances[j]);
        }
        rule.weight = rng.uniform(0.0, 1.5);

        double product = rule.weight;
        for (std::size_t j = 0; j < dims; ++j)
            product *= gaussian_mf(rule.antecedent.centers[j], rule.antecedent.variances[j], x[j]);
        const double activation = rule_activation(rule, x);
        if (product == 0.0) {
            CHECK(activation == 0.0);
        } else {
            CHECK(std::abs(activation - product) <= 1e-12 * product);
        }
    }
}

TEST_CASE("predict: single constant rule") {
    TSModel model;
    model.rules.push_back(make_rule({0.0}, {1.0}, {}, 5.0, 1.0));
    model.antecedent_columns = {0};
    model.consequent_columns = {};
    model.centering.column_means = {0.0};
    model.centering.activity_mean = 0.0;
    model.validate();

    const std::vector<double> u1{0.3};
    const std::vector<double> u2{-7.0};
    CHECK(model.predict(u1).value == 5.0);
    CHECK(model.predict(u2).value == 5.0);

    linalg::Matrix batch(3, 1);
    batch(0, 0) = 1.0;
    batch(1, 0) = -2.0;
    batch(2, 0) = 0.0;
    const auto values = model.predict_batch(batch);
    REQUIRE(values.size() == 3);
    for (double v : values) CHECK(v == 5.0);

    CHECK(model.predict_batch(linalg::Matrix()).empty());
    linalg::Matrix single(1, 1);
    single(0, 0) = 0.25;
    CHECK(model.predict_batch(single) == std::vector<double>{model.predict(single.row(0)).value});
}

TEST_CASE("predict: identical consequents dominate any activation split") {
    auto shared = make_rule({-1.0}, {0.5}, {2.0}, 0.25, 0.8);
    auto other = make_rule({1.0}, {0.7}, {2.0}, 0.25, 0.3);
    TSModel model = make_1d_model({shared, other});
    for (double x : {-1.5, -0.2, 0.9, 2.0}) {
        const std::vector<double> u{x};
        CHECK(model.predict(u).value == doctest::Approx(2.0 * x + 0.25).epsilon(1e-12));
    }
}

TEST_CASE("predict: hand-computed weighted mean") {
    // Both antecedents centered at the input, so activations equal the weights.
    TSModel model = make_1d_model({make_rule({0.0}, {1.0}, {0.0}, 1.0, 0.8),
                                   make_rule({0.0}, {1.0}, {0.0}, 2.0, 0.2)});
    const std::vector<double> u{0.0};
    const Prediction pred = model.predict(u);
    CHECK(pred.value == doctest::Approx(1.2).epsilon(1e-12));
    REQUIRE(pred.rule_activations.size() == 2);
    CHECK(pred.rule_activations[0] == doctest::Approx(0.8));
    CHECK(pred.rule_activations[1] == doctest::Approx(0.2));
}

TEST_CASE("predict: far extrapolation falls back to the nearest rule") {
    TSModel model = make_1d_model({make_rule({0.0}, {1.0}, {0.0}, 10.0, 1.0),
                                   make_rule({100.0}, {1.0}, {0.0}, -10.0, 1.0)});
    const std::vector<double> near_left{-1.0e6};
    const std::vector<double> near_right{1.0e6};
    CHECK(model.predict(near_left).value == 10.0);
    CHECK(model.predict(near_right).value == -10.0);
    // activations really did underflow
    for (double beta : model.predict(near_left).rule_activations) CHECK(beta == 0.0);
}

TEST_CASE("predict rejects mismatched input width") {
    TSModel model = make_1d_model({make_rule({0.0}, {1.0}, {1.0}, 0.0, 1.0)});
    const std::vector<double> wide{1.0, 2.0};
    CHECK_THROWS_AS(model.predict(wide), shape_error);
    linalg::Matrix batch(2, 2);
    CHECK_THROWS_AS(model.predict_batch(batch), shape_error);
}

TEST_CASE("prediction stays within the local model range") {
    Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t rules = 1 + rng.below(4);
        TSModel model;
        for (std::size_t i = 0; i < rules; ++i)
            model.rules.push_back(make_rule({rng.uniform(-2.0, 2.0)}, {rng.uniform(0.05, 2.0)},
                                            {rng.uniform(-3.0, 3.0)}, rng.uniform(-3.0, 3.0),
                                            rng.uniform(0.001, 1.0)));
        model.antecedent_columns = {0};
        model.consequent_columns = {0};
        model.centering.column_means = {0.0};
        model.centering.activity_mean = 0.0;
        model.validate();

        const std::vector<double> u{rng.uniform(-4.0, 4.0)};
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (const Rule& rule : model.rules) {
            const double local = rule.consequent.gains[0] * u[0] + rule.consequent.offset;
            lo = std::min(lo, local);
            hi = std::max(hi, local);
        }
        const double value = model.predict(u).value;
        CHECK(value >= lo - 1e-12 * (1.0 + std::abs(lo)));
        CHECK(value <= hi + 1e-12 * (1.0 + std::abs(hi)));
    }
}

TEST_CASE("translation consistency: shifting inputs and means together is a no-op") {
    Rng rng(31);
    TSModel model;
    model.rules.push_back(make_rule({0.4, -0.3}, {0.6, 1.2}, {1.5, -2.0}, 0.7, 0.9));
    model.rules.push_back(make_rule({-0.9, 0.8}, {0.9, 0.4}, {-0.5, 1.0}, -0.2, 0.4));
    model.antecedent_columns = {0, 1};
    model.consequent_columns = {1, 0};
    model.centering.column_means = {0.25, -1.5};
    model.centering.activity_mean = 3.0;
    model.validate();

    for (int trial = 0; trial < 50; ++trial) {
        const std::vector<double> u{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
        const std::vector<double> shift{rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)};
        TSModel shifted = model;
        shifted.centering.column_means[0] += shift[0];
        shifted.centering.column_means[1] += shift[1];
        const std::vector<double> moved{u[0] + shift[0], u[1] + shift[1]};
        CHECK(shifted.predict(moved).value ==
              doctest::Approx(model.predict(u).value).epsilon(1e-9));
    }
}

TEST_CASE("model validation catches structural mistakes") {
    TSModel model = make_1d_model({make_rule({0.0}, {1.0}, {1.0}, 0.0, 1.0)});
    TSModel bad = model;
    bad.antecedent_columns = {0, 0};
    bad.rules[0].antecedent.centers = {0.0, 0.0};
    bad.rules[0].antecedent.variances = {1.0, 1.0};
    CHECK_THROWS_AS(bad.validate(), invalid_parameter);

    bad = model;
    bad.antecedent_columns = {5};
    CHECK_THROWS_AS(bad.validate(), shape_error);

    bad = model;
    bad.rules[0].antecedent.variances = {0.0};
    CHECK_THROWS_AS(bad.validate(), invalid_parameter);

    bad = model;
    bad.rules.clear();
    CHECK_THROWS_AS(bad.validate(), invalid_parameter);
}

TEST_CASE("with_unit_weights overrides every trained weight") {
    TSModel model = make_1d_model({make_rule({0.0}, {1.0}, {1.0}, 0.0, 0.37),
                                   make_rule({1.0}, {1.0}, {1.0}, 0.0, 2.4)});
    const TSModel overridden = model.with_unit_weights();
    for (const Rule& rule : overridden.rules) CHECK(rule.weight == 1.0);
    CHECK(model.rules[0].weight == 0.37); // original untouched
}
