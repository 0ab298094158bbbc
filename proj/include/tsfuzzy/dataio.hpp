// SPDX-License-Identifier: Apache-2.0
#ifndef TSFUZZY_DATAIO_HPP
#define TSFUZZY_DATAIO_HPP

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "common.hpp"
#include "errors.hpp"
#include "linalg.hpp"
#include "model.hpp"

namespace tsfuzzy {

/// Descriptor/activity table. Descriptors are one column per named input,
/// activity is the regression target. Centering state travels with the data.
struct Dataset {
    linalg::Matrix descriptors;            // N x k
    std::vector<double> activity;          // N
    std::vector<std::string> column_names; // k
    std::string activity_name = "y";
    bool centered = false;
    std::vector<double> column_means;      // k, zeros until centered
    double activity_mean = 0.0;

    std::size_t size() const { return activity.size(); }
    std::size_t width() const { return descriptors.cols(); }

    void validate() const {
        if (size() == 0 || width() == 0) throw invalid_parameter("dataset must be non-empty");
        if (descriptors.rows() != size())
            throw shape_error("descriptor rows do not match activity length");
        if (column_names.size() != width())
            throw shape_error("column name count does not match descriptor width");
        if (column_means.size() != width())
            throw shape_error("column mean count does not match descriptor width");
        for (std::size_t i = 0; i < column_names.size(); ++i)
            for (std::size_t j = i + 1; j < column_names.size(); ++j)
                if (column_names[i] == column_names[j])
                    throw invalid_parameter("duplicate column name: " + column_names[i]);
        for (std::size_t r = 0; r < descriptors.rows(); ++r)
            for (double v : descriptors.row(r))
                if (!std::isfinite(v)) throw invalid_parameter("dataset contains a non-finite value");
        for (double v : activity)
            if (!std::isfinite(v)) throw invalid_parameter("dataset contains a non-finite activity");
    }

    Centering centering() const { return {column_means, activity_mean}; }

    friend bool operator==(const Dataset&, const Dataset&) = default;
};

/// Raw parsed CSV: header plus an all-numeric body, no activity split.
struct CsvTable {
    std::vector<std::string> column_names;
    linalg::Matrix values;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

/// Splits one CSV record: comma separated, double quotes may wrap a field,
/// a doubled quote inside a quoted field escapes it.
inline std::vector<std::string> split_csv_record(const std::string& line, std::size_t line_number) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += c;
            }
        } else if (c == '"' && field.empty()) {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(field);
            field.clear();
        } else {
            field += c;
        }
    }
    if (quoted)
        throw parse_error("unterminated quote on line " + std::to_string(line_number));
    fields.push_back(field);
    return fields;
}

/// Locale-independent decimal parse of one cell; the whole trimmed cell must
/// be consumed and the value must be finite.
inline double parse_cell(std::string_view raw, std::size_t row, const std::string& column) {
    const std::string_view cell = trim(raw);
    const auto fail = [&](const char* why) {
        throw parse_error("row " + std::to_string(row) + ", column '" + column + "': " + why +
                          " ('" + std::string(raw) + "')");
    };
    if (cell.empty()) fail("empty cell");
    double value = 0.0;
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) fail("cannot parse as a decimal number");
    if (!std::isfinite(value)) fail("non-finite value");
    return value;
}

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace detail

/// Reads a whole CSV file: UTF-8, comma separated, header row required,
/// every body cell a decimal number.
inline CsvTable read_csv_table(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw io_error("cannot open " + path.string());

    std::vector<std::string> lines;
    std::string line;
    while (std::getline(file, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.empty()) throw parse_error(path.string() + ": file is empty");

    CsvTable table;
    for (const std::string& name : detail::split_csv_record(lines[0], 1))
        table.column_names.push_back(std::string(detail::trim(name)));
    for (std::size_t i = 0; i < table.column_names.size(); ++i) {
        if (table.column_names[i].empty())
            throw parse_error(path.string() + ": empty header name in column " + std::to_string(i + 1));
        for (std::size_t j = i + 1; j < table.column_names.size(); ++j)
            if (table.column_names[i] == table.column_names[j])
                throw parse_error(path.string() + ": duplicate header name '" + table.column_names[i] + "'");
    }

    const std::size_t width = table.column_names.size();
    table.values = linalg::Matrix(lines.size() - 1, width);
    for (std::size_t r = 1; r < lines.size(); ++r) {
        if (lines[r].empty())
            throw parse_error(path.string() + ": blank line " + std::to_string(r + 1));
        const auto cells = detail::split_csv_record(lines[r], r + 1);
        if (cells.size() != width)
            throw parse_error(path.string() + ": line " + std::to_string(r + 1) + " has " +
                              std::to_string(cells.size()) + " cells, expected " + std::to_string(width));
        for (std::size_t c = 0; c < width; ++c)
            table.values(r - 1, c) = detail::parse_cell(cells[c], r, table.column_names[c]);
    }
    return table;
}

/// Loads a descriptor/activity table. The activity column is selected by name,
/// or defaults to the last column when the name is empty.
inline Dataset load_csv(const std::filesystem::path& path, const std::string& activity_column = "") {
    const CsvTable table = read_csv_table(path);
    if (table.values.rows() == 0)
        throw parse_error(path.string() + ": empty dataset (header only)");

    std::size_t activity_index = table.column_names.size() - 1;
    if (!activity_column.empty()) {
        bool found = false;
        for (std::size_t j = 0; j < table.column_names.size(); ++j) {
            if (table.column_names[j] == activity_column) {
                activity_index = j;
                found = true;
                break;
            }
        }
        if (!found) throw config_error("activity column '" + activity_column + "' not found");
    }
    if (table.column_names.size() < 2)
        throw parse_error(path.string() + ": need at least one descriptor column besides the activity");

    Dataset data;
    const std::size_t n = table.values.rows();
    const std::size_t k = table.column_names.size() - 1;
    data.descriptors = linalg::Matrix(n, k);
    data.activity.resize(n);
    data.activity_name = table.column_names[activity_index];
    for (std::size_t j = 0, out = 0; j < table.column_names.size(); ++j) {
        if (j == activity_index) continue;
        data.column_names.push_back(table.column_names[j]);
        for (std::size_t r = 0; r < n; ++r) data.descriptors(r, out) = table.values(r, j);
        ++out;
    }
    for (std::size_t r = 0; r < n; ++r) data.activity[r] = table.values(r, activity_index);
    data.column_means.assign(k, 0.0);
    data.validate();
    return data;
}

/// Writes a dataset back out as CSV, full precision, activity last.
inline void save_csv(const Dataset& data, const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file) throw io_error("cannot write " + path.string());
    for (const std::string& name : data.column_names) file << name << ',';
    file << data.activity_name << '\n';
    for (std::size_t r = 0; r < data.size(); ++r) {
        for (double v : data.descriptors.row(r)) file << detail::format_double(v) << ',';
        file << detail::format_double(data.activity[r]) << '\n';
    }
    if (!file) throw io_error("failed writing " + path.string());
}

/// Subtracts the per-column and activity means, recording them in the result.
inline Dataset mean_center(const Dataset& input) {
    if (input.centered) throw state_error("mean_center: dataset is already centered");
    Dataset out = input;
    const std::size_t n = input.size();
    for (std::size_t j = 0; j < input.width(); ++j) {
        const double mean = linalg::column_mean(input.descriptors, j);
        out.column_means[j] = mean;
        for (std::size_t r = 0; r < n; ++r) out.descriptors(r, j) = input.descriptors(r, j) - mean;
    }
    double ymean = 0.0;
    for (double v : input.activity) ymean += v;
    ymean /= static_cast<double>(n);
    out.activity_mean = ymean;
    for (double& v : out.activity) v -= ymean;
    out.centered = true;
    return out;
}

/// Copy without one row; used by the leave-one-out harness.
inline Dataset drop_row(const Dataset& data, std::size_t row) {
    if (row >= data.size()) throw shape_error("drop_row: index out of range");
    Dataset out = data;
    out.descriptors = linalg::Matrix(data.size() - 1, data.width());
    out.activity.clear();
    for (std::size_t r = 0, dst = 0; r < data.size(); ++r) {
        if (r == row) continue;
        for (std::size_t j = 0; j < data.width(); ++j)
            out.descriptors(dst, j) = data.descriptors(r, j);
        out.activity.push_back(data.activity[r]);
        ++dst;
    }
    return out;
}

// --- model persistence ----------------------------------------------------

inline constexpr int model_schema_version = 1;

/// Configuration echo stored next to a saved model.
struct Provenance {
    std::size_t clusters = 0;
    double fuzziness = 0.0;
    double tolerance = 0.0;
    std::size_t max_iterations = 0;
    std::uint64_t seed = 0;
    std::optional<std::size_t> antecedent_keep;
    std::optional<std::size_t> consequent_keep;
    bool unit_weights = false;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

struct StoredModel {
    TSModel model;
    Provenance provenance;
};

inline void save_model(const TSModel& model, const std::filesystem::path& path,
                       const Provenance& provenance = {}) {
    model.validate();
    nlohmann::json j;
    j["schema_version"] = model_schema_version;
    j["column_names"] = model.column_names;
    j["column_means"] = model.centering.column_means;
    j["activity_mean"] = model.centering.activity_mean;
    j["antecedent_columns"] = model.antecedent_columns;
    j["consequent_columns"] = model.consequent_columns;
    nlohmann::json rules = nlohmann::json::array();
    for (const Rule& rule : model.rules) {
        nlohmann::json r;
        r["centers"] = rule.antecedent.centers;
        r["variances"] = rule.antecedent.variances;
        r["gains"] = rule.consequent.gains;
        r["offset"] = rule.consequent.offset;
        r["weight"] = rule.weight;
        rules.push_back(std::move(r));
    }
    j["rules"] = std::move(rules);
    nlohmann::json p;
    p["clusters"] = provenance.clusters;
    p["fuzziness"] = provenance.fuzziness;
    p["tolerance"] = provenance.tolerance;
    p["max_iterations"] = provenance.max_iterations;
    p["seed"] = provenance.seed;
    p["antecedent_keep"] = provenance.antecedent_keep ? nlohmann::json(*provenance.antecedent_keep)
                                                      : nlohmann::json(nullptr);
    p["consequent_keep"] = provenance.consequent_keep ? nlohmann::json(*provenance.consequent_keep)
                                                      : nlohmann::json(nullptr);
    p["unit_weights"] = provenance.unit_weights;
    j["provenance"] = std::move(p);

    std::ofstream file(path);
    if (!file) throw io_error("cannot write " + path.string());
    file << j.dump(2) << '\n';
    if (!file) throw io_error("failed writing " + path.string());
}

inline StoredModel load_model(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) throw io_error("cannot open " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(file);
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path.string() + ": corrupt model payload: " + e.what());
    }
    if (!j.is_object() || !j.contains("schema_version") ||
        !j["schema_version"].is_number_integer())
        throw parse_error(path.string() + ": corrupt model payload: missing schema_version");
    const int version = j["schema_version"].get<int>();
    if (version != model_schema_version)
        throw schema_error(path.string() + ": unsupported model schema version " +
                           std::to_string(version) + " (this build reads version " +
                           std::to_string(model_schema_version) + ")");

    StoredModel stored;
    try {
        TSModel& model = stored.model;
        model.column_names = j.at("column_names").get<std::vector<std::string>>();
        model.centering.column_means = j.at("column_means").get<std::vector<double>>();
        model.centering.activity_mean = j.at("activity_mean").get<double>();
        model.antecedent_columns = j.at("antecedent_columns").get<std::vector<std::size_t>>();
        model.consequent_columns = j.at("consequent_columns").get<std::vector<std::size_t>>();
        for (const nlohmann::json& r : j.at("rules")) {
            Rule rule;
            rule.antecedent.centers = r.at("centers").get<std::vector<double>>();
            rule.antecedent.variances = r.at("variances").get<std::vector<double>>();
            rule.consequent.gains = r.at("gains").get<std::vector<double>>();
            rule.consequent.offset = r.at("offset").get<double>();
            rule.weight = r.at("weight").get<double>();
            stored.model.rules.push_back(std::move(rule));
        }
        const nlohmann::json& p = j.at("provenance");
        stored.provenance.clusters = p.at("clusters").get<std::size_t>();
        stored.provenance.fuzziness = p.at("fuzziness").get<double>();
        stored.provenance.tolerance = p.at("tolerance").get<double>();
        stored.provenance.max_iterations = p.at("max_iterations").get<std::size_t>();
        stored.provenance.seed = p.at("seed").get<std::uint64_t>();
        if (!p.at("antecedent_keep").is_null())
            stored.provenance.antecedent_keep = p.at("antecedent_keep").get<std::size_t>();
        if (!p.at("consequent_keep").is_null())
            stored.provenance.consequent_keep = p.at("consequent_keep").get<std::size_t>();
        stored.provenance.unit_weights = p.at("unit_weights").get<bool>();
    } catch (const nlohmann::json::exception& e) {
        throw parse_error(path.string() + ": corrupt model payload: " + e.what());
    }
    stored.model.validate();
    return stored;
}

// --- synthetic benchmarks ---------------------------------------------------

/// Stand-in generators with known ground truth, used where a real descriptor
/// table is not available.
enum class BenchmarkKind {
    two_regime,            // piecewise-linear 1-D target
    sigmoid_blend,         // smooth sigmoid blend of two planes in 2-D
    irrelevant_descriptor, // two_regime plus one pure-noise column
};

inline BenchmarkKind parse_benchmark_kind(std::string_view name) {
    if (name == "two-regime" || name == "two_regime") return BenchmarkKind::two_regime;
    if (name == "sigmoid-blend" || name == "sigmoid_blend") return BenchmarkKind::sigmoid_blend;
    if (name == "irrelevant-descriptor" || name == "irrelevant_descriptor")
        return BenchmarkKind::irrelevant_descriptor;
    throw config_error("unknown benchmark kind '" + std::string(name) + "'");
}

/// Generating local model in raw (uncentered) coordinates.
struct BenchmarkTruth {
    std::vector<double> gains;
    double offset = 0.0;
};

struct Benchmark {
    Dataset dataset;
    std::vector<BenchmarkTruth> regimes;
    double noise_sigma = 0.0;
};

inline Benchmark generate_benchmark(BenchmarkKind kind, std::size_t samples, double noise_sigma,
                                    std::uint64_t seed) {
    if (samples == 0) throw config_error("generate_benchmark: need at least one sample");
    if (noise_sigma < 0.0) throw config_error("generate_benchmark: noise must be non-negative");
    // separate streams so the design points are identical across noise levels
    Rng rng(seed);
    Rng noise_rng(mix_seed(seed));
    Benchmark bench;
    bench.noise_sigma = noise_sigma;
    Dataset& data = bench.dataset;

    switch (kind) {
    case BenchmarkKind::two_regime: {
        data.descriptors = linalg::Matrix(samples, 1);
        data.activity.resize(samples);
        data.column_names = {"x"};
        for (std::size_t r = 0; r < samples; ++r) {
            const double x = rng.uniform(-2.0, 2.0);
            const double clean = x < 0.0 ? 2.0 * x + 1.0 : -x + 1.0;
            data.descriptors(r, 0) = x;
            data.activity[r] = clean + (noise_sigma > 0.0 ? noise_rng.normal(0.0, noise_sigma) : 0.0);
        }
        bench.regimes = {{{2.0}, 1.0}, {{-1.0}, 1.0}};
        break;
    }
    case BenchmarkKind::sigmoid_blend: {
        data.descriptors = linalg::Matrix(samples, 2);
        data.activity.resize(samples);
        data.column_names = {"u1", "u2"};
        for (std::size_t r = 0; r < samples; ++r) {
            const double u1 = rng.uniform(-2.0, 2.0);
            const double u2 = rng.uniform(-2.0, 2.0);
            const double blend = 1.0 / (1.0 + std::exp(-3.0 * u1));
            const double plane_a = 1.5 * u1 + 0.5 * u2 + 1.0;
            const double plane_b = -1.0 * u1 + 2.0 * u2 - 1.0;
            data.descriptors(r, 0) = u1;
            data.descriptors(r, 1) = u2;
            data.activity[r] = blend * plane_a + (1.0 - blend) * plane_b +
                               (noise_sigma > 0.0 ? noise_rng.normal(0.0, noise_sigma) : 0.0);
        }
        bench.regimes = {{{1.5, 0.5}, 1.0}, {{-1.0, 2.0}, -1.0}};
        break;
    }
    case BenchmarkKind::irrelevant_descriptor: {
        data.descriptors = linalg::Matrix(samples, 2);
        data.activity.resize(samples);
        data.column_names = {"x", "noise"};
        for (std::size_t r = 0; r < samples; ++r) {
            const double x = rng.uniform(-2.0, 2.0);
            const double irrelevant = rng.uniform(-2.0, 2.0);
            const double clean = x < 0.0 ? 2.0 * x + 1.0 : -x + 1.0;
            data.descriptors(r, 0) = x;
            data.descriptors(r, 1) = irrelevant;
            data.activity[r] = clean + (noise_sigma > 0.0 ? noise_rng.normal(0.0, noise_sigma) : 0.0);
        }
        bench.regimes = {{{2.0, 0.0}, 1.0}, {{-1.0, 0.0}, 1.0}};
        break;
    }
    }
    data.column_means.assign(data.width(), 0.0);
    data.validate();
    return bench;
}

} // namespace tsfuzzy

#endif // TSFUZZY_DATAIO_HPP
