#pragma once

// Imports produced outside this library: per-comment valence predictions
// (e.g. from a fine-tuned transformer) and dense feature vectors (e.g.
// averaged sentence embeddings) for the logistic-regression baseline.

#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "judge/csv.hpp"
#include "judge/error.hpp"
#include "judge/labels.hpp"

namespace judge {

struct ExternalPrediction {
    Valence valence = Valence::Positive;
    std::optional<double> score;
};

using ExternalPredictions = std::map<std::string, ExternalPrediction, std::less<>>;

// CSV with header "comment_id,valence,score"; score may be empty.
inline ExternalPredictions load_external_predictions(std::istream& in) {
    ExternalPredictions out;
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> duplicates;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (!header_seen) {
            if (fields != std::vector<std::string>{"comment_id", "valence", "score"}) {
                throw SchemaError("expected header comment_id,valence,score", lineno);
            }
            header_seen = true;
            continue;
        }
        if (fields.size() != 3) throw SchemaError("expected 3 fields", lineno);
        auto valence = parse_valence(fields[1]);
        if (!valence) throw SchemaError("unknown valence '" + fields[1] + "'", lineno);
        ExternalPrediction p{*valence, std::nullopt};
        if (!fields[2].empty()) {
            try {
                std::size_t used = 0;
                p.score = std::stod(fields[2], &used);
                if (used != fields[2].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw SchemaError("bad score '" + fields[2] + "'", lineno);
            }
        }
        if (!out.emplace(fields[0], p).second) duplicates.push_back(fields[0]);
    }
    if (!duplicates.empty()) {
        std::string msg = "duplicate comment ids:";
        for (const auto& d : duplicates) msg += " " + d;
        throw DataError(msg);
    }
    return out;
}

struct FeatureTable {
    std::vector<std::string> ids;
    std::vector<std::vector<double>> rows;
    std::size_t dimension = 0;
};

// CSV with header "comment_id,f0,...,f{d-1}".
inline FeatureTable load_feature_vectors(std::istream& in) {
    FeatureTable t;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::map<std::string, std::size_t, std::less<>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        auto fields = csv::split_line(line);
        if (!header_seen) {
            if (fields.size() < 2 || fields[0] != "comment_id") {
                throw SchemaError("expected header comment_id,f0,...", lineno);
            }
            for (std::size_t j = 1; j < fields.size(); ++j) {
                if (fields[j] != "f" + std::to_string(j - 1)) throw SchemaError("feature columns must be f0..f{d-1}", lineno);
            }
            t.dimension = fields.size() - 1;
            header_seen = true;
            continue;
        }
        if (fields.size() != t.dimension + 1) throw SchemaError("wrong number of features", lineno);
        if (!seen.emplace(fields[0], lineno).second) throw SchemaError("duplicate comment id " + fields[0], lineno);
        std::vector<double> row(t.dimension);
        for (std::size_t j = 0; j < t.dimension; ++j) {
            try {
                std::size_t used = 0;
                row[j] = std::stod(fields[j + 1], &used);
                if (used != fields[j + 1].size()) throw std::invalid_argument("trailing");
            } catch (const std::exception&) {
                throw SchemaError("bad feature value '" + fields[j + 1] + "'", lineno);
            }
            if (!std::isfinite(row[j])) throw SchemaError("non-finite feature value", lineno);
        }
        t.ids.push_back(std::move(fields[0]));
        t.rows.push_back(std::move(row));
    }
    return t;
}

} // namespace judge
