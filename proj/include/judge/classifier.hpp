#pragma once

// The judging function used by the analytics: anything callable on a
// (comment id, text) pair returning a Valence.

#include <concepts>
#include <string>
#include <string_view>

#include "judge/error.hpp"
#include "judge/external.hpp"
#include "judge/labels.hpp"
#include "judge/naive_bayes.hpp"

namespace judge {

struct JudgeInput {
    std::string_view id;
    std::string_view text;
};

template <typename C>
concept Judge = requires(const C& c, JudgeInput in) {
    { c(in) } -> std::convertible_to<Valence>;
};

class NBJudge {
public:
    explicit NBJudge(const NBModel& model) : model_(&model) {}
    Valence operator()(JudgeInput in) const { return nb_predict(*model_, in.text).valence; }

private:
    const NBModel* model_;
};

// Looks predictions up by comment id; an id without a prediction is a data error.
class ExternalJudge {
public:
    explicit ExternalJudge(const ExternalPredictions& preds) : preds_(&preds) {}
    Valence operator()(JudgeInput in) const {
        auto it = preds_->find(in.id);
        if (it == preds_->end()) throw DataError("no external prediction for comment " + std::string(in.id));
        return it->second.valence;
    }

private:
    const ExternalPredictions* preds_;
};

} // namespace judge
