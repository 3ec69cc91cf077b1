#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "langbench/corpus.hpp"
#include "langbench/model.hpp"

namespace langbench {

// Error margin in [0, 1].
struct EpsilonMargin {
    double value = 0.0;

    EpsilonMargin() = default;
    EpsilonMargin(double v) : value(v) {
        if (!(v >= 0.0 && v <= 1.0)) throw UsageError("epsilon must lie in [0,1]");
    }
};

// How "assigns the majority probability" is read for deterministic accuracy:
// strictly greatest mass (ties count as incorrect), or mass above one half.
enum class DetRule { strict_argmax, above_half };

struct EvalOptions {
    EpsilonMargin epsilon;                          // acceptance margin
    std::optional<EpsilonMargin> validity_epsilon;  // categorical threshold; defaults to epsilon
    DetRule det_rule = DetRule::strict_argmax;

    double validity() const { return validity_epsilon ? validity_epsilon->value : epsilon.value; }
};

struct StringEvaluation {
    std::size_t evaluated_steps = 0;
    std::size_t correct_steps = 0;
    double accuracy = 1.0;  // correct/evaluated, 1.0 when nothing was evaluated
    bool accepted = false;
};

// Deterministic accuracy: over steps with exactly one valid next symbol, the
// fraction where the model puts the greatest probability on it. Skips all
// other steps.
StringEvaluation det_accuracy(Model& model, const std::string& s, const LanguageSpec& lang,
                              const EvalOptions& opts = {});

// Categorical accuracy: over all steps, the fraction where every valid next
// symbol receives probability > epsilon and every other symbol <= epsilon.
StringEvaluation cat_accuracy(Model& model, const std::string& s, const LanguageSpec& lang,
                              const EvalOptions& opts = {});

StringEvaluation evaluate_string(Model& model, const std::string& s, const LanguageSpec& lang,
                                 MetricKind metric, const EvalOptions& opts = {});

bool accepts(Model& model, const std::string& s, const LanguageSpec& lang, MetricKind metric,
             const EvalOptions& opts = {});

struct StringRow {
    std::size_t length = 0;
    std::size_t evaluated_steps = 0;
    std::size_t correct_steps = 0;
    double accuracy = 1.0;
    bool accepted = false;
};

struct TestReport {
    bool success = false;
    std::size_t total_strings = 0;
    std::size_t accepted_strings = 0;
    std::optional<std::size_t> first_failure_index;
    std::string first_failure_string;  // truncated for display
    double min_accuracy = 1.0;
    double pooled_accuracy = 1.0;  // pooled over steps, diagnostic
    std::size_t pooled_evaluated = 0;
    std::size_t pooled_correct = 0;
    std::vector<StringRow> rows;  // filled when keep_rows
};

// Success = every string accepted. With `pooled`, success instead requires
// pooled step accuracy >= 1 - epsilon across the whole set.
TestReport test_success(Model& model, const Corpus& test, const LanguageSpec& lang,
                        MetricKind metric, const EvalOptions& opts = {}, bool pooled = false,
                        bool keep_rows = false);

}  // namespace langbench
