#include "langbench/metrics.hpp"

#include <cmath>

#include "langbench/oracle.hpp"

namespace langbench {

namespace {

void check_distribution(const double* p, int vocab, const std::string& model_name) {
    double sum = 0.0;
    for (int i = 0; i < vocab; ++i) {
        if (!(p[i] >= 0.0))
            throw Error("model '" + model_name + "' emitted a negative probability");
        sum += p[i];
    }
    if (std::fabs(sum - 1.0) > 1e-9)
        throw Error("model '" + model_name + "' emitted a distribution summing to " +
                    std::to_string(sum));
}

void check_metric_language(MetricKind metric, const LanguageSpec& lang) {
    if (metric != lang.metric_kind)
        throw UsageError("metric " + to_string(metric) + " does not match language '" + lang.id +
                         "' (" + to_string(lang.metric_kind) + ")");
}

// Walks the string through the oracle and the model together. Calls
// `step(mask, target, probs)` for every framed step; `mask` is the valid-next
// mask for the prefix before the target symbol.
template <typename StepFn>
void walk_evaluation(Model& model, const std::string& s, const LanguageSpec& lang,
                     ProbMatrix& probs, StepFn&& step) {
    FramedSequence framed = frame(lang.vocabulary, s);
    model.run(framed, probs);
    if (probs.steps() != framed.steps())
        throw Error("model '" + model.name() + "' emitted " + std::to_string(probs.steps()) +
                    " distributions for " + std::to_string(framed.steps()) + " steps");

    OracleWalker walker(lang);
    const int vocab = lang.vocabulary.size();
    for (std::size_t t = 0; t < framed.steps(); ++t) {
        const double* p = probs.row(t);
        check_distribution(p, vocab, model.name());
        int target = framed.targets[t];
        if (!walker.is_valid_next(target))
            throw Error("string is not a member of " + lang.id + ": symbol at position " +
                        std::to_string(t) + " has no derivation");
        step(walker.valid_mask(), target, p);
        if (target != 0) walker.advance(target);
    }
}

StringEvaluation finish(std::size_t evaluated, std::size_t correct, double epsilon) {
    StringEvaluation eval;
    eval.evaluated_steps = evaluated;
    eval.correct_steps = correct;
    eval.accuracy = evaluated == 0
                        ? 1.0
                        : static_cast<double>(correct) / static_cast<double>(evaluated);
    eval.accepted = eval.accuracy >= 1.0 - epsilon;
    return eval;
}

}  // namespace

namespace {

StringEvaluation det_accuracy_buffered(Model& model, const std::string& s,
                                       const LanguageSpec& lang, const EvalOptions& opts,
                                       ProbMatrix& probs) {
    std::size_t evaluated = 0, correct = 0;
    const int vocab = lang.vocabulary.size();
    walk_evaluation(model, s, lang, probs, [&](std::uint32_t mask, int target, const double* p) {
        if ((mask & (mask - 1)) != 0) return;  // more than one valid symbol
        ++evaluated;
        if (opts.det_rule == DetRule::above_half) {
            if (p[target] > 0.5) ++correct;
            return;
        }
        bool strictly_greatest = true;
        for (int i = 0; i < vocab; ++i)
            if (i != target && p[i] >= p[target]) strictly_greatest = false;
        if (strictly_greatest) ++correct;
    });
    return finish(evaluated, correct, opts.epsilon.value);
}

StringEvaluation cat_accuracy_buffered(Model& model, const std::string& s,
                                       const LanguageSpec& lang, const EvalOptions& opts,
                                       ProbMatrix& probs) {
    std::size_t evaluated = 0, correct = 0;
    const int vocab = lang.vocabulary.size();
    const double threshold = opts.validity();
    walk_evaluation(model, s, lang, probs,
                    [&](std::uint32_t mask, int /*target*/, const double* p) {
                        ++evaluated;
                        for (int i = 0; i < vocab; ++i) {
                            bool valid = (mask >> i) & 1u;
                            if (valid ? !(p[i] > threshold) : !(p[i] <= threshold)) return;
                        }
                        ++correct;
                    });
    return finish(evaluated, correct, opts.epsilon.value);
}

StringEvaluation evaluate_buffered(Model& model, const std::string& s, const LanguageSpec& lang,
                                   MetricKind metric, const EvalOptions& opts, ProbMatrix& probs) {
    return metric == MetricKind::deterministic
               ? det_accuracy_buffered(model, s, lang, opts, probs)
               : cat_accuracy_buffered(model, s, lang, opts, probs);
}

}  // namespace

StringEvaluation det_accuracy(Model& model, const std::string& s, const LanguageSpec& lang,
                              const EvalOptions& opts) {
    check_metric_language(MetricKind::deterministic, lang);
    ProbMatrix probs;
    return det_accuracy_buffered(model, s, lang, opts, probs);
}

StringEvaluation cat_accuracy(Model& model, const std::string& s, const LanguageSpec& lang,
                              const EvalOptions& opts) {
    check_metric_language(MetricKind::categorical, lang);
    ProbMatrix probs;
    return cat_accuracy_buffered(model, s, lang, opts, probs);
}

StringEvaluation evaluate_string(Model& model, const std::string& s, const LanguageSpec& lang,
                                 MetricKind metric, const EvalOptions& opts) {
    check_metric_language(metric, lang);
    ProbMatrix probs;
    return evaluate_buffered(model, s, lang, metric, opts, probs);
}

bool accepts(Model& model, const std::string& s, const LanguageSpec& lang, MetricKind metric,
             const EvalOptions& opts) {
    return evaluate_string(model, s, lang, metric, opts).accepted;
}

TestReport test_success(Model& model, const Corpus& test, const LanguageSpec& lang,
                        MetricKind metric, const EvalOptions& opts, bool pooled, bool keep_rows) {
    if (test.role != CorpusRole::test)
        throw UsageError("test_success expects a corpus with role=test");
    check_metric_language(metric, lang);

    TestReport report;
    report.total_strings = test.strings.size();
    bool all_accepted = true;
    ProbMatrix probs;
    for (std::size_t i = 0; i < test.strings.size(); ++i) {
        const std::string& s = test.strings[i];
        StringEvaluation eval = evaluate_buffered(model, s, lang, metric, opts, probs);
        report.pooled_evaluated += eval.evaluated_steps;
        report.pooled_correct += eval.correct_steps;
        report.min_accuracy = std::min(report.min_accuracy, eval.accuracy);
        if (eval.accepted) {
            ++report.accepted_strings;
        } else if (all_accepted) {
            all_accepted = false;
            report.first_failure_index = i;
            report.first_failure_string = s.size() <= 64 ? s : s.substr(0, 61) + "...";
        }
        if (keep_rows)
            report.rows.push_back(
                {s.size(), eval.evaluated_steps, eval.correct_steps, eval.accuracy, eval.accepted});
    }
    report.pooled_accuracy =
        report.pooled_evaluated == 0
            ? 1.0
            : static_cast<double>(report.pooled_correct) /
                  static_cast<double>(report.pooled_evaluated);
    report.success = pooled ? report.pooled_accuracy >= 1.0 - opts.epsilon.value : all_accepted;
    return report;
}

}  // namespace langbench
