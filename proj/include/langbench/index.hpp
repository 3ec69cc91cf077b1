#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "langbench/evolve.hpp"
#include "langbench/metrics.hpp"
#include "langbench/model.hpp"
#include "langbench/sampling.hpp"

namespace langbench {

// Scale ladder for the generalization index: train size 10^N / b, test size
// 10^N * b per ladder entry.
struct IndexParams {
    int magnitude_exponent = 3;  // N
    std::vector<double> ladder = {1.0, 2.0, 4.0, 10.0};
    EpsilonMargin epsilon;
    std::uint64_t seed = 100;
    double prior = 0.3;
    // Fresh training corpus per ladder entry (seed derived as seed + b). When
    // false, one corpus of the largest training size is sampled and each
    // entry uses its prefix (diagnostic mode).
    bool resample_per_b = true;
    EvalOptions eval;
    std::size_t max_string_length = 1'000'000;

    void validate() const;
    std::size_t train_size(double b) const;
    std::size_t test_size(double b) const;
};

// A training procedure: (language, train corpus) -> model.
class Learner {
public:
    virtual ~Learner() = default;
    virtual std::string name() const = 0;
    virtual std::unique_ptr<Model> fit(const LanguageSpec& lang, const Corpus& train) = 0;
};

// Ignores the corpus and returns the exact predictor.
std::unique_ptr<Learner> make_oracle_learner();

// Ignores the corpus and returns a fixed pretrained model (resolved per fit).
std::unique_ptr<Learner> make_fixed_model_learner(const std::string& model_uri);

// Runs the description-length evolutionary search on the training corpus.
std::unique_ptr<Learner> make_mdl_learner(EvolutionConfig cfg);

// Resolves a learner spec: "oracle", "fixed:<model-uri>", or "mdl".
std::unique_ptr<Learner> learner_from_spec(const std::string& spec, const EvolutionConfig& mdl_cfg);

struct LadderRecord {
    double b = 0.0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    bool success = false;
    std::optional<long long> train_frontier;
    std::size_t accepted_strings = 0;
    double min_accuracy = 1.0;
    double pooled_accuracy = 1.0;
    std::string first_failure;  // empty when none
    std::string error;          // learner/evaluation failure, recorded not fatal
};

struct IndexResult {
    std::vector<LadderRecord> records;  // one per ladder entry, ascending b
    // The maximal successful ladder entry; empty means "below one" (no entry
    // reached the criterion).
    std::optional<double> value;
};

std::string format_index_value(const IndexResult& result);  // e.g. "10" or "<1"

IndexResult compute_index(Learner& learner, const LanguageSpec& lang, const IndexParams& params);

struct SweepRow {
    long long n = 0;
    bool accepted = false;
    double accuracy = 1.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    long long max_n = 0;  // largest n with every level <= n fully accepted
};

// Largest exponent up to n_limit for which the model accepts every member
// string of the level (single-exponent families: one string per level; the
// addition language: all n+m = level combinations).
SweepResult max_generalization_n(Model& model, const LanguageSpec& lang, long long n_limit,
                                 const EvalOptions& opts);

}  // namespace langbench
