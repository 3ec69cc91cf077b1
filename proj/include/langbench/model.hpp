#pragma once

#include <memory>
#include <string>
#include <vector>

#include "langbench/corpus_io.hpp"
#include "langbench/language.hpp"

namespace langbench {

// Row-major [steps x vocab] probability matrix, reusable across strings.
class ProbMatrix {
public:
    void resize(std::size_t steps, int vocab) {
        steps_ = steps;
        vocab_ = vocab;
        data_.resize(steps * static_cast<std::size_t>(vocab));
    }
    double* row(std::size_t t) { return data_.data() + t * static_cast<std::size_t>(vocab_); }
    const double* row(std::size_t t) const {
        return data_.data() + t * static_cast<std::size_t>(vocab_);
    }
    std::size_t steps() const { return steps_; }
    int vocab() const { return vocab_; }

private:
    std::vector<double> data_;
    std::size_t steps_ = 0;
    int vocab_ = 0;
};

// Anything that consumes a framed prefix and emits one probability
// distribution over the vocabulary per step. Distributions must be
// non-negative and sum to 1 within 1e-9; metric evaluation enforces this.
class Model {
public:
    virtual ~Model() = default;
    virtual int vocab_size() const = 0;
    virtual void run(const FramedSequence& framed, ProbMatrix& out) = 0;
    // Fresh-state copy for parallel evaluation; null when unsupported.
    virtual std::unique_ptr<Model> clone() const { return nullptr; }
    virtual std::string name() const = 0;
};

// Step-wise models: reset state, then one distribution per consumed symbol.
class StepModel : public Model {
public:
    virtual void reset() = 0;
    // Returns vocab_size() probabilities, valid until the next call.
    virtual const double* step(int symbol_index) = 0;

    void run(const FramedSequence& framed, ProbMatrix& out) override;
};

// Exact predictor: uniform probability over the valid next symbols, zero
// elsewhere. The ceiling model for every metric.
std::unique_ptr<Model> make_oracle_model(const LanguageSpec& lang);

// Uniform distribution over the whole vocabulary at every step.
std::unique_ptr<Model> make_uniform_model(const LanguageSpec& lang);

// Probability 1 on one fixed symbol at every step.
std::unique_ptr<Model> make_always_model(const LanguageSpec& lang, char symbol);

// Resolves a model URI:
//   builtin:oracle | builtin:uniform | builtin:always:<symbol>
//   builtin:anbn-counter | builtin:dyck1-net
//   subprocess:<command line>
//   anything else: a genome file path.
std::unique_ptr<Model> model_from_uri(const std::string& uri, const LanguageSpec& lang);

}  // namespace langbench
