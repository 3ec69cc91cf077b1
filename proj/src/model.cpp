#include "langbench/model.hpp"

#include "langbench/oracle.hpp"
#include "langbench/reference_nets.hpp"
#include "langbench/rnn.hpp"
#include "langbench/subprocess_model.hpp"

namespace langbench {

namespace {

class OracleModel final : public StepModel {
public:
    explicit OracleModel(const LanguageSpec& lang) : lang_(lang), walker_(lang) {
        probs_.assign(static_cast<std::size_t>(lang.vocabulary.size()), 0.0);
    }

    int vocab_size() const override { return lang_.vocabulary.size(); }
    std::string name() const override { return "builtin:oracle"; }
    std::unique_ptr<Model> clone() const override { return std::make_unique<OracleModel>(lang_); }

    void reset() override { walker_.reset(); }

    const double* step(int symbol_index) override {
        if (symbol_index != 0 && !walker_.advance(symbol_index))
            throw Error("oracle model fed a string outside " + lang_.id);
        std::uint32_t mask = walker_.valid_mask();
        int count = 0;
        for (std::uint32_t m = mask; m; m &= m - 1) ++count;
        double share = 1.0 / static_cast<double>(count);
        for (int i = 0; i < vocab_size(); ++i)
            probs_[static_cast<std::size_t>(i)] = (mask >> i) & 1u ? share : 0.0;
        return probs_.data();
    }

private:
    LanguageSpec lang_;
    OracleWalker walker_;
    std::vector<double> probs_;
};

class FixedDistributionModel final : public StepModel {
public:
    FixedDistributionModel(std::vector<double> probs, std::string name)
        : probs_(std::move(probs)), name_(std::move(name)) {}

    int vocab_size() const override { return static_cast<int>(probs_.size()); }
    std::string name() const override { return name_; }
    std::unique_ptr<Model> clone() const override {
        return std::make_unique<FixedDistributionModel>(probs_, name_);
    }
    void reset() override {}
    const double* step(int) override { return probs_.data(); }

private:
    std::vector<double> probs_;
    std::string name_;
};

}  // namespace

std::unique_ptr<Model> make_oracle_model(const LanguageSpec& lang) {
    return std::make_unique<OracleModel>(lang);
}

std::unique_ptr<Model> make_uniform_model(const LanguageSpec& lang) {
    std::size_t v = static_cast<std::size_t>(lang.vocabulary.size());
    return std::make_unique<FixedDistributionModel>(
        std::vector<double>(v, 1.0 / static_cast<double>(v)), "builtin:uniform");
}

std::unique_ptr<Model> make_always_model(const LanguageSpec& lang, char symbol) {
    int idx = lang.vocabulary.index_of(symbol);
    if (idx < 0)
        throw UsageError(std::string("always-model symbol '") + symbol +
                         "' is not in the vocabulary of " + lang.id);
    std::vector<double> probs(static_cast<std::size_t>(lang.vocabulary.size()), 0.0);
    probs[static_cast<std::size_t>(idx)] = 1.0;
    return std::make_unique<FixedDistributionModel>(std::move(probs),
                                                    std::string("builtin:always:") + symbol);
}

std::unique_ptr<Model> model_from_uri(const std::string& uri, const LanguageSpec& lang) {
    auto check_arity = [&](const RnnGenome& g, const std::string& what) {
        if (g.vocab != lang.vocabulary.size())
            throw UsageError(what + " has arity " + std::to_string(g.vocab) +
                             " but language '" + lang.id + "' has vocabulary size " +
                             std::to_string(lang.vocabulary.size()));
    };
    if (uri == "builtin:oracle") return make_oracle_model(lang);
    if (uri == "builtin:uniform") return make_uniform_model(lang);
    if (uri.rfind("builtin:always:", 0) == 0) {
        std::string sym = uri.substr(15);
        if (sym.size() != 1)
            throw UsageError("builtin:always:<symbol> expects a single symbol, got '" + sym + "'");
        return make_always_model(lang, sym[0]);
    }
    if (uri == "builtin:anbn-counter") {
        RnnGenome g = reference_anbn_counter();
        check_arity(g, uri);
        return make_genome_model(g, uri);
    }
    if (uri == "builtin:dyck1-net") {
        RnnGenome g = reference_dyck1();
        check_arity(g, uri);
        return make_genome_model(g, uri);
    }
    if (uri.rfind("builtin:", 0) == 0)
        throw UsageError("unknown builtin model '" + uri +
                         "' (known: oracle, uniform, always:<symbol>, anbn-counter, dyck1-net)");
    if (uri.rfind("subprocess:", 0) == 0)
        return make_subprocess_model(uri.substr(11), lang);
    RnnGenome g = load_genome(uri);
    check_arity(g, uri);
    return make_genome_model(g, uri);
}

}  // namespace langbench
