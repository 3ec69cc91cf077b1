#include "langbench/index.hpp"

#include <cmath>
#include <cstdio>

#include "langbench/oracle.hpp"

namespace langbench {

namespace {

bool near_integer(double x) { return std::fabs(x - std::llround(x)) < 1e-9; }

std::size_t checked_size(double x, const char* what) {
    if (!(x >= 1.0) || !near_integer(x))
        throw UsageError(std::string(what) + " must come out as a positive integer, got " +
                         std::to_string(x));
    return static_cast<std::size_t>(std::llround(x));
}

}  // namespace

void IndexParams::validate() const {
    if (magnitude_exponent < 0 || magnitude_exponent > 9)
        throw UsageError("magnitude exponent must lie in [0, 9]");
    if (ladder.empty()) throw UsageError("ladder must not be empty");
    double prev = 0.0;
    for (double b : ladder) {
        if (!(b > 0.0)) throw UsageError("ladder entries must be positive");
        if (!(b > prev)) throw UsageError("ladder entries must be strictly ascending");
        prev = b;
        train_size(b);
        test_size(b);
    }
    if (!(prior > 0.0 && prior < 1.0)) throw UsageError("prior must lie in (0,1)");
}

std::size_t IndexParams::train_size(double b) const {
    return checked_size(std::pow(10.0, magnitude_exponent) / b, "train size 10^N / b");
}

std::size_t IndexParams::test_size(double b) const {
    return checked_size(std::pow(10.0, magnitude_exponent) * b, "test size 10^N * b");
}

namespace {

class OracleLearner final : public Learner {
public:
    std::string name() const override { return "oracle"; }
    std::unique_ptr<Model> fit(const LanguageSpec& lang, const Corpus&) override {
        return make_oracle_model(lang);
    }
};

class FixedModelLearner final : public Learner {
public:
    explicit FixedModelLearner(std::string uri) : uri_(std::move(uri)) {}
    std::string name() const override { return "fixed:" + uri_; }
    std::unique_ptr<Model> fit(const LanguageSpec& lang, const Corpus&) override {
        return model_from_uri(uri_, lang);
    }

private:
    std::string uri_;
};

class MdlLearner final : public Learner {
public:
    explicit MdlLearner(EvolutionConfig cfg) : cfg_(cfg) {}
    std::string name() const override { return "mdl"; }
    std::unique_ptr<Model> fit(const LanguageSpec& lang, const Corpus& train) override {
        EvolveResult result = evolve(lang, train, cfg_);
        return make_genome_model(result.best, "mdl-evolved");
    }

private:
    EvolutionConfig cfg_;
};

}  // namespace

std::unique_ptr<Learner> make_oracle_learner() { return std::make_unique<OracleLearner>(); }

std::unique_ptr<Learner> make_fixed_model_learner(const std::string& model_uri) {
    return std::make_unique<FixedModelLearner>(model_uri);
}

std::unique_ptr<Learner> make_mdl_learner(EvolutionConfig cfg) {
    return std::make_unique<MdlLearner>(cfg);
}

std::unique_ptr<Learner> learner_from_spec(const std::string& spec,
                                           const EvolutionConfig& mdl_cfg) {
    if (spec == "oracle") return make_oracle_learner();
    if (spec.rfind("fixed:", 0) == 0) return make_fixed_model_learner(spec.substr(6));
    if (spec == "mdl") return make_mdl_learner(mdl_cfg);
    throw UsageError("unknown learner '" + spec + "' (expected oracle, fixed:<model-uri>, or mdl)");
}

std::string format_index_value(const IndexResult& result) {
    if (!result.value) return "<1";
    double b = *result.value;
    char buf[32];
    if (near_integer(b))
        std::snprintf(buf, sizeof buf, "%lld", std::llround(b));
    else
        std::snprintf(buf, sizeof buf, "%g", b);
    return buf;
}

IndexResult compute_index(Learner& learner, const LanguageSpec& lang, const IndexParams& params) {
    params.validate();
    IndexResult result;

    // shared-corpus diagnostic mode: one large sample, prefixes per entry
    Corpus shared;
    if (!params.resample_per_b) {
        std::size_t largest = 0;
        for (double b : params.ladder) largest = std::max(largest, params.train_size(b));
        shared = sample_training(lang, {params.seed, params.prior, largest});
    }

    for (double b : params.ladder) {
        LadderRecord record;
        record.b = b;
        record.train_size = params.train_size(b);
        record.test_size = params.test_size(b);
        try {
            Corpus train;
            if (params.resample_per_b) {
                std::uint64_t seed = params.seed + static_cast<std::uint64_t>(std::llround(b));
                train = sample_training(lang, {seed, params.prior, record.train_size});
            } else {
                train.language_id = shared.language_id;
                train.role = CorpusRole::train;
                train.strings.assign(shared.strings.begin(),
                                     shared.strings.begin() +
                                         static_cast<std::ptrdiff_t>(record.train_size));
                train.meta = shared.meta;
                train.meta.requested_size = record.train_size;
                train.meta.max_length = 0;
                for (const auto& s : train.strings)
                    train.meta.max_length = std::max(train.meta.max_length, s.size());
                train.meta.frontier = corpus_frontier(lang, train.strings);
            }
            record.train_frontier = train.meta.frontier;

            std::unique_ptr<Model> model = learner.fit(lang, train);
            Corpus test = enumerate_test(lang, train, record.test_size, params.max_string_length);
            TestReport report =
                test_success(*model, test, lang, lang.metric_kind, params.eval, false, false);
            record.success = report.success;
            record.accepted_strings = report.accepted_strings;
            record.min_accuracy = report.min_accuracy;
            record.pooled_accuracy = report.pooled_accuracy;
            if (report.first_failure_index) record.first_failure = report.first_failure_string;
        } catch (const std::exception& e) {
            record.success = false;
            record.error = e.what();
        }
        result.records.push_back(std::move(record));
    }

    for (const auto& record : result.records)
        if (record.success && (!result.value || record.b > *result.value)) result.value = record.b;
    return result;
}

SweepResult max_generalization_n(Model& model, const LanguageSpec& lang, long long n_limit,
                                 const EvalOptions& opts) {
    if (!lang.oracle) throw UsageError("language '" + lang.id + "' has no analytic oracle");
    OracleKind kind = *lang.oracle;
    if (kind == OracleKind::dyck1 || kind == OracleKind::dyck2)
        throw UsageError("max-n sweeps are defined for the exponent families only");
    if (n_limit < 1) throw UsageError("n limit must be at least 1");

    const std::string payload = lang.vocabulary.payload();
    SweepResult result;
    bool prefix_intact = true;
    ProbMatrix probs;
    for (long long n = 1; n <= n_limit; ++n) {
        std::vector<std::string> level;
        if (kind == OracleKind::addition) {
            for (long long k = 0; k <= n; ++k) {
                std::string s;
                s.reserve(static_cast<std::size_t>(2 * n));
                s.append(static_cast<std::size_t>(k), payload[0]);
                s.append(static_cast<std::size_t>(n - k), payload[1]);
                s.append(static_cast<std::size_t>(n), payload[2]);
                level.push_back(std::move(s));
            }
        } else {
            std::string s;
            for (char b : payload) s.append(static_cast<std::size_t>(n), b);
            level.push_back(std::move(s));
        }

        bool level_accepted = true;
        double level_accuracy = 1.0;
        for (const auto& s : level) {
            StringEvaluation eval = det_accuracy(model, s, lang, opts);
            level_accuracy = std::min(level_accuracy, eval.accuracy);
            if (!eval.accepted) level_accepted = false;
        }
        result.rows.push_back({n, level_accepted, level_accuracy});
        if (level_accepted && prefix_intact)
            result.max_n = n;
        else
            prefix_intact = false;
    }
    return result;
}

}  // namespace langbench
