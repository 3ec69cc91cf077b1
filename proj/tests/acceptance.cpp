// Acceptance suite: end-to-end checks of the benchmark engine, one printed
// pass/fail line per criterion. Run with --cli=<path> so the subprocess
// round-trip can spawn the command-line binary.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <vector>

#include "langbench/corpus_io.hpp"
#include "langbench/evolve.hpp"
#include "langbench/index.hpp"
#include "langbench/metrics.hpp"
#include "langbench/model.hpp"
#include "langbench/oracle.hpp"
#include "langbench/reference_nets.hpp"
#include "langbench/rnn.hpp"
#include "langbench/sampling.hpp"
#include "langbench/subprocess_model.hpp"
#include "support/brute_force.hpp"
#include "support/cli_runner.hpp"
#include "support/stats.hpp"

using namespace langbench;

namespace {

int failures = 0;

void criterion(int number, const std::string& title, const std::function<void()>& body) {
    auto start = std::chrono::steady_clock::now();
    std::string error;
    try {
        body();
    } catch (const std::exception& e) {
        error = e.what();
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (error.empty()) {
        std::printf("PASS  criterion %d: %s (%.1fs)\n", number, title.c_str(), seconds);
    } else {
        ++failures;
        std::printf("FAIL  criterion %d: %s (%.1fs)\n      %s\n", number, title.c_str(), seconds,
                    error.c_str());
    }
    std::fflush(stdout);
}

void require(bool ok, const std::string& what) {
    if (!ok) throw Error("check failed: " + what);
}

std::string anbn_string(long long n) {
    return std::string(static_cast<std::size_t>(n), 'a') +
           std::string(static_cast<std::size_t>(n), 'b');
}

Corpus make_test(const LanguageSpec& lang, std::vector<std::string> strings) {
    Corpus c;
    c.language_id = lang.id;
    c.role = CorpusRole::test;
    c.strings = std::move(strings);
    return c;
}

EvalOptions at_eps(double e) {
    EvalOptions opts;
    opts.epsilon = EpsilonMargin(e);
    return opts;
}

IndexParams standard_params(double eps) {
    IndexParams params;
    params.magnitude_exponent = 3;
    params.ladder = {1, 2, 4, 10};
    params.epsilon = EpsilonMargin(eps);
    params.eval.epsilon = EpsilonMargin(eps);
    params.seed = 100;
    params.prior = 0.3;
    return params;
}

}  // namespace

int main(int argc, char** argv) {
    test_support::capture_cli_flag(argc, argv);

    criterion(1, "scale-ladder arithmetic yields the worked size pairs", [] {
        IndexParams params = standard_params(0.0);
        params.validate();
        std::vector<std::pair<std::size_t, std::size_t>> expected = {
            {1000, 1000}, {500, 2000}, {250, 4000}, {100, 10000}};
        for (std::size_t i = 0; i < params.ladder.size(); ++i) {
            double b = params.ladder[i];
            require(params.train_size(b) == expected[i].first, "train size at b");
            require(params.test_size(b) == expected[i].second, "test size at b");
        }
    });

    criterion(2, "test enumeration runs from a^18 b^18 to a^2017 b^2017", [] {
        LanguageSpec lang = builtin_language("anbn");
        Corpus train;
        train.language_id = lang.id;
        train.role = CorpusRole::train;
        train.strings = {"ab", anbn_string(17)};
        train.meta.max_length = 34;
        train.meta.frontier = 17;
        Corpus test = enumerate_test(lang, train, 2000);
        require(test.strings.size() == 2000, "2000 test strings");
        require(test.strings.front() == anbn_string(18), "first string is a^18 b^18");
        require(test.strings.back() == anbn_string(2017), "last string is a^2017 b^2017");
        for (std::size_t i = 0; i < test.strings.size(); ++i)
            require(test.strings[i] == anbn_string(18 + static_cast<long long>(i)),
                    "sequential exponents");
    });

    criterion(3, "counter network: perfect deterministic accuracy to n=2000 and index 10", [] {
        LanguageSpec lang = builtin_language("anbn");
        auto net = make_genome_model(reference_anbn_counter(), "counter");
        for (long long n = 1; n <= 2000; ++n) {
            StringEvaluation eval = det_accuracy(*net, anbn_string(n), lang, at_eps(0.0));
            require(eval.accuracy == 1.0, "accuracy 1.0 at n=" + std::to_string(n));
        }
        auto learner = make_fixed_model_learner("builtin:anbn-counter");
        for (double eps : {0.005, 0.0}) {
            IndexResult result = compute_index(*learner, lang, standard_params(eps));
            require(result.value.has_value() && *result.value == 10.0,
                    "index 10 at epsilon " + std::to_string(eps));
        }
    });

    // opt-in long-running extension of criterion 3: the counter stays perfect
    // far beyond the index range (roughly a minute of wall time)
    if (std::getenv("LANGBENCH_LONG_SWEEP")) {
        criterion(3, "counter network long sweep to n=35000 (optional)", [] {
            LanguageSpec lang = builtin_language("anbn");
            auto net = make_genome_model(reference_anbn_counter(), "counter");
            EvalOptions opts;
            SweepResult sweep = max_generalization_n(*net, lang, 35'000, opts);
            require(sweep.max_n == 35'000, "accepted at every level up to 35000");
        });
    }

    criterion(4, "always-b degenerate model: accepted at 0.005, rejected at 0", [] {
        LanguageSpec lang = builtin_language("anbn");
        auto always_b = make_always_model(lang, 'b');
        for (long long n = 200; n < 300; ++n) {
            std::string s = anbn_string(n);
            StringEvaluation lenient = det_accuracy(*always_b, s, lang, at_eps(0.005));
            StringEvaluation strict = det_accuracy(*always_b, s, lang, at_eps(0.0));
            double exact = static_cast<double>(n - 1) / static_cast<double>(n);
            require(lenient.accuracy == exact, "accuracy is exactly (n-1)/n");
            require(lenient.accepted, "accepted at epsilon 0.005");
            require(!strict.accepted, "rejected at epsilon 0");
        }
    });

    criterion(5, "depth network: exact categorical accuracy on all short bracket strings", [] {
        LanguageSpec lang = builtin_language("dyck1");
        auto net = make_genome_model(reference_dyck1(), "depth-net");
        auto members = test_support::pcfg_members_upto(lang.pcfg(), 20);
        require(members.size() == 23714, "all bracket strings of length <= 20");

        ProbMatrix probs;
        for (const auto& s : members) {
            // evaluate the network against grammar-derived valid sets
            FramedSequence framed = frame(lang.vocabulary, s);
            net->run(framed, probs);
            test_support::EarleyChart chart(lang.pcfg(), s);
            for (std::size_t t = 0; t < framed.steps(); ++t) {
                auto expect = chart.expected_terminals(t);
                bool member_here = chart.member_prefix(t);
                const double* p = probs.row(t);
                for (int i = 0; i < lang.vocabulary.size(); ++i) {
                    char c = lang.vocabulary.symbol(i);
                    bool valid = i == 0 ? member_here : expect.count(c) > 0;
                    if (valid)
                        require(p[i] > 0.0, "positive probability on valid symbol");
                    else
                        require(p[i] == 0.0, "exact zero on invalid symbol");
                }
            }
            StringEvaluation eval = cat_accuracy(*net, s, lang, at_eps(0.0));
            require(eval.accuracy == 1.0, "categorical accuracy 1.0");
        }
    });

    criterion(6, "oracle learner reaches the ladder maximum on all six languages", [] {
        auto learner = make_oracle_learner();
        for (const auto& id : builtin_language_ids()) {
            LanguageSpec lang = builtin_language(id);
            IndexResult result = compute_index(*learner, lang, standard_params(0.0));
            require(result.value.has_value() && *result.value == 10.0, "index 10 for " + id);
        }
    });

    criterion(7, "sampled exponents follow the geometric law", [] {
        LanguageSpec lang = builtin_language("anbn");
        Corpus corpus = sample_training(lang, {100, 0.3, 100'000});
        std::map<long long, std::size_t> counts;
        double sum = 0.0;
        for (const auto& s : corpus.strings) {
            long long n = static_cast<long long>(s.size()) / 2;
            ++counts[n];
            sum += static_cast<double>(n);
        }
        double mean = sum / static_cast<double>(corpus.strings.size());
        require(std::fabs(mean - 7.0 / 3.0) <= 0.03 * (7.0 / 3.0), "mean within 3% of 7/3");
        double p_value = test_support::geometric_gof_p_value(counts, 0.3, corpus.strings.size());
        require(p_value > 0.001, "chi-squared fit at significance 0.001 (p=" +
                                     std::to_string(p_value) + ")");
    });

    criterion(8, "description-length machinery: pinned costs and improving search", [] {
        require(encoding_length(reference_anbn_counter()) == 185.0,
                "pinned encoding length of the counter genome");

        LanguageSpec lang4 = builtin_language("anbncn");
        Corpus corpus4 = sample_training(lang4, {100, 0.3, 500});
        std::size_t framed_length = 0;
        for (const auto& s : corpus4.strings) framed_length += s.size() + 1;
        require(data_cost(empty_genome(4), lang4, corpus4) ==
                    2.0 * static_cast<double>(framed_length),
                "uniform data cost is exactly L * log2 V");

        LanguageSpec lang = builtin_language("anbn");
        Corpus corpus = sample_training(lang, {100, 0.3, 500});
        EvolutionConfig cfg;
        cfg.population_size = 100;
        cfg.island_size = 50;
        cfg.generations = 200;
        cfg.tournament_size = 2;
        cfg.elite_ratio = 0.02;
        cfg.migration_interval_generations = 50;
        cfg.migration_interval_seconds = 0;
        cfg.stagnation_seconds = 0;
        cfg.seed = 100;
        EvolveResult result = evolve(lang, corpus, cfg);
        require(result.trace.back().best_total < result.trace.front().best_total,
                "final best strictly below the initial best");
        for (std::size_t i = 1; i < result.trace.size(); ++i)
            require(result.trace[i].best_total <= result.trace[i - 1].best_total,
                    "non-increasing best-so-far trace");
    });

    criterion(9, "subprocess adapter reproduces the in-process oracle", [] {
        require(!test_support::cli_path().empty(), "--cli=<binary> argument");
        LanguageSpec lang = builtin_language("anbn");
        Corpus train = sample_training(lang, {100, 0.3, 50});
        Corpus test = enumerate_test(lang, train, 60);

        auto direct = make_oracle_model(lang);
        TestReport expected =
            test_success(*direct, test, lang, MetricKind::deterministic, at_eps(0.0));

        auto served = make_subprocess_model(
            test_support::cli_path() + " serve --language anbn --model builtin:oracle", lang);
        TestReport actual =
            test_success(*served, test, lang, MetricKind::deterministic, at_eps(0.0));

        require(expected.success && actual.success, "both evaluations succeed");
        require(expected.accepted_strings == actual.accepted_strings, "same acceptance counts");
        require(expected.pooled_correct == actual.pooled_correct &&
                    expected.pooled_evaluated == actual.pooled_evaluated,
                "identical step counts");

        // and probability vectors survive the text round-trip bit-exactly
        ProbMatrix a, b;
        FramedSequence framed = frame(lang.vocabulary, test.strings.front());
        direct->run(framed, a);
        served->run(framed, b);
        for (std::size_t t = 0; t < framed.steps(); ++t)
            for (int i = 0; i < 3; ++i)
                require(a.row(t)[i] == b.row(t)[i], "identical probabilities");
    });

    if (failures == 0)
        std::printf("all criteria passed\n");
    else
        std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
