#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "langbench/corpus_io.hpp"
#include "langbench/evolve.hpp"
#include "langbench/index.hpp"
#include "langbench/language.hpp"
#include "langbench/mdl.hpp"
#include "langbench/metrics.hpp"
#include "langbench/model.hpp"
#include "langbench/oracle.hpp"
#include "langbench/reference_nets.hpp"
#include "langbench/rnn.hpp"
#include "langbench/sampling.hpp"
#include "langbench/version.hpp"

namespace py = pybind11;
using namespace langbench;

namespace {

EvalOptions make_opts(double epsilon, std::optional<double> validity, const std::string& det_rule) {
    EvalOptions opts;
    opts.epsilon = EpsilonMargin(epsilon);
    if (validity) opts.validity_epsilon = EpsilonMargin(*validity);
    opts.det_rule = det_rule == "majority" ? DetRule::above_half : DetRule::strict_argmax;
    return opts;
}

}  // namespace

PYBIND11_MODULE(langbench, m) {
    m.doc() = "formal-language generalization benchmark";
    m.attr("__version__") = LANGBENCH_VERSION;

    // base first: translators run newest-first, so derived kinds must come later
    py::register_exception<Error>(m, "EngineError", PyExc_RuntimeError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception<UsageError>(m, "UsageError", PyExc_ValueError);

    py::class_<LanguageSpec>(m, "Language")
        .def_readonly("id", &LanguageSpec::id)
        .def_readonly("description", &LanguageSpec::description)
        .def_property_readonly("symbols",
                               [](const LanguageSpec& l) { return l.vocabulary.symbols(); })
        .def_property_readonly("metric",
                               [](const LanguageSpec& l) { return to_string(l.metric_kind); })
        .def("__repr__",
             [](const LanguageSpec& l) { return "<Language " + l.id + ">"; });

    m.def("builtin_language", &builtin_language, py::arg("id"), py::arg("prior") = 0.3);
    m.def("builtin_language_ids", []() { return builtin_language_ids(); });
    m.def("load_language_file", &load_language_file, py::arg("path"));

    m.def("valid_next_symbols",
          [](const LanguageSpec& lang, const std::string& prefix) {
              return valid_next_symbols(lang, prefix);
          },
          py::arg("language"), py::arg("prefix"));
    m.def("deterministic_next",
          [](const LanguageSpec& lang, const std::string& prefix) -> std::optional<std::string> {
              auto next = deterministic_next(lang, prefix);
              if (!next) return std::nullopt;
              return std::string(1, *next);
          },
          py::arg("language"), py::arg("prefix"));
    m.def("membership",
          [](const LanguageSpec& lang, const std::string& s) { return membership(lang, s); },
          py::arg("language"), py::arg("string"));

    py::class_<Corpus>(m, "Corpus")
        .def_readonly("language_id", &Corpus::language_id)
        .def_property_readonly("role", [](const Corpus& c) { return to_string(c.role); })
        .def_readonly("strings", &Corpus::strings)
        .def_property_readonly("max_length", [](const Corpus& c) { return c.meta.max_length; })
        .def_property_readonly("frontier",
                               [](const Corpus& c) -> std::optional<long long> {
                                   return c.meta.frontier;
                               })
        .def("__len__", [](const Corpus& c) { return c.strings.size(); });

    m.def("sample_training",
          [](const LanguageSpec& lang, std::uint64_t seed, double prior, std::size_t size) {
              return sample_training(lang, {seed, prior, size});
          },
          py::arg("language"), py::arg("seed") = 100, py::arg("prior") = 0.3,
          py::arg("size") = 1000);
    m.def("enumerate_test", &enumerate_test, py::arg("language"), py::arg("train"),
          py::arg("size"), py::arg("max_string_length") = 1'000'000);
    m.def("save_corpus", &save_corpus, py::arg("corpus"), py::arg("path"));
    m.def("load_corpus", &load_corpus, py::arg("path"));
    m.def("export_protected", &export_protected, py::arg("corpus"), py::arg("path"),
          py::arg("passphrase"));
    m.def("import_protected", &import_protected, py::arg("path"), py::arg("passphrase"));

    m.def("frame",
          [](const LanguageSpec& lang, const std::string& s) {
              FramedSequence f = frame(lang.vocabulary, s);
              std::string inputs, targets;
              for (int idx : f.inputs) inputs.push_back(lang.vocabulary.symbol(idx));
              for (int idx : f.targets) targets.push_back(lang.vocabulary.symbol(idx));
              return py::make_tuple(inputs, targets);
          },
          py::arg("language"), py::arg("string"));

    py::class_<RnnGenome>(m, "Genome")
        .def_property_readonly("arity", [](const RnnGenome& g) { return g.vocab; })
        .def_property_readonly("hidden_count", [](const RnnGenome& g) { return g.hidden.size(); })
        .def_property_readonly("connection_count",
                               [](const RnnGenome& g) { return g.connections.size(); })
        .def_property_readonly(
            "normalization", [](const RnnGenome& g) { return to_string(g.normalization); })
        .def("text", &genome_to_text)
        .def("__repr__", [](const RnnGenome& g) {
            return "<Genome arity=" + std::to_string(g.vocab) +
                   " hidden=" + std::to_string(g.hidden.size()) + ">";
        });

    m.def("reference_anbn_counter", &reference_anbn_counter);
    m.def("reference_dyck1", &reference_dyck1);
    m.def("save_genome", &save_genome, py::arg("genome"), py::arg("path"));
    m.def("load_genome", &load_genome, py::arg("path"));
    m.def("genome_from_text",
          [](const std::string& text) { return genome_from_text(text); },
          py::arg("text"));

    py::class_<Model>(m, "Model")
        .def_property_readonly("name", &Model::name)
        .def("run", [](Model& model, const LanguageSpec& lang, const std::string& s) {
            FramedSequence framed = frame(lang.vocabulary, s);
            ProbMatrix probs;
            model.run(framed, probs);
            std::vector<std::vector<double>> out;
            for (std::size_t t = 0; t < probs.steps(); ++t)
                out.emplace_back(probs.row(t), probs.row(t) + probs.vocab());
            return out;
        });

    m.def("model_from_uri", &model_from_uri, py::arg("uri"), py::arg("language"));
    m.def("genome_model",
          [](const RnnGenome& g) { return make_genome_model(g, "genome"); });

    py::class_<StringEvaluation>(m, "StringEvaluation")
        .def_readonly("evaluated_steps", &StringEvaluation::evaluated_steps)
        .def_readonly("correct_steps", &StringEvaluation::correct_steps)
        .def_readonly("accuracy", &StringEvaluation::accuracy)
        .def_readonly("accepted", &StringEvaluation::accepted);

    m.def("det_accuracy",
          [](Model& model, const std::string& s, const LanguageSpec& lang, double epsilon,
             std::optional<double> validity, const std::string& det_rule) {
              return det_accuracy(model, s, lang, make_opts(epsilon, validity, det_rule));
          },
          py::arg("model"), py::arg("string"), py::arg("language"), py::arg("epsilon") = 0.0,
          py::arg("validity_epsilon") = std::nullopt, py::arg("det_rule") = "argmax");
    m.def("cat_accuracy",
          [](Model& model, const std::string& s, const LanguageSpec& lang, double epsilon,
             std::optional<double> validity, const std::string& det_rule) {
              return cat_accuracy(model, s, lang, make_opts(epsilon, validity, det_rule));
          },
          py::arg("model"), py::arg("string"), py::arg("language"), py::arg("epsilon") = 0.0,
          py::arg("validity_epsilon") = std::nullopt, py::arg("det_rule") = "argmax");
    m.def("accepts",
          [](Model& model, const std::string& s, const LanguageSpec& lang, double epsilon) {
              EvalOptions opts;
              opts.epsilon = EpsilonMargin(epsilon);
              return accepts(model, s, lang, lang.metric_kind, opts);
          },
          py::arg("model"), py::arg("string"), py::arg("language"), py::arg("epsilon") = 0.0);

    py::class_<TestReport>(m, "TestReport")
        .def_readonly("success", &TestReport::success)
        .def_readonly("total_strings", &TestReport::total_strings)
        .def_readonly("accepted_strings", &TestReport::accepted_strings)
        .def_readonly("min_accuracy", &TestReport::min_accuracy)
        .def_readonly("pooled_accuracy", &TestReport::pooled_accuracy)
        .def_property_readonly("first_failure_index",
                               [](const TestReport& r) { return r.first_failure_index; });

    m.def("test_success",
          [](Model& model, const Corpus& test, const LanguageSpec& lang, double epsilon,
             bool pooled) {
              EvalOptions opts;
              opts.epsilon = EpsilonMargin(epsilon);
              return test_success(model, test, lang, lang.metric_kind, opts, pooled, false);
          },
          py::arg("model"), py::arg("test"), py::arg("language"), py::arg("epsilon") = 0.0,
          py::arg("pooled") = false);

    py::class_<LadderRecord>(m, "LadderRecord")
        .def_readonly("b", &LadderRecord::b)
        .def_readonly("train_size", &LadderRecord::train_size)
        .def_readonly("test_size", &LadderRecord::test_size)
        .def_readonly("success", &LadderRecord::success)
        .def_readonly("error", &LadderRecord::error);

    py::class_<IndexResult>(m, "IndexResult")
        .def_readonly("records", &IndexResult::records)
        .def_property_readonly("value",
                               [](const IndexResult& r) -> std::optional<double> { return r.value; })
        .def_property_readonly("display",
                               [](const IndexResult& r) { return format_index_value(r); });

    m.def("compute_index",
          [](const std::string& learner_spec, const LanguageSpec& lang, int magnitude,
             std::vector<double> ladder, double epsilon, std::uint64_t seed, double prior) {
              IndexParams params;
              params.magnitude_exponent = magnitude;
              params.ladder = std::move(ladder);
              params.epsilon = EpsilonMargin(epsilon);
              params.seed = seed;
              params.prior = prior;
              params.eval.epsilon = EpsilonMargin(epsilon);
              EvolutionConfig mdl_cfg;  // desk-scale defaults for the python surface
              mdl_cfg.population_size = 100;
              mdl_cfg.island_size = 50;
              mdl_cfg.generations = 200;
              mdl_cfg.migration_interval_seconds = 0;
              mdl_cfg.stagnation_seconds = 0;
              auto learner = learner_from_spec(learner_spec, mdl_cfg);
              return compute_index(*learner, lang, params);
          },
          py::arg("learner"), py::arg("language"), py::arg("magnitude") = 3,
          py::arg("ladder") = std::vector<double>{1, 2, 4, 10}, py::arg("epsilon") = 0.0,
          py::arg("seed") = 100, py::arg("prior") = 0.3);

    m.def("max_generalization_n",
          [](Model& model, const LanguageSpec& lang, long long n_limit, double epsilon) {
              EvalOptions opts;
              opts.epsilon = EpsilonMargin(epsilon);
              SweepResult result = max_generalization_n(model, lang, n_limit, opts);
              return result.max_n;
          },
          py::arg("model"), py::arg("language"), py::arg("n_limit"), py::arg("epsilon") = 0.0);

    m.def("encoding_length", &encoding_length, py::arg("genome"));
    m.def("data_cost", &data_cost, py::arg("genome"), py::arg("language"), py::arg("corpus"));

    m.def("evolve",
          [](const LanguageSpec& lang, const Corpus& train, std::size_t population,
             std::size_t island_size, long long generations, std::uint64_t seed) {
              EvolutionConfig cfg;
              cfg.population_size = population;
              cfg.island_size = island_size;
              cfg.generations = generations;
              cfg.seed = seed;
              cfg.migration_interval_generations = 50;
              cfg.migration_interval_seconds = 0;
              cfg.stagnation_seconds = 0;
              EvolveResult result = evolve(lang, train, cfg);
              py::dict out;
              out["best"] = result.best;
              out["grammar_bits"] = result.best_score.grammar_bits;
              out["data_bits"] = result.best_score.data_bits;
              out["total"] = result.best_score.total();
              out["generations"] = result.generations_run;
              std::vector<double> totals;
              for (const auto& row : result.trace) totals.push_back(row.best_total);
              out["trace"] = totals;
              return out;
          },
          py::arg("language"), py::arg("train"), py::arg("population") = 100,
          py::arg("island_size") = 50, py::arg("generations") = 100, py::arg("seed") = 100);
}
