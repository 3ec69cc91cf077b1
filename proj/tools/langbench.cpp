// Command-line front end: corpus generation, test enumeration, model
// evaluation, generalization-index runs, max-n sweeps, and the evolutionary
// search.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <iostream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "langbench/corpus_io.hpp"
#include "langbench/evolve.hpp"
#include "langbench/index.hpp"
#include "langbench/language.hpp"
#include "langbench/metrics.hpp"
#include "langbench/model.hpp"
#include "langbench/oracle.hpp"
#include "langbench/rnn.hpp"
#include "langbench/sampling.hpp"
#include "langbench/subprocess_model.hpp"
#include "langbench/version.hpp"

using namespace langbench;
using nlohmann::json;

namespace {

std::string iso_now() {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return buf;
}

struct ManifestWriter {
    explicit ManifestWriter(std::string cmd) : command(std::move(cmd)) {}

    std::string command;
    json config = json::object();
    std::vector<std::string> inputs, outputs;
    std::string started = iso_now();

    void write(const std::string& out_dir) {
        json m;
        m["command"] = command;
        m["tool_version"] = LANGBENCH_VERSION;
        m["config"] = config;
        m["inputs"] = inputs;
        m["outputs"] = outputs;
        m["started_at"] = started;
        m["finished_at"] = iso_now();
        write_file_atomic(out_dir + "/run_manifest.json", m.dump(2) + "\n");
    }
};

LanguageSpec resolve_language(const std::string& id, const std::string& language_file,
                              double prior) {
    if (!language_file.empty()) return load_language_file(language_file);
    return builtin_language(id, prior);
}

std::uint64_t env_seed_default() {
    if (const char* env = std::getenv("LANGBENCH_SEED")) return std::strtoull(env, nullptr, 10);
    return 100;
}

int env_jobs_default() {
    if (const char* env = std::getenv("LANGBENCH_JOBS")) return std::atoi(env);
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

DetRule det_rule_from(const std::string& name) {
    if (name == "argmax") return DetRule::strict_argmax;
    if (name == "majority") return DetRule::above_half;
    throw UsageError("unknown det rule '" + name + "' (expected argmax|majority)");
}

json report_to_json(const TestReport& report, double epsilon) {
    json j;
    j["success"] = report.success;
    j["epsilon"] = epsilon;
    j["total_strings"] = report.total_strings;
    j["accepted_strings"] = report.accepted_strings;
    j["min_accuracy"] = report.min_accuracy;
    j["pooled_accuracy"] = report.pooled_accuracy;
    if (report.first_failure_index) {
        j["first_failure_index"] = *report.first_failure_index;
        j["first_failure_string"] = report.first_failure_string;
    }
    return j;
}

json record_to_json(const LadderRecord& r) {
    json j;
    j["b"] = r.b;
    j["train_size"] = r.train_size;
    j["test_size"] = r.test_size;
    j["success"] = r.success;
    if (r.train_frontier) j["train_frontier"] = *r.train_frontier;
    j["accepted_strings"] = r.accepted_strings;
    j["min_accuracy"] = r.min_accuracy;
    j["pooled_accuracy"] = r.pooled_accuracy;
    if (!r.first_failure.empty()) j["first_failure"] = r.first_failure;
    if (!r.error.empty()) j["error"] = r.error;
    return j;
}

struct SearchFlags {
    EvolutionConfig cfg;
    std::string resume;
    std::string checkpoint;
    long long checkpoint_every = 0;

    void attach(CLI::App* cmd, int default_jobs) {
        cfg.jobs = default_jobs;
        cmd->add_option("--population", cfg.population_size, "population size");
        cmd->add_option("--island-size", cfg.island_size, "individuals per island");
        cmd->add_option("--generations", cfg.generations, "generation limit");
        cmd->add_option("--tournament", cfg.tournament_size, "tournament size (>= 2)");
        cmd->add_option("--elite-ratio", cfg.elite_ratio, "elite fraction per island");
        cmd->add_option("--migration-generations", cfg.migration_interval_generations,
                        "generations between migrations (0 disables)");
        cmd->add_option("--migration-seconds", cfg.migration_interval_seconds,
                        "wall-clock migration trigger (0 disables)");
        cmd->add_option("--stagnation-seconds", cfg.stagnation_seconds,
                        "stop after this long with no improvement (0 disables)");
        cmd->add_option("--search-seed", cfg.seed, "evolution RNG seed");
    }
};

int g_exit_code = 0;

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"formal-language generalization benchmark"};
    app.set_version_flag("--version", LANGBENCH_VERSION);
    app.require_subcommand(1);

    int jobs = env_jobs_default();
    app.add_option("--jobs", jobs, "worker cap for evolution")->capture_default_str();

    // ---- generate ---------------------------------------------------------
    auto* gen = app.add_subcommand("generate", "sample a training corpus");
    struct {
        std::string language, language_file, out;
        std::size_t size = 0;
        std::uint64_t seed = env_seed_default();
        double prior = 0.3;
    } g;
    gen->add_option("--language", g.language, "language id");
    gen->add_option("--language-file", g.language_file, "language definition file");
    gen->add_option("--size", g.size, "number of strings")->required();
    gen->add_option("--seed", g.seed, "sampler seed")->capture_default_str();
    gen->add_option("--prior", g.prior, "generator prior probability")->capture_default_str();
    gen->add_option("--out", g.out, "output directory")->required();
    gen->callback([&]() {
        if (g.language.empty() && g.language_file.empty())
            throw CLI::RequiredError("--language or --language-file");
        LanguageSpec lang = resolve_language(g.language, g.language_file, g.prior);
        Corpus corpus = sample_training(lang, {g.seed, g.prior, g.size});
        save_corpus(corpus, g.out + "/train.txt");
        ManifestWriter m{"generate"};
        m.config = {{"language", lang.id}, {"size", g.size}, {"seed", g.seed}, {"prior", g.prior}};
        m.outputs = {g.out + "/train.txt", manifest_path_for(g.out + "/train.txt")};
        m.write(g.out);
        std::cout << "generated " << corpus.strings.size() << " strings for " << lang.id
                  << "; max length " << corpus.meta.max_length;
        if (corpus.meta.frontier) std::cout << "; frontier exponent " << *corpus.meta.frontier;
        std::cout << "\n";
    });

    // ---- enumerate-test ---------------------------------------------------
    auto* enu = app.add_subcommand("enumerate-test", "enumerate the test corpus after a frontier");
    struct {
        std::string train, out, language_file;
        std::size_t size = 0;
        std::size_t max_string_length = 1'000'000;
    } e;
    enu->add_option("--train", e.train, "training corpus file")->required();
    enu->add_option("--size", e.size, "number of test strings")->required()
        ->check(CLI::PositiveNumber);
    enu->add_option("--language-file", e.language_file, "language definition file");
    enu->add_option("--max-string-length", e.max_string_length, "per-string length limit")
        ->capture_default_str();
    enu->add_option("--out", e.out, "output directory")->required();
    enu->callback([&]() {
        Corpus train = load_corpus(e.train);
        double prior = train.meta.prior > 0.0 && train.meta.prior < 1.0 ? train.meta.prior : 0.3;
        LanguageSpec lang = resolve_language(train.language_id, e.language_file, prior);
        Corpus test = enumerate_test(lang, train, e.size, e.max_string_length);
        save_corpus(test, e.out + "/test.txt");
        ManifestWriter m{"enumerate-test"};
        m.config = {{"language", lang.id}, {"size", e.size},
                    {"max_string_length", e.max_string_length}};
        m.inputs = {e.train};
        m.outputs = {e.out + "/test.txt", manifest_path_for(e.out + "/test.txt")};
        m.write(e.out);
        std::cout << "enumerated " << test.strings.size() << " test strings for " << lang.id
                  << "; lengths up to " << test.meta.max_length << "\n";
    });

    // ---- evaluate ---------------------------------------------------------
    auto* ev = app.add_subcommand("evaluate", "evaluate a model on a test corpus");
    struct {
        std::string model, test, metric, out, language_file;
        std::string det_rule = "argmax";
        double epsilon = 0.0;
        double validity_epsilon = -1.0;
        bool pooled = false, strict = false;
    } v;
    ev->add_option("--model", v.model, "model URI")->required();
    ev->add_option("--test", v.test, "test corpus file")->required();
    ev->add_option("--metric", v.metric, "det|cat (default: the language's metric)");
    ev->add_option("--epsilon", v.epsilon, "error margin")->capture_default_str();
    ev->add_option("--validity-epsilon", v.validity_epsilon,
                   "categorical probability threshold (default: epsilon)");
    ev->add_option("--det-rule", v.det_rule, "argmax|majority")->capture_default_str();
    ev->add_flag("--pooled", v.pooled, "pool steps across the whole set");
    ev->add_flag("--strict", v.strict, "exit 1 when the evaluation fails");
    ev->add_option("--language-file", v.language_file, "language definition file");
    ev->add_option("--out", v.out, "report directory");
    ev->callback([&]() {
        Corpus test = load_corpus(v.test);
        double prior = test.meta.prior > 0.0 && test.meta.prior < 1.0 ? test.meta.prior : 0.3;
        LanguageSpec lang = resolve_language(test.language_id, v.language_file, prior);
        MetricKind metric = v.metric.empty() ? lang.metric_kind : metric_kind_from_string(v.metric);
        EvalOptions opts;
        opts.epsilon = EpsilonMargin(v.epsilon);
        if (v.validity_epsilon >= 0.0) opts.validity_epsilon = EpsilonMargin(v.validity_epsilon);
        opts.det_rule = det_rule_from(v.det_rule);

        std::unique_ptr<Model> model = model_from_uri(v.model, lang);
        TestReport report =
            test_success(*model, test, lang, metric, opts, v.pooled, !v.out.empty());

        std::cout << "model " << v.model << " on " << test.strings.size() << " " << lang.id
                  << " strings (metric " << to_string(metric) << ", epsilon " << v.epsilon
                  << ")\n";
        std::cout << "success: " << (report.success ? "true" : "false") << "  accepted "
                  << report.accepted_strings << "/" << report.total_strings << "  min accuracy "
                  << report.min_accuracy << "  pooled " << report.pooled_accuracy << "\n";
        if (report.first_failure_index)
            std::cout << "first failure: string #" << *report.first_failure_index << " '"
                      << report.first_failure_string << "'\n";
        if (metric == MetricKind::categorical && opts.validity() == 0.0) {
            bool softmax = false;
            if (v.model.rfind("builtin:", 0) != 0 && v.model.rfind("subprocess:", 0) != 0)
                softmax = load_genome(v.model).normalization == OutputNormalization::softmax;
            if (softmax)
                std::cout << "note: softmax outputs are strictly positive, so categorical "
                             "acceptance at epsilon=0 is unattainable for this model\n";
        }

        if (!v.out.empty()) {
            json j = report_to_json(report, v.epsilon);
            j["model"] = v.model;
            j["language"] = lang.id;
            j["metric"] = to_string(metric);
            j["pooled_mode"] = v.pooled;
            write_file_atomic(v.out + "/report.json", j.dump(2) + "\n");
            std::string rows = "index\tlength\tevaluated\tcorrect\taccuracy\taccepted\n";
            char buf[128];
            for (std::size_t i = 0; i < report.rows.size(); ++i) {
                const StringRow& r = report.rows[i];
                std::snprintf(buf, sizeof buf, "%zu\t%zu\t%zu\t%zu\t%.17g\t%d\n", i, r.length,
                              r.evaluated_steps, r.correct_steps, r.accuracy, r.accepted ? 1 : 0);
                rows += buf;
            }
            write_file_atomic(v.out + "/rows.tsv", rows);
            ManifestWriter m{"evaluate"};
            m.config = {{"model", v.model},     {"metric", to_string(metric)},
                        {"epsilon", v.epsilon}, {"pooled", v.pooled},
                        {"strict", v.strict},   {"det_rule", v.det_rule}};
            m.inputs = {v.test};
            m.outputs = {v.out + "/report.json", v.out + "/rows.tsv"};
            m.write(v.out);
        }
        if (v.strict && !report.success) g_exit_code = 1;
    });

    // ---- index ------------------------------------------------------------
    auto* ix = app.add_subcommand("index", "compute the generalization index");
    struct {
        std::string learner = "oracle";
        std::string language, language_file, out;
        int magnitude = 3;
        std::vector<double> ladder = {1, 2, 4, 10};
        std::vector<double> epsilons = {0.005, 0.0};
        std::uint64_t seed = env_seed_default();
        double prior = 0.3;
        bool shared_corpus = false;
        std::string det_rule = "argmax";
        std::size_t max_string_length = 1'000'000;
    } x;
    ix->add_option("--learner", x.learner, "oracle | fixed:<model-uri> | mdl")
        ->capture_default_str();
    ix->add_option("--language", x.language, "language id");
    ix->add_option("--language-file", x.language_file, "language definition file");
    ix->add_option("--magnitude", x.magnitude, "baseline exponent N")->capture_default_str();
    ix->add_option("--ladder", x.ladder, "b factors")->delimiter(',')->capture_default_str();
    ix->add_option("--epsilon", x.epsilons, "error margins (repeatable)")
        ->delimiter(',')
        ->capture_default_str();
    ix->add_option("--seed", x.seed, "base sampling seed")->capture_default_str();
    ix->add_option("--prior", x.prior, "generator prior")->capture_default_str();
    ix->add_flag("--shared-corpus", x.shared_corpus,
                 "reuse one training sample across ladder entries (diagnostic)");
    ix->add_option("--det-rule", x.det_rule, "argmax|majority")->capture_default_str();
    ix->add_option("--max-string-length", x.max_string_length, "per-string length limit");
    ix->add_option("--out", x.out, "output directory for index.json");
    SearchFlags ix_search;
    ix_search.attach(ix, jobs);
    ix->callback([&]() {
        if (x.language.empty() && x.language_file.empty())
            throw CLI::RequiredError("--language or --language-file");
        LanguageSpec lang = resolve_language(x.language, x.language_file, x.prior);
        ix_search.cfg.jobs = jobs;
        std::unique_ptr<Learner> learner = learner_from_spec(x.learner, ix_search.cfg);

        json out_json;
        out_json["language"] = lang.id;
        out_json["learner"] = learner->name();
        out_json["magnitude"] = x.magnitude;
        out_json["runs"] = json::array();

        std::cout << "language\tlearner";
        for (double eps : x.epsilons) std::cout << "\tB(eps=" << eps << ")";
        std::cout << "\n" << lang.id << "\t" << learner->name();
        std::vector<IndexResult> results;
        for (double eps : x.epsilons) {
            IndexParams params;
            params.magnitude_exponent = x.magnitude;
            params.ladder = x.ladder;
            params.epsilon = EpsilonMargin(eps);
            params.seed = x.seed;
            params.prior = x.prior;
            params.resample_per_b = !x.shared_corpus;
            params.eval.epsilon = EpsilonMargin(eps);
            params.eval.det_rule = det_rule_from(x.det_rule);
            params.max_string_length = x.max_string_length;
            IndexResult result = compute_index(*learner, lang, params);
            std::cout << "\t" << format_index_value(result) << std::flush;
            json run;
            run["epsilon"] = eps;
            run["value"] = result.value ? json(*result.value) : json(nullptr);
            run["display"] = format_index_value(result);
            run["records"] = json::array();
            for (const auto& record : result.records) run["records"].push_back(record_to_json(record));
            out_json["runs"].push_back(std::move(run));
            results.push_back(std::move(result));
        }
        std::cout << "\n";
        for (std::size_t i = 0; i < x.epsilons.size(); ++i) {
            std::cout << "epsilon " << x.epsilons[i] << ":\n";
            for (const auto& record : results[i].records) {
                std::cout << "  b=" << record.b << "  train " << record.train_size << "  test "
                          << record.test_size << "  " << (record.success ? "pass" : "fail");
                if (!record.error.empty()) std::cout << "  error: " << record.error;
                std::cout << "\n";
            }
        }
        if (!x.out.empty()) {
            write_file_atomic(x.out + "/index.json", out_json.dump(2) + "\n");
            ManifestWriter m{"index"};
            m.config = {{"learner", x.learner},   {"language", lang.id},
                        {"magnitude", x.magnitude}, {"ladder", x.ladder},
                        {"epsilons", x.epsilons}, {"seed", x.seed},
                        {"prior", x.prior},       {"shared_corpus", x.shared_corpus}};
            m.outputs = {x.out + "/index.json"};
            m.write(x.out);
        }
    });

    // ---- sweep-max-n ------------------------------------------------------
    auto* sw = app.add_subcommand("sweep-max-n", "largest fully-accepted exponent per level");
    struct {
        std::string model, language, language_file, out;
        long long n_limit = 1000;
        double epsilon = 0.0;
        std::string det_rule = "argmax";
        double prior = 0.3;
    } s;
    sw->add_option("--model", s.model, "model URI")->required();
    sw->add_option("--language", s.language, "language id");
    sw->add_option("--language-file", s.language_file, "language definition file");
    sw->add_option("--n-limit", s.n_limit, "largest exponent to test")->capture_default_str();
    sw->add_option("--epsilon", s.epsilon, "error margin")->capture_default_str();
    sw->add_option("--det-rule", s.det_rule, "argmax|majority")->capture_default_str();
    sw->add_option("--prior", s.prior, "generator prior")->capture_default_str();
    sw->add_option("--out", s.out, "output directory for sweep.tsv");
    sw->callback([&]() {
        if (s.language.empty() && s.language_file.empty())
            throw CLI::RequiredError("--language or --language-file");
        LanguageSpec lang = resolve_language(s.language, s.language_file, s.prior);
        std::unique_ptr<Model> model = model_from_uri(s.model, lang);
        EvalOptions opts;
        opts.epsilon = EpsilonMargin(s.epsilon);
        opts.det_rule = det_rule_from(s.det_rule);
        SweepResult result = max_generalization_n(*model, lang, s.n_limit, opts);
        std::cout << "max fully-accepted n: " << result.max_n << " (limit " << s.n_limit << ")\n";
        if (!s.out.empty()) {
            std::string rows = "n\taccepted\taccuracy\n";
            char buf[64];
            for (const auto& row : result.rows) {
                std::snprintf(buf, sizeof buf, "%lld\t%d\t%.17g\n", row.n, row.accepted ? 1 : 0,
                              row.accuracy);
                rows += buf;
            }
            write_file_atomic(s.out + "/sweep.tsv", rows);
            ManifestWriter m{"sweep-max-n"};
            m.config = {{"model", s.model}, {"language", lang.id}, {"n_limit", s.n_limit},
                        {"epsilon", s.epsilon}};
            m.outputs = {s.out + "/sweep.tsv"};
            m.write(s.out);
        }
    });

    // ---- search -----------------------------------------------------------
    auto* se = app.add_subcommand("search", "evolutionary description-length search");
    struct {
        std::string language, language_file, train, out;
    } q;
    se->add_option("--language", q.language, "language id");
    se->add_option("--language-file", q.language_file, "language definition file");
    se->add_option("--train", q.train, "training corpus file")->required();
    se->add_option("--out", q.out, "output directory")->required();
    SearchFlags se_search;
    se_search.attach(se, jobs);
    se->add_option("--resume", se_search.resume, "checkpoint to resume from");
    se->add_option("--checkpoint-every", se_search.checkpoint_every,
                   "generations between checkpoints");
    se->callback([&]() {
        Corpus train = load_corpus(q.train);
        double prior = train.meta.prior > 0.0 && train.meta.prior < 1.0 ? train.meta.prior : 0.3;
        std::string id = q.language.empty() ? train.language_id : q.language;
        LanguageSpec lang = resolve_language(id, q.language_file, prior);
        se_search.cfg.jobs = jobs;
        EvolveOptions opts;
        opts.resume_checkpoint = se_search.resume;
        opts.checkpoint_path = q.out + "/checkpoint.json";
        opts.checkpoint_every = se_search.checkpoint_every;
        EvolveResult result = evolve(lang, train, se_search.cfg, opts);
        save_genome(result.best, q.out + "/genome.txt");
        write_file_atomic(q.out + "/trace.tsv", trace_tsv(result.trace));
        ManifestWriter m{"search"};
        m.config = {{"language", lang.id},
                    {"population", se_search.cfg.population_size},
                    {"island_size", se_search.cfg.island_size},
                    {"generations", se_search.cfg.generations},
                    {"tournament", se_search.cfg.tournament_size},
                    {"elite_ratio", se_search.cfg.elite_ratio},
                    {"seed", se_search.cfg.seed}};
        m.inputs = {q.train};
        m.outputs = {q.out + "/genome.txt", q.out + "/trace.tsv", q.out + "/checkpoint.json"};
        m.write(q.out);
        std::cout << "ran " << result.generations_run << " generations; best total "
                  << result.best_score.total() << " bits (grammar " << result.best_score.grammar_bits
                  << ", data " << result.best_score.data_bits << ")"
                  << (result.stopped_by_stagnation ? " [stagnation stop]" : "") << "\n";
    });

    // ---- serve ------------------------------------------------------------
    auto* sv = app.add_subcommand("serve", "run a model behind the line protocol on stdio");
    struct {
        std::string model, language, language_file;
        double prior = 0.3;
    } w;
    sv->add_option("--model", w.model, "model URI")->required();
    sv->add_option("--language", w.language, "language id");
    sv->add_option("--language-file", w.language_file, "language definition file");
    sv->add_option("--prior", w.prior, "generator prior")->capture_default_str();
    sv->callback([&]() {
        if (w.language.empty() && w.language_file.empty())
            throw CLI::RequiredError("--language or --language-file");
        LanguageSpec lang = resolve_language(w.language, w.language_file, w.prior);
        std::unique_ptr<Model> model = model_from_uri(w.model, lang);
        serve_model_stdio(*model, lang, std::cin, std::cout);
    });

    // ---- protect / unprotect ---------------------------------------------
    auto* pr = app.add_subcommand("protect", "export a corpus as a passphrase-protected archive");
    struct {
        std::string corpus, out, passphrase;
    } p;
    pr->add_option("--corpus", p.corpus, "corpus file")->required();
    pr->add_option("--out", p.out, "archive path")->required();
    pr->add_option("--passphrase", p.passphrase, "archive passphrase")->required();
    pr->callback([&]() {
        Corpus corpus = load_corpus(p.corpus);
        export_protected(corpus, p.out, p.passphrase);
        std::cout << "wrote " << p.out << "\n";
    });

    auto* un = app.add_subcommand("unprotect", "import a passphrase-protected corpus archive");
    struct {
        std::string archive, out, passphrase;
    } u;
    un->add_option("--archive", u.archive, "archive path")->required();
    un->add_option("--out", u.out, "corpus file to write")->required();
    un->add_option("--passphrase", u.passphrase, "archive passphrase")->required();
    un->callback([&]() {
        Corpus corpus = import_protected(u.archive, u.passphrase);
        save_corpus(corpus, u.out);
        std::cout << "restored " << corpus.strings.size() << " strings to " << u.out << "\n";
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return g_exit_code;
}
