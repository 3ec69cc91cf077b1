#define DOCTEST_CONFIG_IMPLEMENT
#include <doctest.h>

#include "langbench/corpus_io.hpp"
#include "langbench/language.hpp"
#include "langbench/rnn.hpp"
#include "support/cli_runner.hpp"
#include "support/tmpdir.hpp"

using namespace langbench;
using test_support::CliResult;
using test_support::run_cli;
using test_support::TmpDir;

int main(int argc, char** argv) {
    argc = test_support::capture_cli_flag(argc, argv);
    if (test_support::cli_path().empty()) {
        std::fprintf(stderr, "usage: test_cli --cli=<path-to-binary> [doctest args]\n");
        return 1;
    }
    return doctest::Context(argc, argv).run();
}

TEST_CASE("generate writes a corpus, a manifest, and a run manifest") {
    TmpDir dir("cli_gen");
    CliResult r = run_cli("generate --language anbn --size 50 --seed 100 --prior 0.3 --out " +
                          dir.str());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("generated 50 strings") != std::string::npos);
    CHECK(r.output.find("frontier") != std::string::npos);

    Corpus corpus = load_corpus(dir.file("train.txt"));
    CHECK(corpus.strings.size() == 50);
    CHECK(corpus.language_id == "anbn");
    std::string manifest = read_file(dir.file("run_manifest.json"));
    CHECK(manifest.find("\"command\": \"generate\"") != std::string::npos);
    CHECK(manifest.find("\"tool_version\"") != std::string::npos);
}

TEST_CASE("generate is byte-idempotent for fixed seeds") {
    TmpDir a("cli_idem_a"), b("cli_idem_b");
    std::string flags = "generate --language dyck2 --size 40 --seed 7 --prior 0.3 --out ";
    CHECK(run_cli(flags + a.str()).exit_code == 0);
    CHECK(run_cli(flags + b.str()).exit_code == 0);
    CHECK(read_file(a.file("train.txt")) == read_file(b.file("train.txt")));
    CHECK(read_file(a.file("train.txt.manifest.json")) ==
          read_file(b.file("train.txt.manifest.json")));
}

TEST_CASE("missing required flags exit with the usage code") {
    CHECK(run_cli("generate --size 5 --out /tmp/nope").exit_code == 2);
    CHECK(run_cli("enumerate-test --train x --out y --size 0").exit_code == 2);
    CHECK(run_cli("definitely-not-a-command").exit_code == 2);
}

TEST_CASE("enumerate-test continues right after the trained frontier") {
    TmpDir dir("cli_enum");
    // hand-build a train corpus whose longest string is a^17 b^17
    Corpus train;
    train.language_id = "anbn";
    train.role = CorpusRole::train;
    train.strings = {"ab", std::string(17, 'a') + std::string(17, 'b')};
    train.meta.prior = 0.3;
    train.meta.frontier = 17;
    for (const auto& s : train.strings)
        train.meta.max_length = std::max(train.meta.max_length, s.size());
    save_corpus(train, dir.file("train.txt"));

    CliResult r = run_cli("enumerate-test --train " + dir.file("train.txt") +
                          " --size 10 --out " + dir.str());
    CHECK(r.exit_code == 0);
    Corpus test = load_corpus(dir.file("test.txt"));
    REQUIRE(test.strings.size() == 10);
    CHECK(test.strings.front() == std::string(18, 'a') + std::string(18, 'b'));
    CHECK(test.strings.back() == std::string(27, 'a') + std::string(27, 'b'));
}

TEST_CASE("evaluate reports success and honors --strict") {
    TmpDir dir("cli_eval");
    CHECK(run_cli("generate --language anbn --size 30 --seed 3 --out " + dir.str()).exit_code ==
          0);
    CHECK(run_cli("enumerate-test --train " + dir.file("train.txt") + " --size 20 --out " +
                  dir.str())
              .exit_code == 0);

    CliResult good = run_cli("evaluate --model builtin:oracle --test " + dir.file("test.txt") +
                             " --epsilon 0 --out " + dir.file("report"));
    CHECK(good.exit_code == 0);
    CHECK(good.output.find("success: true") != std::string::npos);
    std::string report = read_file(dir.file("report/report.json"));
    CHECK(report.find("\"success\": true") != std::string::npos);
    std::string rows = read_file(dir.file("report/rows.tsv"));
    CHECK(rows.find("accuracy") != std::string::npos);

    CliResult counter =
        run_cli("evaluate --model builtin:anbn-counter --test " + dir.file("test.txt") +
                " --epsilon 0");
    CHECK(counter.exit_code == 0);
    CHECK(counter.output.find("success: true") != std::string::npos);

    CliResult bad = run_cli("evaluate --model builtin:always:b --test " + dir.file("test.txt") +
                            " --epsilon 0 --strict");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find("success: false") != std::string::npos);
    CHECK(bad.output.find("first failure") != std::string::npos);

    CliResult lax = run_cli("evaluate --model builtin:always:b --test " + dir.file("test.txt") +
                            " --epsilon 0");
    CHECK(lax.exit_code == 0);  // without --strict the run itself succeeded
}

TEST_CASE("evaluate explains why softmax cannot reach categorical zero") {
    TmpDir dir("cli_softmax");
    CHECK(run_cli("generate --language dyck1 --size 30 --seed 5 --out " + dir.str()).exit_code ==
          0);
    CHECK(run_cli("enumerate-test --train " + dir.file("train.txt") + " --size 10 --out " +
                  dir.str())
              .exit_code == 0);
    save_genome(empty_genome(3, OutputNormalization::softmax), dir.file("softmax.txt"));
    CliResult r = run_cli("evaluate --model " + dir.file("softmax.txt") + " --test " +
                          dir.file("test.txt") + " --metric cat --epsilon 0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("success: false") != std::string::npos);
    CHECK(r.output.find("softmax") != std::string::npos);
}

TEST_CASE("missing files are internal errors, not usage errors") {
    CHECK(run_cli("evaluate --model builtin:oracle --test /nonexistent/t.txt").exit_code == 3);
}

TEST_CASE("index prints both margins side by side and marks failures as below one") {
    TmpDir dir("cli_index");
    CliResult oracle = run_cli(
        "index --learner oracle --language anbn --magnitude 1 --ladder 1,2 "
        "--epsilon 0.005,0 --seed 100 --out " +
        dir.str());
    CHECK(oracle.exit_code == 0);
    CHECK(oracle.output.find("B(eps=0.005)") != std::string::npos);
    CHECK(oracle.output.find("B(eps=0)") != std::string::npos);
    std::string json_text = read_file(dir.file("index.json"));
    CHECK(json_text.find("\"display\": \"2\"") != std::string::npos);

    CliResult failing = run_cli(
        "index --learner fixed:builtin:always:b --language anbn --magnitude 1 "
        "--ladder 1,2 --epsilon 0 --seed 100");
    CHECK(failing.exit_code == 0);
    CHECK(failing.output.find("<1") != std::string::npos);
}

TEST_CASE("index can drive the evolutionary learner end to end") {
    TmpDir dir("cli_index_mdl");
    CliResult r = run_cli(
        "index --learner mdl --language anbn --magnitude 1 --ladder 1 --epsilon 0.005 "
        "--seed 100 --population 10 --island-size 5 --generations 8 "
        "--migration-seconds 0 --stagnation-seconds 0 --search-seed 4 --out " +
        dir.str());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("mdl") != std::string::npos);
    std::string json_text = read_file(dir.file("index.json"));
    CHECK(json_text.find("\"records\"") != std::string::npos);
}

TEST_CASE("sweep-max-n writes plot-ready rows") {
    TmpDir dir("cli_sweep");
    CliResult r = run_cli(
        "sweep-max-n --model builtin:anbn-counter --language anbn --n-limit 25 "
        "--epsilon 0 --out " +
        dir.str());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("max fully-accepted n: 25") != std::string::npos);
    std::string rows = read_file(dir.file("sweep.tsv"));
    CHECK(rows.find("n\taccepted\taccuracy") == 0);
    CHECK(rows.find("\n25\t1\t1\n") != std::string::npos);

    CliResult none = run_cli(
        "sweep-max-n --model builtin:always:b --language anbn --n-limit 5 --epsilon 0");
    CHECK(none.exit_code == 0);
    CHECK(none.output.find("max fully-accepted n: 0") != std::string::npos);
}

TEST_CASE("search runs, writes artifacts, and resumes from checkpoints") {
    TmpDir dir("cli_search");
    CHECK(run_cli("generate --language anbn --size 80 --seed 100 --out " + dir.str()).exit_code ==
          0);

    std::string base_flags =
        " --train " + dir.file("train.txt") +
        " --population 20 --island-size 10 --migration-generations 5 "
        "--migration-seconds 0 --stagnation-seconds 0 --search-seed 11";
    CliResult full = run_cli("search --out " + dir.file("full") + base_flags +
                             " --generations 12");
    CHECK(full.exit_code == 0);
    std::string trace = read_file(dir.file("full/trace.tsv"));
    CHECK(trace.find("generation\tbest_total") == 0);
    RnnGenome best = load_genome(dir.file("full/genome.txt"));

    // halfway run + resume reproduces the uninterrupted result
    CliResult half = run_cli("search --out " + dir.file("half") + base_flags +
                             " --generations 6");
    CHECK(half.exit_code == 0);
    CliResult resumed = run_cli("search --out " + dir.file("resumed") + base_flags +
                                " --generations 12 --resume " + dir.file("half/checkpoint.json"));
    CHECK(resumed.exit_code == 0);
    CHECK(genome_to_text(load_genome(dir.file("resumed/genome.txt"))) == genome_to_text(best));
    CHECK(read_file(dir.file("resumed/trace.tsv")) == trace);

    CHECK(run_cli("search --out /tmp/x --train " + dir.file("train.txt") + " --tournament 1")
              .exit_code == 2);
}

TEST_CASE("protect and unprotect round-trip through the cli") {
    TmpDir dir("cli_zip");
    CHECK(run_cli("generate --language anbn --size 25 --seed 9 --out " + dir.str()).exit_code ==
          0);
    CHECK(run_cli("protect --corpus " + dir.file("train.txt") + " --out " + dir.file("c.zip") +
                  " --passphrase sesame")
              .exit_code == 0);
    CHECK(run_cli("unprotect --archive " + dir.file("c.zip") + " --out " +
                  dir.file("restored.txt") + " --passphrase sesame")
              .exit_code == 0);
    CHECK(read_file(dir.file("train.txt")) == read_file(dir.file("restored.txt")));
    CHECK(run_cli("unprotect --archive " + dir.file("c.zip") + " --out " + dir.file("x.txt") +
                  " --passphrase wrong")
              .exit_code == 3);
}

TEST_CASE("the subprocess protocol round-trips the oracle") {
    TmpDir dir("cli_serve");
    CHECK(run_cli("generate --language anbn --size 30 --seed 4 --out " + dir.str()).exit_code ==
          0);
    CHECK(run_cli("enumerate-test --train " + dir.file("train.txt") + " --size 15 --out " +
                  dir.str())
              .exit_code == 0);
    std::string served = "'subprocess:" + test_support::cli_path() +
                         " serve --language anbn --model builtin:oracle'";
    CliResult r = run_cli("evaluate --model " + served + " --test " + dir.file("test.txt") +
                          " --epsilon 0");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("success: true") != std::string::npos);
}

TEST_CASE("language files plug into generate") {
    TmpDir dir("cli_langfile");
    write_file_atomic(dir.file("lang.txt"),
                      "language 1\n"
                      "id custom_anbn\n"
                      "metric deterministic\n"
                      "vocab ab\n"
                      "oracle anbn\n"
                      "generator pcfg\n"
                      "start S\n"
                      "rule S 0.7 a S b\n"
                      "rule S 0.3\n");
    CliResult r = run_cli("generate --language-file " + dir.file("lang.txt") +
                          " --size 20 --seed 2 --out " + dir.str());
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("custom_anbn") != std::string::npos);
}

TEST_CASE("version flag prints the tool version") {
    CliResult r = run_cli("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("0.1.0") != std::string::npos);
}
