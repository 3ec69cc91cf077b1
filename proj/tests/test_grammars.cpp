#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "langbench/language.hpp"
#include "langbench/oracle.hpp"
#include "langbench/rng.hpp"
#include "support/brute_force.hpp"

using namespace langbench;

namespace {

// every string over the payload alphabet up to max_len, depth-first;
// calls fn(s) for each
template <typename Fn>
void for_all_strings(const std::string& payload, std::size_t max_len, Fn&& fn) {
    std::string buf;
    auto rec = [&](auto&& self) -> void {
        fn(buf);
        if (buf.size() == max_len) return;
        for (char c : payload) {
            buf.push_back(c);
            self(self);
            buf.pop_back();
        }
    };
    rec(rec);
}

}  // namespace

TEST_CASE("builtin language definitions") {
    LanguageSpec anbn = builtin_language("anbn");
    REQUIRE(anbn.has_pcfg());
    CHECK(anbn.vocabulary.symbols() == "#ab");
    CHECK(anbn.metric_kind == MetricKind::deterministic);
    REQUIRE(anbn.pcfg().rules.size() == 2);
    CHECK(anbn.pcfg().rules[0].probability == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(anbn.pcfg().rules[1].probability == doctest::Approx(0.3).epsilon(1e-15));
    CHECK(anbn.pcfg().rules[1].rhs.empty());

    LanguageSpec dyck2 = builtin_language("dyck2");
    REQUIRE(dyck2.pcfg().rules.size() == 3);
    CHECK(dyck2.pcfg().rules[0].probability == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(dyck2.pcfg().rules[1].probability == doctest::Approx(0.15).epsilon(1e-15));
    CHECK(dyck2.pcfg().rules[2].probability == doctest::Approx(0.7).epsilon(1e-15));
    CHECK(dyck2.metric_kind == MetricKind::categorical);
    CHECK(dyck2.vocabulary.symbols() == "#()[]");

    LanguageSpec anbncn = builtin_language("anbncn");
    CHECK_FALSE(anbncn.has_pcfg());
    CHECK(anbncn.geometric().blocks == "abc");
    CHECK(anbncn.vocabulary.symbols() == "#abc");

    CHECK(builtin_language("anbncndn").geometric().blocks == "abcd");
    CHECK(builtin_language("anbmcnpm").has_pcfg());
    CHECK(builtin_language("dyck1").vocabulary.symbols() == "#()");
}

TEST_CASE("unknown language id lists the valid ones") {
    try {
        builtin_language("nope");
        FAIL("expected an error");
    } catch (const UsageError& e) {
        std::string msg = e.what();
        for (const auto& id : builtin_language_ids())
            CHECK(msg.find(id) != std::string::npos);
    }
}

TEST_CASE("pcfg probability sums are validated") {
    Pcfg bad;
    bad.start = "S";
    bad.rules = {{"S", {PcfgSymbol::term('a')}, 0.5}, {"S", {}, 0.4999999}};
    CHECK_THROWS_AS(bad.validate(Vocabulary("ab")), UsageError);

    // within 1e-12 passes
    Pcfg ok;
    ok.start = "S";
    ok.rules = {{"S", {PcfgSymbol::term('a')}, 0.5}, {"S", {}, 0.5 + 1e-13}};
    CHECK_NOTHROW(ok.validate(Vocabulary("ab")));
}

TEST_CASE("valid next symbols on pinned prefixes") {
    CHECK(valid_next_symbols(builtin_language("dyck1"), "((") == "()");
    CHECK(valid_next_symbols(builtin_language("anbn"), "aab") == "b");
    CHECK(valid_next_symbols(builtin_language("anbn"), "") == "#a");
    CHECK(valid_next_symbols(builtin_language("dyck2"), "([") == "([]");
    CHECK(valid_next_symbols(builtin_language("anbmcnpm"), "") == "#ab");
    CHECK(valid_next_symbols(builtin_language("anbmcnpm"), "a") == "abc");
    CHECK(valid_next_symbols(builtin_language("anbmcnpm"), "ab") == "bc");
    CHECK(valid_next_symbols(builtin_language("anbncn"), "aab") == "b");
    CHECK(valid_next_symbols(builtin_language("anbncn"), "aabb") == "c");
}

TEST_CASE("invalid prefixes are rejected with the offending position") {
    LanguageSpec anbn = builtin_language("anbn");
    CHECK_THROWS_WITH_AS(valid_next_symbols(anbn, "aba"), doctest::Contains("position 2"),
                         Error);
    CHECK_THROWS_WITH_AS(valid_next_symbols(anbn, "ba"), doctest::Contains("position 0"), Error);
    CHECK_THROWS_WITH_AS(valid_next_symbols(anbn, "axb"), doctest::Contains("position 1"), Error);
}

TEST_CASE("deterministic next on pinned prefixes") {
    LanguageSpec anbn = builtin_language("anbn");
    CHECK(deterministic_next(anbn, "aaab") == 'b');
    CHECK(deterministic_next(anbn, "aabb") == '#');
    CHECK_FALSE(deterministic_next(anbn, "aa").has_value());
    CHECK_FALSE(deterministic_next(anbn, "").has_value());
}

TEST_CASE("membership on pinned strings") {
    LanguageSpec anbn = builtin_language("anbn");
    CHECK(membership(anbn, "aabb"));
    CHECK_FALSE(membership(anbn, "aab"));
    CHECK(membership(anbn, ""));
    CHECK(membership(builtin_language("dyck2"), "([])"));
    CHECK_FALSE(membership(builtin_language("dyck2"), "(]"));
    CHECK_THROWS_AS(membership(anbn, "azb"), Error);
    CHECK_THROWS_AS(membership(anbn, "a#b"), Error);
}

TEST_CASE("membership agrees with brute-force derivation for all strings up to length 12") {
    for (const auto& id : builtin_language_ids()) {
        CAPTURE(id);
        LanguageSpec lang = builtin_language(id);
        std::size_t max_len = 12;
        auto members = test_support::members_upto(lang, max_len);
        std::size_t walker_accepts = 0;
        for_all_strings(lang.vocabulary.payload(), max_len, [&](const std::string& s) {
            if (membership(lang, s)) ++walker_accepts;
        });
        CHECK(walker_accepts == members.size());
        for (const auto& s : members) CHECK(membership(lang, s));
    }
}

TEST_CASE("valid next symbols agree with the grammar-derived sets") {
    // every prefix of every member up to length 10, all six languages
    for (const auto& id : builtin_language_ids()) {
        CAPTURE(id);
        LanguageSpec lang = builtin_language(id);
        auto members = test_support::members_upto(lang, 10);
        std::set<std::string> prefixes;
        for (const auto& s : members)
            for (std::size_t t = 0; t <= s.size(); ++t) prefixes.insert(s.substr(0, t));
        for (const auto& p : prefixes) {
            CAPTURE(p);
            CHECK(valid_next_symbols(lang, p) == test_support::brute_valid_next(lang, p));
        }
    }
}

TEST_CASE("deterministic next is non-empty exactly when one symbol is valid") {
    Rng rng(7);
    for (const auto& id : builtin_language_ids()) {
        LanguageSpec lang = builtin_language(id);
        // random valid prefixes via the oracle itself plus brute-force checks above
        for (int trial = 0; trial < 200; ++trial) {
            std::string prefix;
            OracleWalker walker(lang);
            for (int steps = 0; steps < 30; ++steps) {
                std::string valid = valid_next_symbols(lang, prefix);
                auto det = deterministic_next(lang, prefix);
                // drop '#'; it is not consumable
                std::string nonterm = valid;
                if (!nonterm.empty() && nonterm[0] == '#') nonterm.erase(0, 1);
                if (det.has_value())
                    CHECK(valid.size() == 1);
                else
                    CHECK(valid.size() > 1);
                if (nonterm.empty()) break;
                prefix.push_back(nonterm[rng.below(nonterm.size())]);
            }
        }
    }
}

TEST_CASE("dyck1 close-bracket validity tracks depth") {
    LanguageSpec dyck1 = builtin_language("dyck1");
    auto members = test_support::members_upto(dyck1, 12);
    for (const auto& s : members) {
        long long depth = 0;
        for (std::size_t t = 0; t <= s.size(); ++t) {
            std::string valid = valid_next_symbols(dyck1, s.substr(0, t));
            bool close_valid = valid.find(')') != std::string::npos;
            bool end_valid = valid.find('#') != std::string::npos;
            CHECK(close_valid == (depth > 0));
            CHECK(end_valid == (depth == 0));
            if (t < s.size()) depth += s[t] == '(' ? 1 : -1;
        }
    }
}

TEST_CASE("language definition files round-trip the builtin behavior") {
    std::string text =
        "language 1\n"
        "id my_anbn\n"
        "metric deterministic\n"
        "vocab ab\n"
        "oracle anbn\n"
        "generator pcfg\n"
        "start S\n"
        "rule S 0.7 a S b\n"
        "rule S 0.3\n";
    LanguageSpec custom = parse_language(text);
    LanguageSpec builtin = builtin_language("anbn");
    CHECK(custom.id == "my_anbn");
    CHECK(custom.vocabulary == builtin.vocabulary);
    CHECK(custom.metric_kind == builtin.metric_kind);
    CHECK(custom.pcfg() == builtin.pcfg());
    CHECK(valid_next_symbols(custom, "aab") == "b");
    CHECK(membership(custom, "aabb"));

    std::string geo =
        "language 1\n"
        "id my_blocks\n"
        "metric deterministic\n"
        "vocab xyz\n"
        "generator geometric\n"
        "blocks xyz\n";
    LanguageSpec blocks = parse_language(geo);
    CHECK_FALSE(blocks.has_pcfg());
    CHECK(blocks.geometric().blocks == "xyz");
    // no oracle bound: membership is unavailable
    CHECK_THROWS_AS(membership(blocks, "xyz"), UsageError);
}

TEST_CASE("language file parse errors carry the line number") {
    CHECK_THROWS_WITH_AS(parse_language("language 1\nbogus directive\n"),
                         doctest::Contains(":2:"), FormatError);
    CHECK_THROWS_WITH_AS(
        parse_language("language 1\nid x\nmetric det\nvocab ab\ngenerator pcfg\nstart S\n"
                       "rule S 0.5 a\nrule S 0.4\n"),
        doctest::Contains("sum"), UsageError);
}

TEST_CASE("vocabulary invariants") {
    Vocabulary v("ab");
    CHECK(v.size() == 3);
    CHECK(v.symbol(0) == '#');
    CHECK(v.index_of('a') == 1);
    CHECK(v.index_of('q') == -1);
    CHECK_THROWS_AS(Vocabulary("aa"), UsageError);
    CHECK_THROWS_AS(Vocabulary("a#"), UsageError);  // '#' may not repeat
}
