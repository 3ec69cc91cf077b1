#include "langbench/language.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace langbench {

std::string to_string(MetricKind kind) {
    return kind == MetricKind::deterministic ? "deterministic" : "categorical";
}

MetricKind metric_kind_from_string(const std::string& name) {
    if (name == "deterministic" || name == "det") return MetricKind::deterministic;
    if (name == "categorical" || name == "cat") return MetricKind::categorical;
    throw UsageError("unknown metric kind '" + name + "' (expected deterministic|categorical)");
}

const std::vector<std::string>& builtin_language_ids() {
    static const std::vector<std::string> ids = {"anbn",     "anbncn", "anbncndn",
                                                 "anbmcnpm", "dyck1",  "dyck2"};
    return ids;
}

namespace {

OracleKind oracle_kind_for_builtin(const std::string& id) {
    if (id == "anbn") return OracleKind::exponent2;
    if (id == "anbncn") return OracleKind::exponent3;
    if (id == "anbncndn") return OracleKind::exponent4;
    if (id == "anbmcnpm") return OracleKind::addition;
    if (id == "dyck1") return OracleKind::dyck1;
    if (id == "dyck2") return OracleKind::dyck2;
    throw UsageError("no analytic oracle named '" + id + "'");
}

void check_prior(double p) {
    if (!(p > 0.0 && p < 1.0)) throw UsageError("prior probability must lie in (0,1)");
}

}  // namespace

LanguageSpec builtin_language(const std::string& id, double prior) {
    check_prior(prior);
    const double p = prior;
    using S = PcfgSymbol;

    if (id == "anbn") {
        Pcfg g;
        g.start = "S";
        g.rules = {{"S", {S::term('a'), S::nonterm("S"), S::term('b')}, 1.0 - p},
                   {"S", {}, p}};
        LanguageSpec spec{id, Vocabulary("ab"), std::move(g), MetricKind::deterministic,
                          "equal-length a/b blocks", OracleKind::exponent2};
        spec.pcfg().validate(spec.vocabulary);
        return spec;
    }
    if (id == "anbncn") {
        LanguageSpec spec{id, Vocabulary("abc"), GeometricFamily{"abc"},
                          MetricKind::deterministic, "three equal blocks, geometric exponent",
                          OracleKind::exponent3};
        return spec;
    }
    if (id == "anbncndn") {
        LanguageSpec spec{id, Vocabulary("abcd"), GeometricFamily{"abcd"},
                          MetricKind::deterministic, "four equal blocks, geometric exponent",
                          OracleKind::exponent4};
        return spec;
    }
    if (id == "anbmcnpm") {
        Pcfg g;
        g.start = "S";
        g.rules = {{"S", {S::term('a'), S::nonterm("S"), S::term('c')}, 1.0 - p},
                   {"S", {S::nonterm("X")}, p},
                   {"X", {S::term('b'), S::nonterm("X"), S::term('c')}, 1.0 - p},
                   {"X", {}, p}};
        LanguageSpec spec{id, Vocabulary("abc"), std::move(g), MetricKind::deterministic,
                          "c block as long as a and b blocks together", OracleKind::addition};
        spec.pcfg().validate(spec.vocabulary);
        return spec;
    }
    if (id == "dyck1") {
        Pcfg g;
        g.start = "S";
        g.rules = {{"S", {S::term('('), S::nonterm("S"), S::term(')'), S::nonterm("S")}, p},
                   {"S", {}, 1.0 - p}};
        LanguageSpec spec{id, Vocabulary("()"), std::move(g), MetricKind::categorical,
                          "balanced parentheses", OracleKind::dyck1};
        spec.pcfg().validate(spec.vocabulary);
        return spec;
    }
    if (id == "dyck2") {
        Pcfg g;
        g.start = "S";
        g.rules = {{"S", {S::term('('), S::nonterm("S"), S::term(')'), S::nonterm("S")}, p / 2},
                   {"S", {S::term('['), S::nonterm("S"), S::term(']'), S::nonterm("S")}, p / 2},
                   {"S", {}, 1.0 - p}};
        LanguageSpec spec{id, Vocabulary("()[]"), std::move(g), MetricKind::categorical,
                          "balanced brackets of two kinds", OracleKind::dyck2};
        spec.pcfg().validate(spec.vocabulary);
        return spec;
    }

    std::string valid;
    for (const auto& known : builtin_language_ids()) {
        if (!valid.empty()) valid += ", ";
        valid += known;
    }
    throw UsageError("unknown language '" + id + "' (valid ids: " + valid + ")");
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

}  // namespace

LanguageSpec parse_language(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;

    auto fail = [&](const std::string& msg) -> void {
        throw FormatError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };

    std::string id, metric, vocab_payload, oracle_id, generator, blocks, description;
    std::string start;
    std::vector<PcfgRule> rules;
    bool saw_header = false;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') fail("CRLF line endings are not supported");
        auto tokens = split_ws(line);
        if (tokens.empty() || tokens[0][0] == ';') continue;
        const std::string& key = tokens[0];
        if (key == "language") {
            if (tokens.size() != 2 || tokens[1] != "1") fail("expected 'language 1' header");
            saw_header = true;
        } else if (key == "id") {
            if (tokens.size() != 2) fail("expected 'id <name>'");
            id = tokens[1];
        } else if (key == "metric") {
            if (tokens.size() != 2) fail("expected 'metric deterministic|categorical'");
            metric = tokens[1];
        } else if (key == "vocab") {
            if (tokens.size() != 2) fail("expected 'vocab <symbols>'");
            vocab_payload = tokens[1];
        } else if (key == "oracle") {
            if (tokens.size() != 2) fail("expected 'oracle <builtin-id>'");
            oracle_id = tokens[1];
        } else if (key == "generator") {
            if (tokens.size() != 2 || (tokens[1] != "pcfg" && tokens[1] != "geometric"))
                fail("expected 'generator pcfg|geometric'");
            generator = tokens[1];
        } else if (key == "blocks") {
            if (tokens.size() != 2) fail("expected 'blocks <symbols>'");
            blocks = tokens[1];
        } else if (key == "start") {
            if (tokens.size() != 2) fail("expected 'start <nonterminal>'");
            start = tokens[1];
        } else if (key == "description") {
            description = line.substr(line.find("description") + 12);
        } else if (key == "rule") {
            // rule <lhs> <probability> <rhs tokens...>
            if (tokens.size() < 3) fail("expected 'rule <lhs> <prob> <rhs...>'");
            PcfgRule rule;
            rule.lhs = tokens[1];
            try {
                rule.probability = std::stod(tokens[2]);
            } catch (const std::exception&) {
                fail("cannot parse probability '" + tokens[2] + "'");
            }
            for (std::size_t i = 3; i < tokens.size(); ++i) {
                const std::string& tok = tokens[i];
                if (tok.size() == 1 && vocab_payload.find(tok[0]) != std::string::npos)
                    rule.rhs.push_back(PcfgSymbol::term(tok[0]));
                else
                    rule.rhs.push_back(PcfgSymbol::nonterm(tok));
            }
            rules.push_back(std::move(rule));
        } else {
            fail("unknown directive '" + key + "'");
        }
    }

    lineno = 0;
    if (!saw_header) fail("missing 'language 1' header");
    if (id.empty()) fail("missing 'id'");
    if (metric.empty()) fail("missing 'metric'");
    if (vocab_payload.empty()) fail("missing 'vocab'");
    if (generator.empty()) fail("missing 'generator'");

    LanguageSpec spec{id, Vocabulary(vocab_payload), GeometricFamily{},
                      metric_kind_from_string(metric), description, std::nullopt};
    if (generator == "pcfg") {
        if (rules.empty()) fail("pcfg generator requires at least one rule");
        if (start.empty()) fail("pcfg generator requires 'start'");
        Pcfg g{start, std::move(rules)};
        g.validate(spec.vocabulary);
        spec.generator = std::move(g);
    } else {
        if (blocks.empty()) fail("geometric generator requires 'blocks'");
        for (char c : blocks)
            if (!spec.vocabulary.contains(c) || c == Vocabulary::kFraming)
                fail(std::string("block symbol '") + c + "' is not in the vocabulary");
        spec.generator = GeometricFamily{blocks};
    }
    if (!oracle_id.empty()) spec.oracle = oracle_kind_for_builtin(oracle_id);
    return spec;
}

LanguageSpec load_language_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open language file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_language(buf.str(), path);
}

}  // namespace langbench
