#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "langbench/pcfg.hpp"
#include "langbench/vocabulary.hpp"

namespace langbench {

enum class MetricKind { deterministic, categorical };

std::string to_string(MetricKind kind);
MetricKind metric_kind_from_string(const std::string& name);

// Exact recognizer families implemented in the oracle walker.
enum class OracleKind {
    exponent2,  // x^n y^n
    exponent3,  // x^n y^n z^n
    exponent4,  // w^n x^n y^n z^n
    addition,   // x^n y^m z^(n+m)
    dyck1,      // one bracket pair
    dyck2,      // two bracket pairs
};

// Generator that draws one exponent n geometrically and emits each block
// symbol n times, in vocabulary order.
struct GeometricFamily {
    std::string blocks;

    bool operator==(const GeometricFamily&) const = default;
};

struct LanguageSpec {
    std::string id;
    Vocabulary vocabulary;
    std::variant<Pcfg, GeometricFamily> generator;
    MetricKind metric_kind = MetricKind::deterministic;
    std::string description;
    // Analytic recognizer for the language; absent for user-defined languages
    // that do not bind one.
    std::optional<OracleKind> oracle;

    bool has_pcfg() const { return std::holds_alternative<Pcfg>(generator); }
    const Pcfg& pcfg() const { return std::get<Pcfg>(generator); }
    const GeometricFamily& geometric() const { return std::get<GeometricFamily>(generator); }
};

// Identifiers accepted by builtin_language.
const std::vector<std::string>& builtin_language_ids();

// Builds one of the six built-in benchmark languages. PCFG expansion
// probabilities are parameterized by the prior probability p.
LanguageSpec builtin_language(const std::string& id, double prior = 0.3);

// Parses a declarative language definition (see docs/formats.md).
LanguageSpec parse_language(const std::string& text, const std::string& origin = "<string>");
LanguageSpec load_language_file(const std::string& path);

}  // namespace langbench
