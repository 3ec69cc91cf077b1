#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "langbench/error.hpp"

namespace langbench {

enum class CorpusRole { train, test };

std::string to_string(CorpusRole role);
CorpusRole corpus_role_from_string(const std::string& name);

struct CorpusMeta {
    std::uint64_t seed = 0;
    double prior = 0.0;
    std::size_t requested_size = 0;
    std::size_t max_length = 0;
    // Maximal exponent seen: n for the single-exponent families, n+m for the
    // addition language. Unset for Dyck languages, where the enumeration
    // frontier is max_length.
    std::optional<long long> frontier;
};

// Training corpora are multisets (repetitions allowed); test corpora are
// duplicate-free and ordered by the enumeration order of their language.
struct Corpus {
    std::string language_id;
    CorpusRole role = CorpusRole::train;
    std::vector<std::string> strings;
    CorpusMeta meta;

    std::size_t size() const { return strings.size(); }
};

}  // namespace langbench
