#pragma once

#include <cstdint>
#include <string>

#include "langbench/corpus.hpp"
#include "langbench/language.hpp"
#include "langbench/rng.hpp"

namespace langbench {

struct SamplerConfig {
    std::uint64_t seed = 100;
    double prior = 0.3;
    std::size_t size = 1000;

    void validate() const;
};

// Draws cfg.size strings from the language's generator: leftmost PCFG
// expansion with rules chosen proportionally to their probabilities, or one
// geometric exponent per string for block families. Bit-reproducible for a
// fixed (seed, prior, size, language).
Corpus sample_training(const LanguageSpec& lang, const SamplerConfig& cfg);

// The first `size` members of the language strictly beyond the training
// frontier, in enumeration order:
//   - single-exponent families: by n ascending from (max train n) + 1;
//   - addition language: by s = n+m ascending from (max train s) + 1, within
//     equal s by n ascending;
//   - Dyck: by length ascending from (max train length) + 2, within equal
//     length lexicographically by vocabulary index.
// Throws if a requested string would exceed max_string_length.
Corpus enumerate_test(const LanguageSpec& lang, const Corpus& train, std::size_t size,
                      std::size_t max_string_length = 1'000'000);

// Maximal exponent over the corpus strings (n, or n+m for the addition
// language); nullopt for Dyck languages.
std::optional<long long> corpus_frontier(const LanguageSpec& lang,
                                         const std::vector<std::string>& strings);

}  // namespace langbench
