#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "langbench/language.hpp"

namespace langbench {

// Incremental exact recognizer. Consumes one symbol at a time and reports the
// set of symbols that can legally follow the prefix consumed so far, as a
// bitmask over vocabulary indices (bit 0 = framing symbol, i.e. the prefix is
// itself a member). O(1) per step for every supported language.
class OracleWalker {
public:
    explicit OracleWalker(const LanguageSpec& lang);

    void reset();

    // Mask of valid next symbols for the current prefix.
    std::uint32_t valid_mask() const { return mask_; }
    bool is_member() const { return (mask_ & 1u) != 0; }
    bool is_valid_next(int symbol_index) const { return (mask_ >> symbol_index) & 1u; }

    // If exactly one symbol can follow, its vocabulary index; -1 otherwise.
    int deterministic_next_index() const;

    // Consumes one symbol (by vocabulary index). Returns false if the symbol
    // is not a valid continuation; the walker is then unusable until reset.
    bool advance(int symbol_index);

    const Vocabulary& vocabulary() const { return *vocab_; }

private:
    void recompute_mask();

    const Vocabulary* vocab_;
    OracleKind kind_;
    // exponent/addition families
    int block_count_ = 0;
    long long counts_[4] = {0, 0, 0, 0};
    int phase_ = 0;
    // dyck1
    long long depth_ = 0;
    // dyck2: stack of pair indices (0 or 1)
    std::vector<std::uint8_t> stack_;
    std::uint32_t mask_ = 0;
};

// The set of symbols that may follow `prefix`, in vocabulary order; includes
// the framing symbol iff the prefix is a member of the language. Throws if
// the prefix is not derivable, naming the first offending position.
std::string valid_next_symbols(const LanguageSpec& lang, std::string_view prefix);

// The unique next symbol when the prefix is deterministic, otherwise empty.
std::optional<char> deterministic_next(const LanguageSpec& lang, std::string_view prefix);

// Exact membership; rejects symbols outside the vocabulary (including the
// framing symbol, which never occurs inside a string).
bool membership(const LanguageSpec& lang, std::string_view s);

}  // namespace langbench
