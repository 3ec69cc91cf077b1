#pragma once

#include <string>
#include <vector>

#include "langbench/vocabulary.hpp"

namespace langbench {

// One element of a rule's right-hand side: a terminal character or a
// nonterminal name.
struct PcfgSymbol {
    bool is_terminal = false;
    char terminal = 0;
    std::string nonterminal;

    static PcfgSymbol term(char c) { return {true, c, {}}; }
    static PcfgSymbol nonterm(std::string name) { return {false, 0, std::move(name)}; }

    bool operator==(const PcfgSymbol&) const = default;
};

struct PcfgRule {
    std::string lhs;
    std::vector<PcfgSymbol> rhs;  // empty = epsilon rule
    double probability = 0.0;

    bool operator==(const PcfgRule&) const = default;
};

// Probabilistic context-free grammar. Rule order is significant for
// reproducible sampling.
struct Pcfg {
    std::string start;
    std::vector<PcfgRule> rules;

    // Checks that per-lhs probabilities sum to 1 within 1e-12, every
    // nonterminal used on a rhs has at least one rule, probabilities lie in
    // (0,1], and terminals belong to the vocabulary.
    void validate(const Vocabulary& vocab) const;

    bool operator==(const Pcfg&) const = default;
};

}  // namespace langbench
