#pragma once

#include <limits>

#include "langbench/corpus.hpp"
#include "langbench/language.hpp"
#include "langbench/rnn.hpp"

namespace langbench {

// Description-length score: architecture bits plus the corpus code length
// under the network, both in bits. data_bits is +infinity when the network
// assigns probability zero to an observed symbol.
struct MdlScore {
    double grammar_bits = 0.0;
    double data_bits = 0.0;

    double total() const { return grammar_bits + data_bits; }
    bool finite() const { return data_bits != std::numeric_limits<double>::infinity(); }
};

// Elias-gamma code length in bits for n >= 1.
unsigned elias_gamma_bits(unsigned long long n);

// Bits used to encode one rational weight: sign, gamma(|num|+1), gamma(den).
unsigned weight_bits(const Rational& w);

// Relabels hidden units into the canonical order (structural color
// refinement; see docs/genome-encoding.md) with ids 2V, 2V+1, ...
RnnGenome canonicalize(const RnnGenome& genome);

// Architecture encoding length in bits under the frozen v1 scheme
// (docs/genome-encoding.md). Canonicalizes before encoding, so the result is
// invariant under hidden-unit relabeling.
double encoding_length(const RnnGenome& genome);

// Cross-entropy of the corpus under the genome, in bits: -sum log2 p(target)
// over every framed step of every string. Infinite if any observed symbol
// gets probability zero. Summed per string, so costs are additive.
double data_cost(const RnnGenome& genome, const LanguageSpec& lang, const Corpus& corpus);

MdlScore mdl_score(const RnnGenome& genome, const LanguageSpec& lang, const Corpus& corpus);

}  // namespace langbench
