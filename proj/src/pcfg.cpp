#include "langbench/pcfg.hpp"

#include <cmath>
#include <map>
#include <set>

namespace langbench {

void Pcfg::validate(const Vocabulary& vocab) const {
    if (rules.empty()) throw UsageError("grammar has no rules");
    std::map<std::string, double> sums;
    std::set<std::string> defined;
    for (const auto& rule : rules) {
        if (!(rule.probability > 0.0 && rule.probability <= 1.0))
            throw UsageError("rule probability for '" + rule.lhs + "' must lie in (0,1]");
        sums[rule.lhs] += rule.probability;
        defined.insert(rule.lhs);
    }
    if (!defined.count(start)) throw UsageError("start symbol '" + start + "' has no rules");
    for (const auto& [lhs, sum] : sums) {
        if (std::fabs(sum - 1.0) > 1e-12)
            throw UsageError("rule probabilities for '" + lhs + "' sum to " +
                             std::to_string(sum) + ", expected 1");
    }
    for (const auto& rule : rules) {
        for (const auto& sym : rule.rhs) {
            if (sym.is_terminal) {
                if (!vocab.contains(sym.terminal) || sym.terminal == Vocabulary::kFraming)
                    throw UsageError(std::string("terminal '") + sym.terminal +
                                     "' is not a payload symbol of the vocabulary");
            } else if (!defined.count(sym.nonterminal)) {
                throw UsageError("nonterminal '" + sym.nonterminal + "' has no rules");
            }
        }
    }
}

}  // namespace langbench
