#include "langbench/sampling.hpp"

#include <algorithm>
#include <map>

#include "langbench/oracle.hpp"

namespace langbench {

void SamplerConfig::validate() const {
    if (!(prior > 0.0 && prior < 1.0)) throw UsageError("sampler prior must lie in (0,1)");
    if (size < 1) throw UsageError("sampler size must be at least 1");
}

std::string to_string(CorpusRole role) {
    return role == CorpusRole::train ? "train" : "test";
}

CorpusRole corpus_role_from_string(const std::string& name) {
    if (name == "train") return CorpusRole::train;
    if (name == "test") return CorpusRole::test;
    throw FormatError("unknown corpus role '" + name + "'");
}

namespace {

class PcfgSampler {
public:
    explicit PcfgSampler(const Pcfg& g) : grammar_(g) {
        for (const auto& r : g.rules) by_lhs_[r.lhs].push_back(&r);
    }

    // leftmost expansion with an explicit stack (rhs pushed in reverse)
    std::string sample(Rng& rng) const {
        std::string out;
        std::vector<const PcfgSymbol*> stack;
        PcfgSymbol start = PcfgSymbol::nonterm(grammar_.start);
        stack.push_back(&start);
        while (!stack.empty()) {
            const PcfgSymbol* sym = stack.back();
            stack.pop_back();
            if (sym->is_terminal) {
                out.push_back(sym->terminal);
                continue;
            }
            const auto& rules = by_lhs_.at(sym->nonterminal);
            double u = rng.uniform01();
            double cumulative = 0.0;
            const PcfgRule* chosen = rules.back();
            for (const auto* rule : rules) {
                cumulative += rule->probability;
                if (u < cumulative) {
                    chosen = rule;
                    break;
                }
            }
            for (auto it = chosen->rhs.rbegin(); it != chosen->rhs.rend(); ++it)
                stack.push_back(&*it);
        }
        return out;
    }

private:
    const Pcfg& grammar_;
    std::map<std::string, std::vector<const PcfgRule*>> by_lhs_;
};

std::string repeated_blocks(const std::string& blocks, long long n) {
    std::string out;
    out.reserve(blocks.size() * static_cast<std::size_t>(n));
    for (char b : blocks) out.append(static_cast<std::size_t>(n), b);
    return out;
}

long long exponent_of(const LanguageSpec& lang, const std::string& s) {
    switch (*lang.oracle) {
        case OracleKind::exponent2: return static_cast<long long>(s.size()) / 2;
        case OracleKind::exponent3: return static_cast<long long>(s.size()) / 3;
        case OracleKind::exponent4: return static_cast<long long>(s.size()) / 4;
        case OracleKind::addition: return static_cast<long long>(s.size()) / 2;  // n+m
        default: return -1;
    }
}

}  // namespace

std::optional<long long> corpus_frontier(const LanguageSpec& lang,
                                         const std::vector<std::string>& strings) {
    if (!lang.oracle || *lang.oracle == OracleKind::dyck1 || *lang.oracle == OracleKind::dyck2)
        return std::nullopt;
    long long frontier = 0;
    for (const auto& s : strings) frontier = std::max(frontier, exponent_of(lang, s));
    return frontier;
}

Corpus sample_training(const LanguageSpec& lang, const SamplerConfig& cfg) {
    cfg.validate();
    Rng rng(cfg.seed);
    Corpus corpus;
    corpus.language_id = lang.id;
    corpus.role = CorpusRole::train;
    corpus.strings.reserve(cfg.size);
    if (lang.has_pcfg()) {
        PcfgSampler sampler(lang.pcfg());
        for (std::size_t i = 0; i < cfg.size; ++i) corpus.strings.push_back(sampler.sample(rng));
    } else {
        for (std::size_t i = 0; i < cfg.size; ++i)
            corpus.strings.push_back(
                repeated_blocks(lang.geometric().blocks, geometric_draw(cfg.prior, rng)));
    }
    corpus.meta.seed = cfg.seed;
    corpus.meta.prior = cfg.prior;
    corpus.meta.requested_size = cfg.size;
    for (const auto& s : corpus.strings)
        corpus.meta.max_length = std::max(corpus.meta.max_length, s.size());
    corpus.meta.frontier = corpus_frontier(lang, corpus.strings);
    return corpus;
}

namespace {

// Lexicographically ordered (by vocabulary index) balanced strings of the
// exact given length. Payload symbols alternate opener/closer: payload[2i]
// opens pair i, payload[2i+1] closes it. Emits at most `budget` strings.
void enumerate_dyck_of_length(const LanguageSpec& lang, std::size_t length, std::size_t budget,
                              std::vector<std::string>& out) {
    if (budget == 0 || length % 2 != 0) return;
    const std::string payload = lang.vocabulary.payload();

    std::size_t emitted = 0;
    std::string buf;
    std::vector<int> stack;  // open pair indices
    auto rec = [&](auto&& self) -> bool {
        if (buf.size() == length) {
            out.push_back(buf);
            return ++emitted >= budget;
        }
        std::size_t remaining = length - buf.size();
        for (int p = 0; p < static_cast<int>(payload.size()); ++p) {
            if (p % 2 == 0) {
                if (remaining < stack.size() + 2) continue;
                stack.push_back(p / 2);
            } else {
                if (stack.empty() || stack.back() != p / 2) continue;
                stack.pop_back();
            }
            buf.push_back(payload[static_cast<std::size_t>(p)]);
            if (self(self)) return true;
            buf.pop_back();
            if (p % 2 == 0)
                stack.pop_back();
            else
                stack.push_back(p / 2);
        }
        return false;
    };
    rec(rec);
}

}  // namespace

Corpus enumerate_test(const LanguageSpec& lang, const Corpus& train, std::size_t size,
                      std::size_t max_string_length) {
    if (train.role != CorpusRole::train) throw UsageError("enumerate_test expects a train corpus");
    if (train.strings.empty()) throw UsageError("enumerate_test expects a non-empty train corpus");
    if (size < 1) throw UsageError("test size must be at least 1");
    if (!lang.oracle) throw UsageError("language '" + lang.id + "' has no enumeration order");

    Corpus corpus;
    corpus.language_id = lang.id;
    corpus.role = CorpusRole::test;
    corpus.strings.reserve(size);
    corpus.meta.prior = train.meta.prior;
    corpus.meta.seed = train.meta.seed;
    corpus.meta.requested_size = size;

    auto check_length = [&](std::size_t len) {
        if (len > max_string_length)
            throw Error("test enumeration reached string length " + std::to_string(len) +
                        ", above the limit of " + std::to_string(max_string_length));
    };

    const std::string payload = lang.vocabulary.payload();
    switch (*lang.oracle) {
        case OracleKind::exponent2:
        case OracleKind::exponent3:
        case OracleKind::exponent4: {
            long long start_n = corpus_frontier(lang, train.strings).value() + 1;
            for (std::size_t i = 0; i < size; ++i) {
                long long n = start_n + static_cast<long long>(i);
                check_length(payload.size() * static_cast<std::size_t>(n));
                corpus.strings.push_back(repeated_blocks(payload, n));
            }
            break;
        }
        case OracleKind::addition: {
            long long s = corpus_frontier(lang, train.strings).value() + 1;
            long long n = 0;
            for (std::size_t i = 0; i < size; ++i) {
                check_length(2 * static_cast<std::size_t>(s));
                std::string str;
                str.reserve(static_cast<std::size_t>(2 * s));
                str.append(static_cast<std::size_t>(n), payload[0]);
                str.append(static_cast<std::size_t>(s - n), payload[1]);
                str.append(static_cast<std::size_t>(s), payload[2]);
                corpus.strings.push_back(std::move(str));
                if (++n > s) {
                    ++s;
                    n = 0;
                }
            }
            break;
        }
        case OracleKind::dyck1:
        case OracleKind::dyck2: {
            std::size_t length = 0;
            for (const auto& s : train.strings) length = std::max(length, s.size());
            length += 2;
            while (corpus.strings.size() < size) {
                check_length(length);
                enumerate_dyck_of_length(lang, length, size - corpus.strings.size(),
                                         corpus.strings);
                length += 2;
            }
            break;
        }
    }

    for (const auto& s : corpus.strings)
        corpus.meta.max_length = std::max(corpus.meta.max_length, s.size());
    corpus.meta.frontier = corpus_frontier(lang, corpus.strings);
    return corpus;
}

}  // namespace langbench
