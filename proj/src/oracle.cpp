#include "langbench/oracle.hpp"

namespace langbench {

namespace {

int block_count_for(OracleKind kind) {
    switch (kind) {
        case OracleKind::exponent2: return 2;
        case OracleKind::exponent3: return 3;
        case OracleKind::exponent4: return 4;
        case OracleKind::addition: return 3;
        default: return 0;
    }
}

}  // namespace

OracleWalker::OracleWalker(const LanguageSpec& lang) : vocab_(&lang.vocabulary) {
    if (!lang.oracle)
        throw UsageError("language '" + lang.id +
                         "' has no analytic oracle; metrics and membership are unavailable");
    kind_ = *lang.oracle;
    block_count_ = block_count_for(kind_);
    int payload = vocab_->size() - 1;
    int needed = block_count_ ? block_count_ : (kind_ == OracleKind::dyck1 ? 2 : 4);
    if (payload != needed)
        throw UsageError("oracle for '" + lang.id + "' expects " + std::to_string(needed) +
                         " payload symbols, vocabulary has " + std::to_string(payload));
    reset();
}

void OracleWalker::reset() {
    counts_[0] = counts_[1] = counts_[2] = counts_[3] = 0;
    phase_ = 0;
    depth_ = 0;
    stack_.clear();
    recompute_mask();
}

int OracleWalker::deterministic_next_index() const {
    std::uint32_t m = mask_;
    if (m != 0 && (m & (m - 1)) == 0) {
        int idx = 0;
        while (!(m & 1u)) {
            m >>= 1;
            ++idx;
        }
        return idx;
    }
    return -1;
}

bool OracleWalker::advance(int symbol_index) {
    if (symbol_index <= 0 || !is_valid_next(symbol_index)) return false;
    int block = symbol_index - 1;  // payload symbols start at index 1
    switch (kind_) {
        case OracleKind::exponent2:
        case OracleKind::exponent3:
        case OracleKind::exponent4:
            ++counts_[block];
            phase_ = block;
            break;
        case OracleKind::addition:
            ++counts_[block];
            phase_ = block > phase_ ? block : phase_;
            break;
        case OracleKind::dyck1:
            depth_ += block == 0 ? 1 : -1;
            break;
        case OracleKind::dyck2:
            // payload order: ( ) [ ] -> pair = block/2, opener iff block even
            if (block % 2 == 0)
                stack_.push_back(static_cast<std::uint8_t>(block / 2));
            else
                stack_.pop_back();
            break;
    }
    recompute_mask();
    return true;
}

void OracleWalker::recompute_mask() {
    auto bit = [](int vocab_index) { return 1u << vocab_index; };
    std::uint32_t m = 0;
    switch (kind_) {
        case OracleKind::exponent2:
        case OracleKind::exponent3:
        case OracleKind::exponent4: {
            // prefix is block0^c0 ... block_phase^c_phase
            if (phase_ == 0) {
                m = counts_[0] == 0 ? (bit(1) | bit(0)) : (bit(1) | bit(2));
            } else if (counts_[phase_] < counts_[0]) {
                m = bit(phase_ + 1);
            } else if (phase_ + 1 < block_count_) {
                m = bit(phase_ + 2);
            } else {
                m = bit(0);
            }
            break;
        }
        case OracleKind::addition: {
            const long long na = counts_[0], nb = counts_[1], nc = counts_[2];
            if (nc > 0) {
                m = nc < na + nb ? bit(3) : bit(0);
            } else if (nb > 0) {
                m = bit(2) | bit(3);
            } else if (na > 0) {
                m = bit(1) | bit(2) | bit(3);
            } else {
                m = bit(1) | bit(2) | bit(0);
            }
            break;
        }
        case OracleKind::dyck1:
            m = bit(1);
            m |= depth_ > 0 ? bit(2) : bit(0);
            break;
        case OracleKind::dyck2:
            m = bit(1) | bit(3);
            if (stack_.empty())
                m |= bit(0);
            else
                m |= bit(stack_.back() == 0 ? 2 : 4);
            break;
    }
    mask_ = m;
}

namespace {

// Walks `prefix` through the oracle, throwing on the first invalid symbol.
OracleWalker walk_prefix(const LanguageSpec& lang, std::string_view prefix) {
    OracleWalker walker(lang);
    const Vocabulary& vocab = lang.vocabulary;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        int idx = vocab.index_of(prefix[i]);
        if (idx < 0)
            throw Error(std::string("symbol '") + prefix[i] + "' at position " +
                        std::to_string(i) + " is not in the vocabulary of " + lang.id);
        if (idx == 0)
            throw Error("framing symbol at position " + std::to_string(i) +
                        " is not allowed inside a string");
        if (!walker.advance(idx))
            throw Error(std::string("prefix is not derivable in ") + lang.id + ": symbol '" +
                        prefix[i] + "' at position " + std::to_string(i) +
                        " cannot continue any member");
    }
    return walker;
}

}  // namespace

std::string valid_next_symbols(const LanguageSpec& lang, std::string_view prefix) {
    OracleWalker walker = walk_prefix(lang, prefix);
    std::string out;
    for (int i = 0; i < lang.vocabulary.size(); ++i)
        if (walker.is_valid_next(i)) out.push_back(lang.vocabulary.symbol(i));
    return out;
}

std::optional<char> deterministic_next(const LanguageSpec& lang, std::string_view prefix) {
    OracleWalker walker = walk_prefix(lang, prefix);
    int idx = walker.deterministic_next_index();
    if (idx < 0) return std::nullopt;
    return lang.vocabulary.symbol(idx);
}

bool membership(const LanguageSpec& lang, std::string_view s) {
    OracleWalker walker(lang);
    const Vocabulary& vocab = lang.vocabulary;
    for (std::size_t i = 0; i < s.size(); ++i) {
        int idx = vocab.index_of(s[i]);
        if (idx < 0)
            throw Error(std::string("symbol '") + s[i] + "' at position " + std::to_string(i) +
                        " is not in the vocabulary of " + lang.id);
        if (idx == 0)
            throw Error("framing symbol at position " + std::to_string(i) +
                        " is not allowed inside a string");
        if (!walker.advance(idx)) return false;
    }
    return walker.is_member();
}

}  // namespace langbench
