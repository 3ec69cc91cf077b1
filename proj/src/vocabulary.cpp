#include "langbench/vocabulary.hpp"

namespace langbench {

Vocabulary::Vocabulary(std::string_view payload) {
    symbols_.reserve(payload.size() + 1);
    symbols_.push_back(kFraming);
    symbols_.append(payload);
    if (symbols_.size() > 32)
        throw UsageError("vocabulary too large: at most 31 payload symbols are supported");
    lookup_.fill(-1);
    for (std::size_t i = 0; i < symbols_.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(symbols_[i]);
        if (lookup_[c] >= 0)
            throw UsageError(std::string("duplicate symbol '") + symbols_[i] + "' in vocabulary");
        lookup_[c] = static_cast<std::int16_t>(i);
    }
}

}  // namespace langbench
