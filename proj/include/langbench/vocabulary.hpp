#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>

#include "langbench/error.hpp"

namespace langbench {

// Ordered set of single-character symbols. The framing symbol '#' is always
// present at index 0; the constructor takes the payload symbols only.
class Vocabulary {
public:
    static constexpr char kFraming = '#';

    explicit Vocabulary(std::string_view payload);

    int size() const { return static_cast<int>(symbols_.size()); }
    char symbol(int index) const { return symbols_[static_cast<std::size_t>(index)]; }
    int index_of(char c) const { return lookup_[static_cast<unsigned char>(c)]; }
    bool contains(char c) const { return index_of(c) >= 0; }

    // All symbols, framing symbol first.
    const std::string& symbols() const { return symbols_; }
    // Symbols without the framing symbol.
    std::string payload() const { return symbols_.substr(1); }

    bool operator==(const Vocabulary& other) const { return symbols_ == other.symbols_; }

private:
    std::string symbols_;
    std::array<std::int16_t, 256> lookup_;
};

}  // namespace langbench
