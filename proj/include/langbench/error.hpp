#pragma once

#include <stdexcept>
#include <string>

namespace langbench {

// Base class for all engine failures.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed on-disk data: corpus files, genome files, language files, archives.
struct FormatError : Error {
    using Error::Error;
};

// Invalid user-supplied configuration or arguments.
struct UsageError : Error {
    using Error::Error;
};

}  // namespace langbench
