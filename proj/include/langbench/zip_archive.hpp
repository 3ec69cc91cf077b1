#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "langbench/error.hpp"

namespace langbench {

// Minimal zip container with traditional PKWARE (ZipCrypto) passphrase
// encryption and stored (uncompressed) entries. Interoperates with standard
// unzip tools. Archives are byte-reproducible: entry timestamps are fixed and
// the encryption preamble is derived deterministically from the passphrase
// and content.
struct ZipEntry {
    std::string name;
    std::string data;
};

std::string write_encrypted_zip(const std::vector<ZipEntry>& entries,
                                const std::string& passphrase);

// Throws FormatError on a wrong passphrase or corrupt archive.
std::vector<ZipEntry> read_encrypted_zip(const std::string& archive,
                                         const std::string& passphrase);

std::uint32_t crc32_ieee(const std::string& data);

}  // namespace langbench
