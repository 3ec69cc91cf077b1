#include "langbench/zip_archive.hpp"

#include <array>
#include <cstring>

namespace langbench {

namespace {

std::array<std::uint32_t, 256> make_crc_table() {
    std::array<std::uint32_t, 256> table{};
    for (std::uint32_t i = 0; i < 256; ++i) {
        std::uint32_t c = i;
        for (int k = 0; k < 8; ++k) c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
        table[i] = c;
    }
    return table;
}

const std::array<std::uint32_t, 256>& crc_table() {
    static const auto table = make_crc_table();
    return table;
}

std::uint32_t crc32_update(std::uint32_t crc, unsigned char byte) {
    return crc_table()[(crc ^ byte) & 0xFF] ^ (crc >> 8);
}

// Traditional PKWARE stream cipher state.
class ZipCipher {
public:
    explicit ZipCipher(const std::string& passphrase) {
        for (char c : passphrase) update(static_cast<unsigned char>(c));
    }

    unsigned char stream_byte() const {
        std::uint16_t t = static_cast<std::uint16_t>(key2_ | 2);
        return static_cast<unsigned char>((t * (t ^ 1)) >> 8);
    }

    unsigned char encrypt(unsigned char plain) {
        unsigned char cipher = plain ^ stream_byte();
        update(plain);
        return cipher;
    }

    unsigned char decrypt(unsigned char cipher) {
        unsigned char plain = cipher ^ stream_byte();
        update(plain);
        return plain;
    }

private:
    // key schedule from the zip appnote: raw crc table steps, no inversion
    void update(unsigned char byte) {
        key0_ = raw_crc(key0_, byte);
        key1_ = (key1_ + (key0_ & 0xFF)) * 134775813u + 1;
        key2_ = raw_crc(key2_, static_cast<unsigned char>(key1_ >> 24));
    }

    static std::uint32_t raw_crc(std::uint32_t crc, unsigned char byte) {
        return crc_table()[(crc ^ byte) & 0xFF] ^ (crc >> 8);
    }

    std::uint32_t key0_ = 0x12345678u;
    std::uint32_t key1_ = 0x23456789u;
    std::uint32_t key2_ = 0x34567890u;
};

void put_u16(std::string& out, std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xFF));
    out.push_back(static_cast<char>((v >> 8) & 0xFF));
}

void put_u32(std::string& out, std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint16_t get_u16(const std::string& in, std::size_t pos) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(in[pos]) |
                                      (static_cast<unsigned char>(in[pos + 1]) << 8));
}

std::uint32_t get_u32(const std::string& in, std::size_t pos) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i)
        v = (v << 8) | static_cast<unsigned char>(in[pos + static_cast<std::size_t>(i)]);
    return v;
}

// 64-bit FNV-1a, used only to derive the deterministic encryption preamble.
std::uint64_t fnv1a(const std::string& data, std::uint64_t h = 0xcbf29ce484222325ull) {
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint16_t kDosTime = 0;       // 00:00:00
constexpr std::uint16_t kDosDate = 0x0021;  // 1980-01-01
constexpr std::uint16_t kVersion = 20;
constexpr std::uint16_t kFlagEncrypted = 0x0001;

}  // namespace

std::uint32_t crc32_ieee(const std::string& data) {
    std::uint32_t crc = 0xFFFFFFFFu;
    for (char c : data) crc = crc32_update(crc, static_cast<unsigned char>(c));
    return crc ^ 0xFFFFFFFFu;
}

std::string write_encrypted_zip(const std::vector<ZipEntry>& entries,
                                const std::string& passphrase) {
    if (passphrase.empty()) throw UsageError("passphrase must not be empty");

    std::string out;
    struct CentralRecord {
        std::string name;
        std::uint32_t crc, compressed, uncompressed, offset;
    };
    std::vector<CentralRecord> central;

    for (const auto& entry : entries) {
        std::uint32_t crc = crc32_ieee(entry.data);
        std::uint32_t offset = static_cast<std::uint32_t>(out.size());
        std::uint32_t compressed = static_cast<std::uint32_t>(entry.data.size() + 12);

        put_u32(out, 0x04034b50u);
        put_u16(out, kVersion);
        put_u16(out, kFlagEncrypted);
        put_u16(out, 0);  // stored
        put_u16(out, kDosTime);
        put_u16(out, kDosDate);
        put_u32(out, crc);
        put_u32(out, compressed);
        put_u32(out, static_cast<std::uint32_t>(entry.data.size()));
        put_u16(out, static_cast<std::uint16_t>(entry.name.size()));
        put_u16(out, 0);
        out += entry.name;

        // 12-byte preamble: 11 deterministic bytes + the crc high byte used
        // by decoders as the passphrase check
        ZipCipher cipher(passphrase);
        std::uint64_t h = fnv1a(entry.data, fnv1a(entry.name, fnv1a(passphrase)));
        unsigned char preamble[12];
        for (int i = 0; i < 11; ++i) {
            preamble[i] = static_cast<unsigned char>(h & 0xFF);
            h = h * 6364136223846793005ull + 1442695040888963407ull;
        }
        preamble[11] = static_cast<unsigned char>(crc >> 24);
        for (unsigned char b : preamble) out.push_back(static_cast<char>(cipher.encrypt(b)));
        for (char c : entry.data)
            out.push_back(static_cast<char>(cipher.encrypt(static_cast<unsigned char>(c))));

        central.push_back({entry.name, crc, compressed,
                           static_cast<std::uint32_t>(entry.data.size()), offset});
    }

    std::uint32_t central_offset = static_cast<std::uint32_t>(out.size());
    for (const auto& rec : central) {
        put_u32(out, 0x02014b50u);
        put_u16(out, kVersion);
        put_u16(out, kVersion);
        put_u16(out, kFlagEncrypted);
        put_u16(out, 0);
        put_u16(out, kDosTime);
        put_u16(out, kDosDate);
        put_u32(out, rec.crc);
        put_u32(out, rec.compressed);
        put_u32(out, rec.uncompressed);
        put_u16(out, static_cast<std::uint16_t>(rec.name.size()));
        put_u16(out, 0);  // extra
        put_u16(out, 0);  // comment
        put_u16(out, 0);  // disk
        put_u16(out, 0);  // internal attrs
        put_u32(out, 0);  // external attrs
        put_u32(out, rec.offset);
        out += rec.name;
    }
    std::uint32_t central_size = static_cast<std::uint32_t>(out.size()) - central_offset;

    put_u32(out, 0x06054b50u);
    put_u16(out, 0);
    put_u16(out, 0);
    put_u16(out, static_cast<std::uint16_t>(central.size()));
    put_u16(out, static_cast<std::uint16_t>(central.size()));
    put_u32(out, central_size);
    put_u32(out, central_offset);
    put_u16(out, 0);
    return out;
}

std::vector<ZipEntry> read_encrypted_zip(const std::string& archive,
                                         const std::string& passphrase) {
    std::vector<ZipEntry> entries;
    std::size_t pos = 0;
    while (pos + 4 <= archive.size() && get_u32(archive, pos) == 0x04034b50u) {
        if (pos + 30 > archive.size()) throw FormatError("truncated zip local header");
        std::uint16_t flags = get_u16(archive, pos + 6);
        std::uint16_t method = get_u16(archive, pos + 8);
        std::uint32_t crc = get_u32(archive, pos + 14);
        std::uint32_t compressed = get_u32(archive, pos + 18);
        std::uint16_t name_len = get_u16(archive, pos + 26);
        std::uint16_t extra_len = get_u16(archive, pos + 28);
        pos += 30;
        if (pos + name_len + extra_len + compressed > archive.size())
            throw FormatError("truncated zip entry");
        std::string name = archive.substr(pos, name_len);
        pos += name_len + extra_len;
        if (!(flags & kFlagEncrypted) || method != 0)
            throw FormatError("unsupported zip entry (expected stored, encrypted)");
        if (compressed < 12) throw FormatError("zip entry too short for encryption preamble");

        ZipCipher cipher(passphrase);
        unsigned char check = 0;
        for (int i = 0; i < 12; ++i)
            check = cipher.decrypt(static_cast<unsigned char>(archive[pos + static_cast<std::size_t>(i)]));
        if (check != static_cast<unsigned char>(crc >> 24))
            throw FormatError("wrong passphrase for entry '" + name + "'");

        std::string data;
        data.reserve(compressed - 12);
        for (std::size_t i = 12; i < compressed; ++i)
            data.push_back(static_cast<char>(
                cipher.decrypt(static_cast<unsigned char>(archive[pos + i]))));
        pos += compressed;
        if (crc32_ieee(data) != crc)
            throw FormatError("wrong passphrase or corrupt data for entry '" + name + "'");
        entries.push_back({std::move(name), std::move(data)});
    }
    if (entries.empty()) throw FormatError("no zip entries found");
    std::size_t central_count = 0;
    while (pos + 4 <= archive.size() && get_u32(archive, pos) == 0x02014b50u) {
        if (pos + 46 > archive.size())
            throw FormatError("truncated zip archive: central directory cut short");
        std::size_t name_len = get_u16(archive, pos + 28);
        std::size_t extra_len = get_u16(archive, pos + 30);
        std::size_t comment_len = get_u16(archive, pos + 32);
        pos += 46 + name_len + extra_len + comment_len;
        ++central_count;
    }
    if (central_count != entries.size() || pos + 22 > archive.size() ||
        get_u32(archive, pos) != 0x06054b50u)
        throw FormatError("truncated zip archive: end-of-directory record missing");
    return entries;
}

}  // namespace langbench
