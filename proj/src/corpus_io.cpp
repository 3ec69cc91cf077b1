#include "langbench/corpus_io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "langbench/oracle.hpp"
#include "langbench/zip_archive.hpp"

namespace langbench {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr int kCorpusFormatVersion = 1;

FramedSequence frame(const Vocabulary& vocab, std::string_view s) {
    FramedSequence seq;
    seq.inputs.reserve(s.size() + 1);
    seq.targets.reserve(s.size() + 1);
    seq.inputs.push_back(0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        int idx = vocab.index_of(s[i]);
        if (idx == 0)
            throw Error("framing symbol at position " + std::to_string(i) +
                        " is not allowed inside a string");
        if (idx < 0)
            throw Error(std::string("symbol '") + s[i] + "' at position " + std::to_string(i) +
                        " is not in the vocabulary");
        seq.inputs.push_back(idx);
        seq.targets.push_back(idx);
    }
    seq.targets.push_back(0);
    return seq;
}

std::string unframe(const Vocabulary& vocab, const FramedSequence& seq) {
    std::string out;
    out.reserve(seq.inputs.size() - 1);
    for (std::size_t i = 1; i < seq.inputs.size(); ++i)
        out.push_back(vocab.symbol(seq.inputs[i]));
    return out;
}

std::string corpus_lines(const Corpus& corpus) {
    std::string out;
    std::size_t total = 0;
    for (const auto& s : corpus.strings) total += s.size() + 1;
    out.reserve(total);
    for (const auto& s : corpus.strings) {
        out += s;
        out += '\n';
    }
    return out;
}

namespace {

std::string fnv1a_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    char buf[19];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool is_builtin_id(const std::string& id) {
    for (const auto& known : builtin_language_ids())
        if (known == id) return true;
    return false;
}

}  // namespace

std::string corpus_manifest_json(const Corpus& corpus) {
    json m;
    m["format_version"] = kCorpusFormatVersion;
    m["language"] = corpus.language_id;
    m["role"] = to_string(corpus.role);
    m["seed"] = corpus.meta.seed;
    m["prior"] = corpus.meta.prior;
    m["size"] = corpus.strings.size();
    m["requested_size"] = corpus.meta.requested_size;
    m["max_length"] = corpus.meta.max_length;
    if (corpus.meta.frontier)
        m["frontier"] = *corpus.meta.frontier;
    else
        m["frontier"] = nullptr;
    if (is_builtin_id(corpus.language_id)) {
        double prior = corpus.meta.prior > 0.0 && corpus.meta.prior < 1.0 ? corpus.meta.prior : 0.3;
        m["vocabulary"] = builtin_language(corpus.language_id, prior).vocabulary.payload();
    }
    m["checksum_fnv1a64"] = fnv1a_hex(corpus_lines(corpus));
    return m.dump(2) + "\n";
}

Corpus parse_corpus(const std::string& lines, const std::string& manifest_json,
                    const std::string& origin) {
    json m;
    try {
        m = json::parse(manifest_json);
    } catch (const json::exception& e) {
        throw FormatError(origin + ": cannot parse manifest: " + e.what());
    }
    if (!m.contains("format_version") || !m["format_version"].is_number_integer())
        throw FormatError(origin + ": manifest is missing format_version");
    if (m["format_version"].get<int>() != kCorpusFormatVersion)
        throw FormatError(origin + ": unsupported corpus format version " +
                          m["format_version"].dump());
    if (m.contains("checksum_fnv1a64") &&
        m["checksum_fnv1a64"].get<std::string>() != fnv1a_hex(lines))
        throw FormatError(origin + ": checksum mismatch between corpus and manifest");

    Corpus corpus;
    corpus.language_id = m.at("language").get<std::string>();
    corpus.role = corpus_role_from_string(m.at("role").get<std::string>());
    corpus.meta.seed = m.value("seed", std::uint64_t{0});
    corpus.meta.prior = m.value("prior", 0.0);
    corpus.meta.requested_size = m.value("requested_size", std::size_t{0});
    if (m.contains("frontier") && !m["frontier"].is_null())
        corpus.meta.frontier = m["frontier"].get<long long>();

    std::size_t pos = 0;
    int lineno = 1;
    while (pos < lines.size()) {
        std::size_t nl = lines.find('\n', pos);
        if (nl == std::string::npos)
            throw FormatError(origin + ":" + std::to_string(lineno) +
                              ": missing trailing newline");
        std::string s = lines.substr(pos, nl - pos);
        if (s.find('\r') != std::string::npos)
            throw FormatError(origin + ":" + std::to_string(lineno) +
                              ": CRLF line endings are not supported");
        corpus.strings.push_back(std::move(s));
        pos = nl + 1;
        ++lineno;
    }

    // validate symbols, and membership when the language is built in
    if (is_builtin_id(corpus.language_id)) {
        double prior = corpus.meta.prior > 0.0 && corpus.meta.prior < 1.0 ? corpus.meta.prior : 0.3;
        LanguageSpec lang = builtin_language(corpus.language_id, prior);
        for (std::size_t i = 0; i < corpus.strings.size(); ++i) {
            const std::string& s = corpus.strings[i];
            for (std::size_t col = 0; col < s.size(); ++col)
                if (!lang.vocabulary.contains(s[col]) || s[col] == Vocabulary::kFraming)
                    throw FormatError(origin + ":" + std::to_string(i + 1) + ":" +
                                      std::to_string(col + 1) + ": symbol '" + s[col] +
                                      "' is not in the vocabulary of " + corpus.language_id);
            if (!membership(lang, s))
                throw FormatError(origin + ":" + std::to_string(i + 1) + ": string is not a member of " +
                                  corpus.language_id);
        }
    } else if (m.contains("vocabulary")) {
        Vocabulary vocab(m["vocabulary"].get<std::string>());
        for (std::size_t i = 0; i < corpus.strings.size(); ++i) {
            const std::string& s = corpus.strings[i];
            for (std::size_t col = 0; col < s.size(); ++col)
                if (!vocab.contains(s[col]) || s[col] == Vocabulary::kFraming)
                    throw FormatError(origin + ":" + std::to_string(i + 1) + ":" +
                                      std::to_string(col + 1) + ": symbol '" + s[col] +
                                      "' is not in the vocabulary");
        }
    }

    for (const auto& s : corpus.strings)
        corpus.meta.max_length = std::max(corpus.meta.max_length, s.size());
    return corpus;
}

void write_file_atomic(const std::string& path, const std::string& contents) {
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        if (!out) throw Error("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void save_corpus(const Corpus& corpus, const std::string& path) {
    write_file_atomic(path, corpus_lines(corpus));
    write_file_atomic(manifest_path_for(path), corpus_manifest_json(corpus));
}

Corpus load_corpus(const std::string& path) {
    return parse_corpus(read_file(path), read_file(manifest_path_for(path)), path);
}

void export_protected(const Corpus& corpus, const std::string& path,
                      const std::string& passphrase) {
    std::vector<ZipEntry> entries = {{"strings.txt", corpus_lines(corpus)},
                                     {"manifest.json", corpus_manifest_json(corpus)}};
    write_file_atomic(path, write_encrypted_zip(entries, passphrase));
}

Corpus import_protected(const std::string& path, const std::string& passphrase) {
    auto entries = read_encrypted_zip(read_file(path), passphrase);
    const std::string *lines = nullptr, *manifest = nullptr;
    for (const auto& e : entries) {
        if (e.name == "strings.txt") lines = &e.data;
        if (e.name == "manifest.json") manifest = &e.data;
    }
    if (!lines || !manifest)
        throw FormatError(path + ": archive does not contain strings.txt and manifest.json");
    return parse_corpus(*lines, *manifest, path);
}

}  // namespace langbench
