#pragma once

#include <string>
#include <vector>

#include "langbench/corpus.hpp"
#include "langbench/language.hpp"

namespace langbench {

// Start/end framing for language modeling: inputs = '#' + string,
// targets = string + '#', both as vocabulary indices.
struct FramedSequence {
    std::vector<int> inputs;
    std::vector<int> targets;

    std::size_t steps() const { return inputs.size(); }
};

FramedSequence frame(const Vocabulary& vocab, std::string_view s);
std::string unframe(const Vocabulary& vocab, const FramedSequence& seq);

// On-disk corpus format: one unframed string per line, '\n' endings, an empty
// line for the empty string, plus a JSON manifest sidecar at
// `<path>.manifest.json`. CRLF endings are rejected. Writes are atomic
// (temp file + rename).
void save_corpus(const Corpus& corpus, const std::string& path);
Corpus load_corpus(const std::string& path);

// Serialized forms used by both the file and archive paths.
std::string corpus_lines(const Corpus& corpus);
std::string corpus_manifest_json(const Corpus& corpus);
Corpus parse_corpus(const std::string& lines, const std::string& manifest_json,
                    const std::string& origin = "<memory>");

inline std::string manifest_path_for(const std::string& corpus_path) {
    return corpus_path + ".manifest.json";
}

// Writes a passphrase-protected zip archive holding `strings.txt` and
// `manifest.json`. Import reverses it; a wrong passphrase fails without
// producing output.
void export_protected(const Corpus& corpus, const std::string& path,
                      const std::string& passphrase);
Corpus import_protected(const std::string& path, const std::string& passphrase);

// Shared helper: atomic file write via temp file + rename.
void write_file_atomic(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace langbench
