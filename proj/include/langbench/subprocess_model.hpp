#pragma once

#include <iosfwd>
#include <memory>
#include <string>

#include "langbench/model.hpp"

namespace langbench {

// Adapter for models running in another process. Wire protocol, line based
// over stdin/stdout:
//   request:  the framed input symbols as one line of characters
//             (e.g. "#aabb"), one line per sequence;
//   response: one line per input symbol, holding vocabulary-size
//             tab-separated decimal probabilities in vocabulary order.
// The server resets its state between lines and exits on EOF.
std::unique_ptr<Model> make_subprocess_model(const std::string& command,
                                             const LanguageSpec& lang);

// Server side of the protocol; drives `model` until EOF on `in`.
void serve_model_stdio(Model& model, const LanguageSpec& lang, std::istream& in,
                       std::ostream& out);

}  // namespace langbench
