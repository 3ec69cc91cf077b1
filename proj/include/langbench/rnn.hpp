#pragma once

#include <memory>
#include <string>
#include <vector>

#include "langbench/model.hpp"
#include "langbench/rational.hpp"

namespace langbench {

enum class Activation { linear, relu, tanh };
enum class ConnectionKind { feedforward, recurrent };
enum class OutputNormalization { softmax, normalized_relu };

std::string to_string(Activation a);
std::string to_string(ConnectionKind k);
std::string to_string(OutputNormalization n);

// Node ids: inputs are 0..V-1, outputs V..2V-1, hidden units carry arbitrary
// unique ids >= 2V.
struct HiddenUnit {
    int id = 0;
    Activation activation = Activation::linear;
    Rational bias;

    bool operator==(const HiddenUnit&) const = default;
};

struct Connection {
    int source = 0;
    int target = 0;
    Rational weight;
    ConnectionKind kind = ConnectionKind::feedforward;

    bool operator==(const Connection&) const = default;
};

// Minimal recurrent network. Feedforward connections form a DAG evaluated in
// topological order within a step; recurrent connections read the previous
// step's activation of their source (zero at the first step). Output
// pre-activations are normalized by softmax or by relu followed by division
// by the sum (all-zero mapped to the uniform distribution).
struct RnnGenome {
    int vocab = 0;  // input arity == output arity
    std::vector<HiddenUnit> hidden;
    std::vector<Connection> connections;
    std::vector<Rational> output_bias;  // one per output
    OutputNormalization normalization = OutputNormalization::softmax;

    bool is_input(int id) const { return id >= 0 && id < vocab; }
    bool is_output(int id) const { return id >= vocab && id < 2 * vocab; }
    const HiddenUnit* find_hidden(int id) const;

    // Structural checks; throws with a description (cycles are spelled out).
    void validate() const;

    bool operator==(const RnnGenome&) const = default;
};

// Minimal genome: no hidden units, no connections, zero biases. With softmax
// normalization it emits the uniform distribution at every step.
RnnGenome empty_genome(int vocab,
                       OutputNormalization normalization = OutputNormalization::softmax);

// Step-wise evaluator for a genome. Construction validates and compiles the
// genome; evaluation throws on non-finite activations.
std::unique_ptr<Model> make_genome_model(const RnnGenome& genome,
                                         std::string name = "genome");

// One distribution per framed input symbol.
std::vector<std::vector<double>> forward(const RnnGenome& genome, const FramedSequence& framed);

// Hidden activations per step, in the order of genome.hidden. Test hook for
// inspecting counter traces.
std::vector<std::vector<double>> forward_hidden_trace(const RnnGenome& genome,
                                                      const FramedSequence& framed);

// Versioned text format (see docs/formats.md); round-trip identity.
std::string genome_to_text(const RnnGenome& genome);
RnnGenome genome_from_text(const std::string& text, const std::string& origin = "<string>");
void save_genome(const RnnGenome& genome, const std::string& path);
RnnGenome load_genome(const std::string& path);

}  // namespace langbench
