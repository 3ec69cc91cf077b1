#include "langbench/rnn.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "langbench/corpus_io.hpp"

namespace langbench {

std::string to_string(Activation a) {
    switch (a) {
        case Activation::linear: return "linear";
        case Activation::relu: return "relu";
        case Activation::tanh: return "tanh";
    }
    return "?";
}

std::string to_string(ConnectionKind k) {
    return k == ConnectionKind::feedforward ? "ff" : "rec";
}

std::string to_string(OutputNormalization n) {
    return n == OutputNormalization::softmax ? "softmax" : "normalized-relu";
}

namespace {

Activation activation_from_string(const std::string& s, const std::string& origin) {
    if (s == "linear") return Activation::linear;
    if (s == "relu") return Activation::relu;
    if (s == "tanh") return Activation::tanh;
    throw FormatError(origin + ": unknown activation '" + s + "'");
}

}  // namespace

const HiddenUnit* RnnGenome::find_hidden(int id) const {
    for (const auto& u : hidden)
        if (u.id == id) return &u;
    return nullptr;
}

void RnnGenome::validate() const {
    if (vocab < 1 || vocab > 32)
        throw Error("genome vocabulary arity must lie in [1, 32]");
    if (static_cast<int>(output_bias.size()) != vocab)
        throw Error("genome must carry one output bias per vocabulary symbol");
    std::map<int, const HiddenUnit*> units;
    for (const auto& u : hidden) {
        if (u.id < 2 * vocab)
            throw Error("hidden unit id " + std::to_string(u.id) +
                        " collides with input/output ids");
        if (!units.emplace(u.id, &u).second)
            throw Error("duplicate hidden unit id " + std::to_string(u.id));
    }
    auto known = [&](int id) { return is_input(id) || is_output(id) || units.count(id); };
    for (const auto& c : connections) {
        if (!known(c.source))
            throw Error("connection references unknown unit id " + std::to_string(c.source));
        if (!known(c.target))
            throw Error("connection references unknown unit id " + std::to_string(c.target));
        if (is_input(c.target))
            throw Error("connection targets input unit " + std::to_string(c.target));
        if (c.kind == ConnectionKind::feedforward && is_output(c.source))
            throw Error("feedforward connection from output unit " + std::to_string(c.source) +
                        " is not allowed");
    }

    // cycle check over feedforward edges between hidden units
    std::map<int, std::vector<int>> ff_out;
    for (const auto& c : connections)
        if (c.kind == ConnectionKind::feedforward && units.count(c.source) && units.count(c.target))
            ff_out[c.source].push_back(c.target);
    std::map<int, int> state;  // 0 new, 1 active, 2 done
    std::vector<int> path;
    auto dfs = [&](auto&& self, int id) -> bool {
        state[id] = 1;
        path.push_back(id);
        for (int next : ff_out[id]) {
            if (state[next] == 1) {
                auto at = std::find(path.begin(), path.end(), next);
                std::string cycle;
                for (auto it = at; it != path.end(); ++it)
                    cycle += "h" + std::to_string(*it - 2 * vocab) + " -> ";
                cycle += "h" + std::to_string(next - 2 * vocab);
                throw Error("feedforward connections form a cycle: " + cycle);
            }
            if (state[next] == 0 && self(self, next)) return true;
        }
        path.pop_back();
        state[id] = 2;
        return false;
    };
    for (const auto& u : hidden)
        if (state[u.id] == 0) dfs(dfs, u.id);
}

RnnGenome empty_genome(int vocab, OutputNormalization normalization) {
    RnnGenome g;
    g.vocab = vocab;
    g.output_bias.assign(static_cast<std::size_t>(vocab), Rational());
    g.normalization = normalization;
    return g;
}

namespace {

// Flattened evaluation plan. Activation slots: [0, V) inputs, [V, 2V)
// outputs (normalized probabilities), [2V, 2V+H) hidden in topological order.
struct CompiledNet {
    int vocab = 0;
    OutputNormalization normalization = OutputNormalization::softmax;
    struct Incoming {
        int slot;
        double weight;
        bool recurrent;
    };
    struct Node {
        Activation activation;
        double bias;
        std::vector<Incoming> incoming;
    };
    std::vector<Node> hidden;        // topological order
    std::vector<Node> outputs;       // size vocab
    std::vector<int> hidden_order;   // index into genome.hidden per plan node
    std::size_t slots = 0;

    explicit CompiledNet(const RnnGenome& g) {
        g.validate();
        vocab = g.vocab;
        normalization = g.normalization;
        slots = static_cast<std::size_t>(2 * vocab + static_cast<int>(g.hidden.size()));

        // topological order via repeated scans (genomes are small)
        std::map<int, std::vector<int>> ff_in;
        for (const auto& c : g.connections)
            if (c.kind == ConnectionKind::feedforward && g.find_hidden(c.target) &&
                g.find_hidden(c.source))
                ff_in[c.target].push_back(c.source);
        std::map<int, int> slot_of;
        for (int i = 0; i < vocab; ++i) slot_of[i] = i;
        for (int i = vocab; i < 2 * vocab; ++i) slot_of[i] = i;
        std::vector<bool> placed(g.hidden.size(), false);
        std::size_t remaining = g.hidden.size();
        while (remaining > 0) {
            bool progress = false;
            for (std::size_t i = 0; i < g.hidden.size(); ++i) {
                if (placed[i]) continue;
                bool ready = true;
                for (int src : ff_in[g.hidden[i].id])
                    if (!slot_of.count(src)) ready = false;
                if (!ready) continue;
                slot_of[g.hidden[i].id] = static_cast<int>(2 * vocab + hidden_order.size());
                hidden_order.push_back(static_cast<int>(i));
                placed[i] = true;
                --remaining;
                progress = true;
            }
            if (!progress) throw Error("feedforward connections form a cycle");
        }

        hidden.resize(g.hidden.size());
        for (std::size_t k = 0; k < hidden_order.size(); ++k) {
            const auto& u = g.hidden[static_cast<std::size_t>(hidden_order[k])];
            hidden[k].activation = u.activation;
            hidden[k].bias = u.bias.value();
        }
        outputs.resize(static_cast<std::size_t>(vocab));
        for (int i = 0; i < vocab; ++i) {
            outputs[static_cast<std::size_t>(i)].activation = Activation::linear;
            outputs[static_cast<std::size_t>(i)].bias =
                g.output_bias[static_cast<std::size_t>(i)].value();
        }
        for (const auto& c : g.connections) {
            Incoming in{slot_of.at(c.source), c.weight.value(),
                        c.kind == ConnectionKind::recurrent};
            if (g.is_output(c.target))
                outputs[static_cast<std::size_t>(c.target - vocab)].incoming.push_back(in);
            else
                hidden[static_cast<std::size_t>(slot_of.at(c.target) - 2 * vocab)]
                    .incoming.push_back(in);
        }
    }
};

double apply_activation(Activation a, double x) {
    switch (a) {
        case Activation::linear: return x;
        case Activation::relu: return x > 0.0 ? x : 0.0;
        case Activation::tanh: return std::tanh(x);
    }
    return x;
}

class GenomeModel final : public StepModel {
public:
    GenomeModel(const RnnGenome& genome, std::string name)
        : genome_(genome), net_(genome), name_(std::move(name)) {
        cur_.assign(net_.slots, 0.0);
        prev_.assign(net_.slots, 0.0);
        probs_.assign(static_cast<std::size_t>(net_.vocab), 0.0);
        reset();
    }

    int vocab_size() const override { return net_.vocab; }
    std::string name() const override { return name_; }

    std::unique_ptr<Model> clone() const override {
        return std::make_unique<GenomeModel>(genome_, name_);
    }

    void reset() override {
        std::fill(cur_.begin(), cur_.end(), 0.0);
        std::fill(prev_.begin(), prev_.end(), 0.0);
    }

    const double* step(int symbol_index) override {
        const int v = net_.vocab;
        std::fill(cur_.begin(), cur_.begin() + v, 0.0);
        cur_[static_cast<std::size_t>(symbol_index)] = 1.0;

        for (std::size_t k = 0; k < net_.hidden.size(); ++k) {
            const auto& node = net_.hidden[k];
            double sum = node.bias;
            for (const auto& in : node.incoming)
                sum += in.weight * (in.recurrent ? prev_[static_cast<std::size_t>(in.slot)]
                                                 : cur_[static_cast<std::size_t>(in.slot)]);
            double act = apply_activation(node.activation, sum);
            if (!std::isfinite(act))
                throw Error("non-finite activation in hidden unit of " + name_);
            cur_[static_cast<std::size_t>(2 * v) + k] = act;
        }

        double pre[64];
        for (int i = 0; i < v; ++i) {
            const auto& node = net_.outputs[static_cast<std::size_t>(i)];
            double sum = node.bias;
            for (const auto& in : node.incoming)
                sum += in.weight * (in.recurrent ? prev_[static_cast<std::size_t>(in.slot)]
                                                 : cur_[static_cast<std::size_t>(in.slot)]);
            if (!std::isfinite(sum)) throw Error("non-finite output pre-activation in " + name_);
            pre[i] = sum;
        }

        if (net_.normalization == OutputNormalization::softmax) {
            double peak = pre[0];
            for (int i = 1; i < v; ++i) peak = std::max(peak, pre[i]);
            double total = 0.0;
            for (int i = 0; i < v; ++i) {
                probs_[static_cast<std::size_t>(i)] = std::exp(pre[i] - peak);
                total += probs_[static_cast<std::size_t>(i)];
            }
            for (int i = 0; i < v; ++i) probs_[static_cast<std::size_t>(i)] /= total;
        } else {
            double total = 0.0;
            for (int i = 0; i < v; ++i) {
                double r = pre[i] > 0.0 ? pre[i] : 0.0;
                probs_[static_cast<std::size_t>(i)] = r;
                total += r;
            }
            if (total == 0.0) {
                for (int i = 0; i < v; ++i)
                    probs_[static_cast<std::size_t>(i)] = 1.0 / static_cast<double>(v);
            } else {
                for (int i = 0; i < v; ++i) probs_[static_cast<std::size_t>(i)] /= total;
            }
        }
        for (int i = 0; i < v; ++i) {
            if (!std::isfinite(probs_[static_cast<std::size_t>(i)]))
                throw Error("non-finite output probability in " + name_);
            cur_[static_cast<std::size_t>(v + i)] = probs_[static_cast<std::size_t>(i)];
        }
        std::swap(prev_, cur_);
        return probs_.data();
    }

    // hidden activations after the last step, in genome.hidden order
    std::vector<double> hidden_values() const {
        std::vector<double> out(net_.hidden.size(), 0.0);
        for (std::size_t k = 0; k < net_.hidden_order.size(); ++k)
            out[static_cast<std::size_t>(net_.hidden_order[k])] =
                prev_[static_cast<std::size_t>(2 * net_.vocab) + k];
        return out;
    }

private:
    RnnGenome genome_;
    CompiledNet net_;
    std::string name_;
    std::vector<double> cur_, prev_, probs_;
};

}  // namespace

void StepModel::run(const FramedSequence& framed, ProbMatrix& out) {
    out.resize(framed.steps(), vocab_size());
    reset();
    for (std::size_t t = 0; t < framed.steps(); ++t) {
        const double* p = step(framed.inputs[t]);
        std::copy(p, p + vocab_size(), out.row(t));
    }
}

std::unique_ptr<Model> make_genome_model(const RnnGenome& genome, std::string name) {
    return std::make_unique<GenomeModel>(genome, std::move(name));
}

std::vector<std::vector<double>> forward(const RnnGenome& genome, const FramedSequence& framed) {
    GenomeModel model(genome, "genome");
    std::vector<std::vector<double>> out;
    out.reserve(framed.steps());
    for (std::size_t t = 0; t < framed.steps(); ++t) {
        const double* p = model.step(framed.inputs[t]);
        out.emplace_back(p, p + genome.vocab);
    }
    return out;
}

std::vector<std::vector<double>> forward_hidden_trace(const RnnGenome& genome,
                                                      const FramedSequence& framed) {
    GenomeModel model(genome, "genome");
    std::vector<std::vector<double>> out;
    out.reserve(framed.steps());
    for (std::size_t t = 0; t < framed.steps(); ++t) {
        model.step(framed.inputs[t]);
        out.push_back(model.hidden_values());
    }
    return out;
}

std::string genome_to_text(const RnnGenome& genome) {
    std::ostringstream out;
    out << "mrnn 1\n";
    out << "arity " << genome.vocab << "\n";
    out << "normalization " << to_string(genome.normalization) << "\n";
    for (const auto& u : genome.hidden)
        out << "unit h" << (u.id - 2 * genome.vocab) << " " << to_string(u.activation) << " "
            << u.bias.str() << "\n";
    for (int i = 0; i < genome.vocab; ++i)
        if (genome.output_bias[static_cast<std::size_t>(i)].num != 0)
            out << "outbias o" << i << " "
                << genome.output_bias[static_cast<std::size_t>(i)].str() << "\n";
    for (const auto& c : genome.connections) {
        auto node_name = [&](int id) -> std::string {
            if (genome.is_input(id)) return "i" + std::to_string(id);
            if (genome.is_output(id)) return "o" + std::to_string(id - genome.vocab);
            return "h" + std::to_string(id - 2 * genome.vocab);
        };
        out << "conn " << to_string(c.kind) << " " << node_name(c.source) << " "
            << node_name(c.target) << " " << c.weight.str() << "\n";
    }
    return out.str();
}

namespace {

int parse_node(const std::string& token, const RnnGenome& g, const std::string& origin,
               int lineno) {
    auto fail = [&](const std::string& msg) -> int {
        throw FormatError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };
    if (token.size() < 2) return fail("bad node reference '" + token + "'");
    int k = 0;
    try {
        k = std::stoi(token.substr(1));
    } catch (const std::exception&) {
        return fail("bad node reference '" + token + "'");
    }
    if (token[0] == 'i') {
        if (k < 0 || k >= g.vocab) return fail("input index out of range in '" + token + "'");
        return k;
    }
    if (token[0] == 'o') {
        if (k < 0 || k >= g.vocab) return fail("output index out of range in '" + token + "'");
        return g.vocab + k;
    }
    if (token[0] == 'h') {
        int id = 2 * g.vocab + k;
        if (!g.find_hidden(id)) return fail("unknown unit id '" + token + "'");
        return id;
    }
    return fail("bad node reference '" + token + "'");
}

}  // namespace

RnnGenome genome_from_text(const std::string& text, const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw FormatError(origin + ":" + std::to_string(lineno) + ": " + msg);
    };

    RnnGenome g;
    bool saw_header = false, saw_arity = false;
    std::vector<std::array<std::string, 4>> deferred_conns;
    std::vector<int> conn_lines;

    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key) || key[0] == ';') continue;
        if (key == "mrnn") {
            std::string version;
            ls >> version;
            if (version != "1") fail("unsupported genome format version '" + version + "'");
            saw_header = true;
        } else if (key == "arity") {
            int v = 0;
            if (!(ls >> v) || v < 1) fail("bad arity");
            g.vocab = v;
            g.output_bias.assign(static_cast<std::size_t>(v), Rational());
            saw_arity = true;
        } else if (key == "normalization") {
            std::string n;
            ls >> n;
            if (n == "softmax")
                g.normalization = OutputNormalization::softmax;
            else if (n == "normalized-relu")
                g.normalization = OutputNormalization::normalized_relu;
            else
                fail("unknown normalization '" + n + "'");
        } else if (key == "unit") {
            if (!saw_arity) fail("'unit' before 'arity'");
            std::string name, act, bias;
            if (!(ls >> name >> act >> bias) || name[0] != 'h') fail("bad unit line");
            int k = 0;
            try {
                k = std::stoi(name.substr(1));
            } catch (const std::exception&) {
                fail("bad unit name '" + name + "'");
            }
            g.hidden.push_back(
                {2 * g.vocab + k, activation_from_string(act, origin), Rational::parse(bias)});
        } else if (key == "outbias") {
            if (!saw_arity) fail("'outbias' before 'arity'");
            std::string name, bias;
            if (!(ls >> name >> bias) || name[0] != 'o') fail("bad outbias line");
            int k = std::stoi(name.substr(1));
            if (k < 0 || k >= g.vocab) fail("output index out of range");
            g.output_bias[static_cast<std::size_t>(k)] = Rational::parse(bias);
        } else if (key == "conn") {
            std::string kind, src, tgt, weight;
            if (!(ls >> kind >> src >> tgt >> weight)) fail("bad conn line");
            deferred_conns.push_back({kind, src, tgt, weight});
            conn_lines.push_back(lineno);
        } else {
            fail("unknown directive '" + key + "'");
        }
    }
    lineno = 0;
    if (!saw_header) fail("missing 'mrnn 1' header");
    if (!saw_arity) fail("missing 'arity'");

    for (std::size_t i = 0; i < deferred_conns.size(); ++i) {
        const auto& [kind, src, tgt, weight] = deferred_conns[i];
        lineno = conn_lines[i];
        Connection c;
        if (kind == "ff")
            c.kind = ConnectionKind::feedforward;
        else if (kind == "rec")
            c.kind = ConnectionKind::recurrent;
        else
            fail("unknown connection kind '" + kind + "'");
        c.source = parse_node(src, g, origin, lineno);
        c.target = parse_node(tgt, g, origin, lineno);
        c.weight = Rational::parse(weight);
        g.connections.push_back(c);
    }

    try {
        g.validate();
    } catch (const Error& e) {
        throw FormatError(origin + ": " + e.what());
    }
    return g;
}

void save_genome(const RnnGenome& genome, const std::string& path) {
    genome.validate();
    write_file_atomic(path, genome_to_text(genome));
}

RnnGenome load_genome(const std::string& path) {
    return genome_from_text(read_file(path), path);
}

}  // namespace langbench
