#include "langbench/mdl.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "langbench/corpus_io.hpp"
#include "langbench/model.hpp"

namespace langbench {

unsigned elias_gamma_bits(unsigned long long n) {
    if (n == 0) throw Error("elias-gamma is defined for positive integers");
    unsigned width = 0;
    while (n >> (width + 1)) ++width;
    return 2 * width + 1;
}

unsigned weight_bits(const Rational& w) {
    unsigned long long num = w.num < 0 ? static_cast<unsigned long long>(-w.num)
                                       : static_cast<unsigned long long>(w.num);
    return 1 + elias_gamma_bits(num + 1) + elias_gamma_bits(static_cast<unsigned long long>(w.den));
}

namespace {

// Structural signature of a unit's neighborhood for one refinement round.
// Inputs/outputs keep their fixed indices; hidden units contribute their
// color from the previous round.
using Edge = std::tuple<int, int, long long, long long, int>;  // (endpoint class, kind, num, den, dir)

struct UnitKey {
    int activation;
    long long bias_num, bias_den;
    std::vector<Edge> edges;

    bool operator<(const UnitKey& o) const {
        return std::tie(activation, bias_num, bias_den, edges) <
               std::tie(o.activation, o.bias_num, o.bias_den, o.edges);
    }
    bool operator==(const UnitKey& o) const {
        return std::tie(activation, bias_num, bias_den, edges) ==
               std::tie(o.activation, o.bias_num, o.bias_den, o.edges);
    }
};

}  // namespace

RnnGenome canonicalize(const RnnGenome& genome) {
    genome.validate();
    const int v = genome.vocab;
    const std::size_t h = genome.hidden.size();
    if (h == 0) {
        RnnGenome out = genome;
        std::sort(out.connections.begin(), out.connections.end(),
                  [](const Connection& a, const Connection& b) {
                      return std::tie(a.kind, a.source, a.target, a.weight.num, a.weight.den) <
                             std::tie(b.kind, b.source, b.target, b.weight.num, b.weight.den);
                  });
        return out;
    }

    std::map<int, std::size_t> pos;  // hidden id -> index into genome.hidden
    for (std::size_t i = 0; i < h; ++i) pos[genome.hidden[i].id] = i;

    // color refinement: start from intrinsic properties, then fold in the
    // colors of neighbors until stable (or h rounds)
    std::vector<int> color(h, 0);
    auto endpoint_class = [&](int id, const std::vector<int>& colors) {
        if (genome.is_input(id)) return id;                 // 0 .. v-1
        if (genome.is_output(id)) return id;                // v .. 2v-1
        return 2 * v + colors[pos.at(id)];                  // hidden: color class
    };
    for (std::size_t round = 0; round <= h; ++round) {
        std::vector<UnitKey> keys(h);
        for (std::size_t i = 0; i < h; ++i) {
            const auto& u = genome.hidden[i];
            keys[i].activation = static_cast<int>(u.activation);
            keys[i].bias_num = u.bias.num;
            keys[i].bias_den = u.bias.den;
            for (const auto& c : genome.connections) {
                int kind = c.kind == ConnectionKind::recurrent ? 1 : 0;
                if (c.target == u.id)
                    keys[i].edges.emplace_back(endpoint_class(c.source, color), kind,
                                               c.weight.num, c.weight.den, 0);
                if (c.source == u.id)
                    keys[i].edges.emplace_back(endpoint_class(c.target, color), kind,
                                               c.weight.num, c.weight.den, 1);
            }
            std::sort(keys[i].edges.begin(), keys[i].edges.end());
        }
        std::vector<std::size_t> order(h);
        for (std::size_t i = 0; i < h; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (keys[a] == keys[b]) return color[a] < color[b];
            return keys[a] < keys[b];
        });
        std::vector<int> next(h, 0);
        int rank = 0;
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i > 0 && !(keys[order[i - 1]] == keys[order[i]] &&
                           color[order[i - 1]] == color[order[i]]))
                ++rank;
            next[order[i]] = rank;
        }
        if (next == color) break;
        color = next;
    }

    // final order: by color, ties by original position (stable)
    std::vector<std::size_t> order(h);
    for (std::size_t i = 0; i < h; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return color[a] < color[b]; });

    RnnGenome out = genome;
    std::map<int, int> rename;
    for (std::size_t k = 0; k < h; ++k) {
        out.hidden[k] = genome.hidden[order[k]];
        rename[genome.hidden[order[k]].id] = 2 * v + static_cast<int>(k);
        out.hidden[k].id = 2 * v + static_cast<int>(k);
    }
    for (auto& c : out.connections) {
        if (rename.count(c.source)) c.source = rename.at(c.source);
        if (rename.count(c.target)) c.target = rename.at(c.target);
    }
    std::sort(out.connections.begin(), out.connections.end(),
              [](const Connection& a, const Connection& b) {
                  return std::tie(a.kind, a.source, a.target, a.weight.num, a.weight.den) <
                         std::tie(b.kind, b.source, b.target, b.weight.num, b.weight.den);
              });
    return out;
}

double encoding_length(const RnnGenome& genome) {
    RnnGenome g = canonicalize(genome);
    unsigned long long bits = 0;
    bits += elias_gamma_bits(static_cast<unsigned long long>(g.vocab));  // arity
    bits += 1;                                                           // normalization mode
    for (const auto& b : g.output_bias) bits += weight_bits(b);
    for (const auto& u : g.hidden) bits += 1 + 2 + weight_bits(u.bias);
    bits += 1;  // unit list terminator
    for (const auto& c : g.connections)
        bits += 1 + 1 + elias_gamma_bits(static_cast<unsigned long long>(c.source) + 1) +
                elias_gamma_bits(static_cast<unsigned long long>(c.target) + 1) +
                weight_bits(c.weight);
    bits += 1;  // connection list terminator
    return static_cast<double>(bits);
}

double data_cost(const RnnGenome& genome, const LanguageSpec& lang, const Corpus& corpus) {
    if (genome.vocab != lang.vocabulary.size())
        throw UsageError("genome arity does not match the language vocabulary");
    auto model = make_genome_model(genome);
    ProbMatrix probs;
    double total = 0.0;
    for (const auto& s : corpus.strings) {
        FramedSequence framed = frame(lang.vocabulary, s);
        model->run(framed, probs);
        double string_bits = 0.0;
        for (std::size_t t = 0; t < framed.steps(); ++t) {
            double p = probs.row(t)[framed.targets[t]];
            if (p <= 0.0) return std::numeric_limits<double>::infinity();
            string_bits -= std::log2(p);
        }
        total += string_bits;
    }
    return total;
}

MdlScore mdl_score(const RnnGenome& genome, const LanguageSpec& lang, const Corpus& corpus) {
    return {encoding_length(genome), data_cost(genome, lang, corpus)};
}

}  // namespace langbench
