#include "langbench/evolve.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <thread>

#include <json.hpp>

#include "langbench/corpus_io.hpp"
#include "langbench/rng.hpp"

namespace langbench {

using nlohmann::json;

void EvolutionConfig::validate() const {
    if (population_size < 1) throw UsageError("population size must be at least 1");
    if (island_size < 1 || population_size % island_size != 0)
        throw UsageError("island size must divide the population size");
    if (tournament_size < 2) throw UsageError("tournament size must be at least 2");
    if (generations < 1) throw UsageError("generation count must be at least 1");
    if (!(elite_ratio >= 0.0 && elite_ratio < 1.0)) throw UsageError("elite ratio must lie in [0,1)");
    if (migration_interval_generations < 0 || migration_interval_seconds < 0 ||
        stagnation_seconds < 0)
        throw UsageError("intervals must be non-negative");
    if (mutation_weights.total() <= 0.0) throw UsageError("mutation weights must not all be zero");
}

namespace {

constexpr std::uint64_t kIdStride = 1ull << 40;  // per-island id spaces

struct Individual {
    RnnGenome genome;
    MdlScore score;
    std::uint64_t id = 0;
};

// Lower is better; infinite data cost always loses; ties break on
// grammar bits, then on genome id.
bool better(const Individual& a, const Individual& b) {
    if (a.score.finite() != b.score.finite()) return a.score.finite();
    if (a.score.finite() && a.score.total() != b.score.total())
        return a.score.total() < b.score.total();
    if (!a.score.finite() && a.score.grammar_bits != b.score.grammar_bits)
        return a.score.grammar_bits < b.score.grammar_bits;
    if (a.score.finite() && a.score.grammar_bits != b.score.grammar_bits)
        return a.score.grammar_bits < b.score.grammar_bits;
    return a.id < b.id;
}

Rational random_rational(Rng& rng) {
    long long num = static_cast<long long>(rng.below(33)) - 16;  // [-16, 16]
    long long den = static_cast<long long>(rng.below(8)) + 1;    // [1, 8]
    if (num == 0) num = 1;
    return Rational(num, den);
}

Activation random_activation(Rng& rng) {
    switch (rng.below(3)) {
        case 0: return Activation::linear;
        case 1: return Activation::relu;
        default: return Activation::tanh;
    }
}

bool genome_valid(const RnnGenome& g) {
    try {
        g.validate();
        return true;
    } catch (const Error&) {
        return false;
    }
}

// Weight slots: connection weights, hidden biases, output biases.
std::size_t weight_slot_count(const RnnGenome& g) {
    return g.connections.size() + g.hidden.size() + g.output_bias.size();
}

Rational* weight_slot(RnnGenome& g, std::size_t slot) {
    if (slot < g.connections.size()) return &g.connections[slot].weight;
    slot -= g.connections.size();
    if (slot < g.hidden.size()) return &g.hidden[slot].bias;
    slot -= g.hidden.size();
    return &g.output_bias[slot];
}

void clamp_weight(Rational& w, Rng& rng) {
    if (std::llabs(w.num) > (1ll << 24) || w.den > (1ll << 12)) w = random_rational(rng);
}

// Applies one mutation drawn from the weighted operator set. Operators that
// would produce an invalid genome fall back to leaving it unchanged.
void mutate(RnnGenome& g, const MutationWeights& weights, Rng& rng) {
    const int v = g.vocab;
    auto any_source = [&](bool include_outputs) {
        // inputs, hidden, and optionally outputs
        std::size_t n = static_cast<std::size_t>(v) + g.hidden.size() +
                        (include_outputs ? static_cast<std::size_t>(v) : 0);
        std::size_t k = rng.below(n);
        if (k < static_cast<std::size_t>(v)) return static_cast<int>(k);
        k -= static_cast<std::size_t>(v);
        if (k < g.hidden.size()) return g.hidden[k].id;
        return v + static_cast<int>(k - g.hidden.size());
    };
    auto any_target = [&]() {
        std::size_t n = static_cast<std::size_t>(v) + g.hidden.size();
        std::size_t k = rng.below(n);
        if (k < static_cast<std::size_t>(v)) return v + static_cast<int>(k);  // output
        return g.hidden[k - static_cast<std::size_t>(v)].id;
    };

    double pick = rng.uniform01() * weights.total();
    auto take = [&](double w) {
        if (pick < w) return true;
        pick -= w;
        return false;
    };

    if (take(weights.add_unit)) {
        int suffix = 0;
        for (const auto& u : g.hidden) suffix = std::max(suffix, u.id - 2 * v + 1);
        HiddenUnit unit{2 * v + suffix, random_activation(rng), Rational(0)};
        Connection in{any_source(false), unit.id, random_rational(rng),
                      ConnectionKind::feedforward};
        Connection out{unit.id, any_target(), random_rational(rng), ConnectionKind::feedforward};
        RnnGenome backup = g;
        g.hidden.push_back(unit);
        g.connections.push_back(in);
        g.connections.push_back(out);
        if (!genome_valid(g)) g = std::move(backup);
        return;
    }
    if (take(weights.remove_unit)) {
        if (g.hidden.empty()) return;
        int id = g.hidden[rng.below(g.hidden.size())].id;
        g.hidden.erase(std::remove_if(g.hidden.begin(), g.hidden.end(),
                                      [&](const HiddenUnit& u) { return u.id == id; }),
                       g.hidden.end());
        g.connections.erase(std::remove_if(g.connections.begin(), g.connections.end(),
                                           [&](const Connection& c) {
                                               return c.source == id || c.target == id;
                                           }),
                            g.connections.end());
        return;
    }
    if (take(weights.add_connection)) {
        Connection c;
        c.kind = rng.bernoulli(0.5) ? ConnectionKind::feedforward : ConnectionKind::recurrent;
        c.source = any_source(c.kind == ConnectionKind::recurrent);
        c.target = any_target();
        c.weight = random_rational(rng);
        for (const auto& existing : g.connections)
            if (existing.source == c.source && existing.target == c.target &&
                existing.kind == c.kind)
                return;
        RnnGenome backup = g;
        g.connections.push_back(c);
        if (!genome_valid(g)) g = std::move(backup);
        return;
    }
    if (take(weights.remove_connection)) {
        if (g.connections.empty()) return;
        g.connections.erase(g.connections.begin() +
                            static_cast<std::ptrdiff_t>(rng.below(g.connections.size())));
        return;
    }
    if (take(weights.perturb_weight)) {
        std::size_t slots = weight_slot_count(g);
        if (slots == 0) return;
        Rational* w = weight_slot(g, rng.below(slots));
        long long den = 1ll << rng.below(3);  // 1, 2, or 4
        Rational delta(rng.bernoulli(0.5) ? 1 : -1, den);
        *w = *w + delta;
        clamp_weight(*w, rng);
        return;
    }
    if (take(weights.replace_weight)) {
        std::size_t slots = weight_slot_count(g);
        if (slots == 0) return;
        *weight_slot(g, rng.below(slots)) = random_rational(rng);
        return;
    }
    if (take(weights.change_activation)) {
        if (g.hidden.empty()) return;
        HiddenUnit& u = g.hidden[rng.below(g.hidden.size())];
        Activation next = random_activation(rng);
        while (next == u.activation) next = random_activation(rng);
        u.activation = next;
        return;
    }
    // toggle connection kind
    if (g.connections.empty()) return;
    std::size_t k = rng.below(g.connections.size());
    RnnGenome backup = g;
    g.connections[k].kind = g.connections[k].kind == ConnectionKind::feedforward
                                ? ConnectionKind::recurrent
                                : ConnectionKind::feedforward;
    if (!genome_valid(g)) g = std::move(backup);
}

struct Island {
    std::vector<Individual> population;
    Rng rng{0};
    std::uint64_t next_id = 0;
    double best_total_after_last_gen = std::numeric_limits<double>::infinity();
};

struct SearchState {
    std::vector<Island> islands;
    Individual best;  // best ever seen
    bool has_best = false;
    long long generation = 0;  // generations completed
    std::vector<TraceRow> trace;
};

json score_to_json(const MdlScore& s) {
    json j;
    j["grammar_bits"] = s.grammar_bits;
    if (s.finite())
        j["data_bits"] = s.data_bits;
    else
        j["data_bits"] = "inf";
    return j;
}

MdlScore score_from_json(const json& j) {
    MdlScore s;
    s.grammar_bits = j.at("grammar_bits").get<double>();
    if (j.at("data_bits").is_string())
        s.data_bits = std::numeric_limits<double>::infinity();
    else
        s.data_bits = j.at("data_bits").get<double>();
    return s;
}

constexpr int kCheckpointVersion = 1;

json checkpoint_to_json(const SearchState& state, const EvolutionConfig& cfg) {
    json j;
    j["format_version"] = kCheckpointVersion;
    j["generation"] = state.generation;
    j["population_size"] = cfg.population_size;
    j["island_size"] = cfg.island_size;
    j["seed"] = cfg.seed;
    j["islands"] = json::array();
    for (const auto& isl : state.islands) {
        json ji;
        ji["rng_state"] = isl.rng.save_state();
        ji["next_id"] = isl.next_id;
        ji["population"] = json::array();
        for (const auto& ind : isl.population) {
            json jp;
            jp["genome"] = genome_to_text(ind.genome);
            jp["score"] = score_to_json(ind.score);
            jp["id"] = ind.id;
            ji["population"].push_back(std::move(jp));
        }
        j["islands"].push_back(std::move(ji));
    }
    if (state.has_best) {
        j["best"] = genome_to_text(state.best.genome);
        j["best_score"] = score_to_json(state.best.score);
        j["best_id"] = state.best.id;
    }
    j["trace"] = json::array();
    for (const auto& row : state.trace)
        j["trace"].push_back({row.generation, row.best_total, row.grammar_bits, row.data_bits});
    return j;
}

SearchState checkpoint_from_json(const json& j, const EvolutionConfig& cfg,
                                 const std::string& origin) {
    if (j.value("format_version", -1) != kCheckpointVersion)
        throw FormatError(origin + ": unsupported checkpoint version");
    if (j.at("population_size").get<std::size_t>() != cfg.population_size ||
        j.at("island_size").get<std::size_t>() != cfg.island_size)
        throw UsageError(origin + ": checkpoint population layout does not match the config");
    SearchState state;
    state.generation = j.at("generation").get<long long>();
    for (const auto& ji : j.at("islands")) {
        Island isl;
        isl.rng.load_state(ji.at("rng_state").get<std::string>());
        isl.next_id = ji.at("next_id").get<std::uint64_t>();
        for (const auto& jp : ji.at("population")) {
            Individual ind;
            ind.genome = genome_from_text(jp.at("genome").get<std::string>(), origin);
            ind.score = score_from_json(jp.at("score"));
            ind.id = jp.at("id").get<std::uint64_t>();
            isl.population.push_back(std::move(ind));
        }
        state.islands.push_back(std::move(isl));
    }
    if (j.contains("best")) {
        state.best.genome = genome_from_text(j.at("best").get<std::string>(), origin);
        state.best.score = score_from_json(j.at("best_score"));
        state.best.id = j.value("best_id", std::uint64_t{0});
        state.has_best = true;
    }
    for (const auto& row : j.at("trace"))
        state.trace.push_back({row.at(0).get<long long>(), row.at(1).get<double>(),
                               row.at(2).get<double>(), row.at(3).get<double>()});
    return state;
}

}  // namespace

std::string trace_tsv(const std::vector<TraceRow>& trace) {
    std::string out = "generation\tbest_total\tgrammar_bits\tdata_bits\n";
    char buf[128];
    for (const auto& row : trace) {
        std::snprintf(buf, sizeof buf, "%lld\t%.17g\t%.17g\t%.17g\n", row.generation,
                      row.best_total, row.grammar_bits, row.data_bits);
        out += buf;
    }
    return out;
}

EvolveResult evolve(const LanguageSpec& lang, const Corpus& train, const EvolutionConfig& cfg,
                    const EvolveOptions& opts) {
    cfg.validate();
    const int vocab = lang.vocabulary.size();
    const std::size_t n_islands = cfg.islands();
    const std::size_t elite_count =
        std::max<std::size_t>(1, static_cast<std::size_t>(cfg.elite_ratio *
                                                          static_cast<double>(cfg.island_size)));

    auto score_of = [&](const RnnGenome& g) { return mdl_score(g, lang, train); };

    SearchState state;
    if (!opts.resume_checkpoint.empty()) {
        json j;
        try {
            j = json::parse(read_file(opts.resume_checkpoint));
        } catch (const json::exception& e) {
            throw FormatError(opts.resume_checkpoint + ": cannot parse checkpoint: " + e.what());
        }
        state = checkpoint_from_json(j, cfg, opts.resume_checkpoint);
    } else {
        state.islands.resize(n_islands);
        for (std::size_t isl_idx = 0; isl_idx < n_islands; ++isl_idx) {
            Island& isl = state.islands[isl_idx];
            isl.rng = Rng(cfg.seed + 0x9e3779b97f4a7c15ull * (isl_idx + 1));
            isl.next_id = kIdStride * isl_idx;
            for (std::size_t i = 0; i < cfg.island_size; ++i) {
                Individual ind;
                if (!opts.initial_population.empty()) {
                    ind.genome = opts.initial_population[(isl_idx * cfg.island_size + i) %
                                                         opts.initial_population.size()];
                } else {
                    ind.genome = empty_genome(vocab);
                    std::size_t mutations = i == 0 ? 0 : 1 + i % 3;
                    for (std::size_t m = 0; m < mutations; ++m)
                        mutate(ind.genome, cfg.mutation_weights, isl.rng);
                }
                ind.score = score_of(ind.genome);
                ind.id = isl.next_id++;
                isl.population.push_back(std::move(ind));
            }
        }
        bool any_finite = false;
        for (const auto& isl : state.islands)
            for (const auto& ind : isl.population)
                if (ind.score.finite()) any_finite = true;
        if (!any_finite)
            throw Error(
                "every genome in the initial population has an infinite score; "
                "try a larger population or different seed");
        // trace row for the initial population (generation 0)
        for (auto& isl : state.islands)
            for (auto& ind : isl.population)
                if (!state.has_best || better(ind, state.best)) {
                    state.best = ind;
                    state.has_best = true;
                }
        state.trace.push_back({0, state.best.score.total(), state.best.score.grammar_bits,
                               state.best.score.data_bits});
    }

    using Clock = std::chrono::steady_clock;
    auto started = Clock::now();
    auto last_improvement = started;
    auto last_migration = started;
    auto seconds_since = [](Clock::time_point t) {
        return std::chrono::duration<double>(Clock::now() - t).count();
    };

    auto step_island = [&](Island& isl) {
        std::vector<std::size_t> order(isl.population.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return better(isl.population[a], isl.population[b]);
        });
        std::vector<Individual> next;
        next.reserve(cfg.island_size);
        for (std::size_t e = 0; e < elite_count && e < order.size(); ++e)
            next.push_back(isl.population[order[e]]);
        while (next.size() < cfg.island_size) {
            const Individual* parent = nullptr;
            for (std::size_t t = 0; t < cfg.tournament_size; ++t) {
                const Individual& cand = isl.population[isl.rng.below(isl.population.size())];
                if (!parent || better(cand, *parent)) parent = &cand;
            }
            Individual child;
            child.genome = parent->genome;
            mutate(child.genome, cfg.mutation_weights, isl.rng);
            child.score = score_of(child.genome);
            child.id = isl.next_id++;
            next.push_back(std::move(child));
        }
        isl.population = std::move(next);
        isl.best_total_after_last_gen = std::numeric_limits<double>::infinity();
        for (const auto& ind : isl.population)
            if (ind.score.finite())
                isl.best_total_after_last_gen =
                    std::min(isl.best_total_after_last_gen, ind.score.total());
    };

    auto migrate = [&]() {
        if (state.islands.size() < 2) return;
        std::vector<Individual> bests;
        for (auto& isl : state.islands) {
            const Individual* best = &isl.population.front();
            for (const auto& ind : isl.population)
                if (better(ind, *best)) best = &ind;
            bests.push_back(*best);
        }
        for (std::size_t i = 0; i < state.islands.size(); ++i) {
            Island& target = state.islands[(i + 1) % state.islands.size()];
            std::size_t worst = 0;
            for (std::size_t k = 1; k < target.population.size(); ++k)
                if (better(target.population[worst], target.population[k])) worst = k;
            target.population[worst] = bests[i];
        }
    };

    auto write_checkpoint = [&]() {
        if (opts.checkpoint_path.empty()) return;
        write_file_atomic(opts.checkpoint_path, checkpoint_to_json(state, cfg).dump(1) + "\n");
    };

    EvolveResult result;
    long long target_generation = cfg.generations;
    while (state.generation < target_generation) {
        ++state.generation;

        if (cfg.jobs > 1 && state.islands.size() > 1) {
            std::vector<std::thread> threads;
            for (auto& isl : state.islands)
                threads.emplace_back([&isl, &step_island]() { step_island(isl); });
            for (auto& t : threads) t.join();
        } else {
            for (auto& isl : state.islands) step_island(isl);
        }

        bool improved = false;
        for (auto& isl : state.islands)
            for (auto& ind : isl.population)
                if (!state.has_best || better(ind, state.best)) {
                    state.best = ind;
                    state.has_best = true;
                    improved = true;
                }
        if (improved) last_improvement = Clock::now();
        state.trace.push_back({state.generation, state.best.score.total(),
                               state.best.score.grammar_bits, state.best.score.data_bits});

        bool migrate_now = cfg.migration_interval_generations > 0 &&
                           state.generation % cfg.migration_interval_generations == 0;
        if (cfg.migration_interval_seconds > 0 &&
            seconds_since(last_migration) >= cfg.migration_interval_seconds)
            migrate_now = true;
        if (migrate_now) {
            migrate();
            last_migration = Clock::now();
        }

        if (opts.checkpoint_every > 0 && state.generation % opts.checkpoint_every == 0)
            write_checkpoint();

        if (cfg.stagnation_seconds > 0 &&
            seconds_since(last_improvement) >= cfg.stagnation_seconds) {
            result.stopped_by_stagnation = true;
            break;
        }
    }

    write_checkpoint();
    result.best = state.best.genome;
    result.best_score = state.best.score;
    result.trace = state.trace;
    result.generations_run = state.generation;
    return result;
}

}  // namespace langbench
