#pragma once

#include "langbench/rnn.hpp"

namespace langbench {

// Hand-built counter network for the equal-block a/b language (vocabulary
// #, a, b). One ReLU hidden unit with a unit self-loop tracks #a - #b; the
// output layer reads the counter and the current input symbol. At every
// deterministic step the correct symbol receives probability exactly 1; at
// non-deterministic steps the distribution roughly follows a geometric
// generator with prior 0.3, which keeps its description-length cost on
// sampled corpora low.
RnnGenome reference_anbn_counter();

// Hand-built depth network for the single-pair bracket language (vocabulary
// #, (, )). A ReLU depth counter plus the indicator min(depth, 1) drive
// normalized-relu outputs with exact zeros on invalid symbols, so categorical
// accuracy is 1.0 at epsilon = 0.
RnnGenome reference_dyck1();

}  // namespace langbench
